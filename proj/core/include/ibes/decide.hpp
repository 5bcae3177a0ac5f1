#pragma once

#include <optional>
#include <stdexcept>

#include "ibes/formula.hpp"
#include "ibes/kripke.hpp"
#include "ibes/nj.hpp"

namespace ibes {

// Outcome of the IPL decision procedure. Exactly one branch holds and the
// witness re-checks: the term against check_nj at the queried sequent, the
// countermodel against kripke_eval (gamma forced, phi refuted at
// refuting_world).
struct Decision {
  bool derivable = false;
  NJTermPtr term;            // derivable only
  NJContext term_context;    // variable per antecedent member, canonical order
  KripkeModel countermodel;  // underivable only
  int refuting_world = -1;
};

// The verdict said underivable but no countermodel with at most the
// configured number of worlds was found. No verdict is reported in that case.
struct CountermodelBoundError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DecideOptions {
  int max_countermodel_worlds = 6;
};

// Terminating contraction-free sequent search (Dyckhoff's G4ip) with NJ term
// extraction; refutations come with a finite Kripke countermodel built from
// the prime theories over the subformula closure and then minimized.
Decision decide(const FormulaSet& gamma, const Formula& phi,
                const DecideOptions& opts = {});

// The raw prover: a checking NJ term for ctx |- phi, or nullopt.
std::optional<NJTermPtr> prove_nj(const NJContext& ctx, const Formula& phi);

}  // namespace ibes
