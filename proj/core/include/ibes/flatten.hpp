#pragma once

#include <map>
#include <string>

#include "ibes/decide.hpp"
#include "ibes/formula.hpp"
#include "ibes/rules.hpp"
#include "ibes/saturate.hpp"

namespace ibes {

// Flattening of a subformula-closed set: atoms map to themselves, each
// non-atomic member gets a distinct fresh atom (f1, f2, ... in canonical
// order, skipping names already in use), and nat inverts flat on the domain.
class FlatMap {
 public:
  const FormulaSet& domain() const { return domain_; }

  Atom flat(const Formula& f) const;    // f must lie in the domain
  Formula nat(const Atom& a) const;     // identity outside flat's range
  bool is_fresh(const Atom& a) const;   // a was minted by flatten

  // The atoms of the flattened domain: domain atoms plus fresh atoms.
  Universe flat_universe() const;

  AtomSet flat_all(const FormulaSet& fs) const;

 private:
  friend FlatMap flatten(const FormulaSet& delta);
  FormulaSet domain_;
  std::map<std::string, Atom> flat_;  // keyed by rendered formula
  std::map<Atom, Formula> nat_;       // fresh atom -> formula
};

// Rejects sets that are not subformula-closed.
FlatMap flatten(const FormulaSet& delta);

// The base N over the flattened domain: rules mirroring NJ at the level of
// flattened atoms, with the schematic atom of the disjunction-elimination
// and bot rules instantiated at every atom of the flattened domain.
Base build_n_base(const FlatMap& fm);

struct CompletenessReport {
  FormulaSet gamma;
  Formula phi;
  bool nj_derivable = false;
  bool flat_derivable = false;
  bool agree = false;
  Universe flat_universe;
  std::size_t n_rule_count = 0;
};

// Runs the flattening pipeline (flatten, build N, saturate, look up the
// flattened sequent) next to the decision procedure and reports whether the
// two verdicts agree.
CompletenessReport completeness_check(const FormulaSet& gamma, const Formula& phi);

}  // namespace ibes
