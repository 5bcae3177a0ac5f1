#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ibes/derivation.hpp"
#include "ibes/rules.hpp"

namespace ibes {

// Canonical context for a hypothesis set: one variable "x_<atom>" per atom,
// in sorted atom order. Saturation terms check under this context.
VarContext canonical_context(const AtomSet& hyps);

// Saturated derivability relation of a base over a universe: for every
// judgment (P subseteq universe, r in universe) that is derivable, one
// witnessing term, found under a fixed rule order. Derivability is monotone
// in P, so presence is closed under hypothesis weakening.
class DerivTable {
 public:
  DerivTable(Universe u);

  bool derivable(const AtomSet& hyps, const Atom& concl) const;
  DerivTermPtr term(const AtomSet& hyps, const Atom& concl) const;
  bool derivable_at(std::uint32_t mask, int atom_idx) const;
  DerivTermPtr term_at(std::uint32_t mask, int atom_idx) const;

  const Universe& universe() const { return universe_; }
  std::size_t derivable_count() const;

 private:
  friend DerivTable saturate(const Base&, const Universe&);
  std::size_t slot(std::uint32_t mask, int atom_idx) const;
  Universe universe_;
  std::vector<DerivTermPtr> terms_;
};

// Least fixpoint of (Ref) and (App_R) over the universe. The universe is
// capped at 16 atoms; larger tables would not fit a mask-indexed layout.
DerivTable saturate(const Base& base, const Universe& universe);

// Some(term) iff (hyps, concl) is derivable; the term checks under
// canonical_context(hyps).
std::optional<DerivTermPtr> derives(const Base& base, const AtomSet& hyps,
                                    const Atom& concl, const Universe& universe);

// Bool-only saturation: entry [mask] has bit i set iff atom i is derivable
// from the hypothesis set mask. Same judgments as saturate, no witnesses;
// used where only verdicts matter.
std::vector<std::uint32_t> derivability_bitsets(const Base& base,
                                                const Universe& universe);

}  // namespace ibes
