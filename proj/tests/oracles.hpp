#pragma once

// Test-only oracles, kept independent of the library paths they check.

#include <cstdint>
#include <random>
#include <vector>

#include "ibes/extensions.hpp"
#include "ibes/formula.hpp"
#include "ibes/rules.hpp"

namespace ibes::testing {

// Depth-bounded proof-term existence by direct recursion over the (Ref) and
// (App_R) shapes: a term of depth d is a hypothesis variable (d >= 1) or a
// rule application whose argument derivations fit in depth d - 1.
inline bool derivable_within_depth(const Base& base, const Universe& u,
                                   std::uint32_t hyp_mask, int atom_idx, int depth) {
  if (depth <= 0) return false;
  if ((hyp_mask >> atom_idx) & 1u) return true;
  if (depth < 1) return false;
  for (const auto& rule : base.rules()) {
    if (u.index_of(rule.conclusion()) != atom_idx) continue;
    if (!rule.premises().empty() && depth < 2) continue;
    bool all = true;
    for (const auto& prem : rule.premises()) {
      std::uint32_t hmask = atomset_mask(prem.hyps, u);
      if (!derivable_within_depth(base, u, hyp_mask | hmask,
                                  u.index_of(prem.concl), depth - 1)) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

// Same check, memoized over (mask, atom, depth) for the acceptance sweep.
struct DepthOracle {
  const Base& base;
  const Universe& u;
  int max_depth;

  bool derivable(std::uint32_t mask, int atom_idx) const {
    return derivable_within_depth(base, u, mask, atom_idx, max_depth);
  }
};

// Random formulas over a fixed atom pool.
class FormulaGen {
 public:
  FormulaGen(std::mt19937_64& rng, std::vector<Atom> atoms)
      : rng_(rng), atoms_(std::move(atoms)) {}

  Formula gen(int size) {
    if (size <= 1) {
      std::uniform_int_distribution<int> leaf(0, static_cast<int>(atoms_.size()));
      int pick = leaf(rng_);
      if (pick == static_cast<int>(atoms_.size())) return Formula::bot();
      return Formula::atom(atoms_[static_cast<std::size_t>(pick)]);
    }
    std::uniform_int_distribution<int> conn(0, 2);
    std::uniform_int_distribution<int> split(1, size - 1);
    int ls = split(rng_);
    Formula l = gen(ls);
    Formula r = gen(size - ls);
    switch (conn(rng_)) {
      case 0:
        return Formula::conj(l, r);
      case 1:
        return Formula::disj(l, r);
      default:
        return Formula::impl(l, r);
    }
  }

 private:
  std::mt19937_64& rng_;
  std::vector<Atom> atoms_;
};

}  // namespace ibes::testing
