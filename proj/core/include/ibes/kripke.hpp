#pragma once

#include <map>
#include <vector>

#include "ibes/formula.hpp"
#include "ibes/poset.hpp"

namespace ibes {

// Kripke model over a finite poset of worlds. Atom valuations must be
// upward closed: if w <= w' and w forces p then w' forces p.
class KripkeModel {
 public:
  KripkeModel() = default;
  KripkeModel(Poset worlds, std::map<Atom, std::vector<bool>> atom_val);

  const Poset& worlds() const { return worlds_; }
  const std::map<Atom, std::vector<bool>>& atom_val() const { return atom_val_; }
  bool forces_atom(int world, const Atom& a) const;

 private:
  Poset worlds_;
  std::map<Atom, std::vector<bool>> atom_val_;
};

// The standard clauses: conj/disj pointwise, impl quantifying over w' >= w,
// bot never.
bool kripke_eval(const KripkeModel& m, int world, const Formula& phi);

// Per-world evaluation of phi, indexed by world.
std::vector<bool> kripke_column(const KripkeModel& m, const Formula& phi);

// for all w: if w forces every member of gamma then w forces phi.
bool kripke_sequent_holds(const KripkeModel& m, const FormulaSet& gamma,
                          const Formula& phi);

}  // namespace ibes
