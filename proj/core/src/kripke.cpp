#include "ibes/kripke.hpp"

#include "ibes/errors.hpp"

namespace ibes {

KripkeModel::KripkeModel(Poset worlds, std::map<Atom, std::vector<bool>> atom_val)
    : worlds_(std::move(worlds)), atom_val_(std::move(atom_val)) {
  const int n = worlds_.size();
  for (const auto& [atom, val] : atom_val_) {
    if (static_cast<int>(val.size()) != n) {
      throw ConfigError("valuation for atom '" + atom.name +
                        "' has wrong world count");
    }
    for (int w = 0; w < n; w++) {
      if (!val[static_cast<std::size_t>(w)]) continue;
      for (int v : worlds_.ups(w)) {
        if (!val[static_cast<std::size_t>(v)]) {
          throw ConfigError("valuation for atom '" + atom.name +
                            "' is not upward closed between " + worlds_.label(w) +
                            " and " + worlds_.label(v));
        }
      }
    }
  }
}

bool KripkeModel::forces_atom(int world, const Atom& a) const {
  auto it = atom_val_.find(a);
  if (it == atom_val_.end()) return false;
  return it->second.at(static_cast<std::size_t>(world));
}

bool kripke_eval(const KripkeModel& m, int world, const Formula& phi) {
  switch (phi.kind()) {
    case Formula::Kind::Atom:
      return m.forces_atom(world, phi.atom_ref());
    case Formula::Kind::Bot:
      return false;
    case Formula::Kind::Conj:
      return kripke_eval(m, world, phi.left()) && kripke_eval(m, world, phi.right());
    case Formula::Kind::Disj:
      return kripke_eval(m, world, phi.left()) || kripke_eval(m, world, phi.right());
    case Formula::Kind::Impl: {
      for (int v : m.worlds().ups(world)) {
        if (kripke_eval(m, v, phi.left()) && !kripke_eval(m, v, phi.right())) {
          return false;
        }
      }
      return true;
    }
  }
  return false;
}

std::vector<bool> kripke_column(const KripkeModel& m, const Formula& phi) {
  std::vector<bool> out(static_cast<std::size_t>(m.worlds().size()));
  for (int w = 0; w < m.worlds().size(); w++) {
    out[static_cast<std::size_t>(w)] = kripke_eval(m, w, phi);
  }
  return out;
}

bool kripke_sequent_holds(const KripkeModel& m, const FormulaSet& gamma,
                          const Formula& phi) {
  for (int w = 0; w < m.worlds().size(); w++) {
    bool all = true;
    for (const auto& g : gamma) {
      if (!kripke_eval(m, w, g)) {
        all = false;
        break;
      }
    }
    if (all && !kripke_eval(m, w, phi)) return false;
  }
  return true;
}

}  // namespace ibes
