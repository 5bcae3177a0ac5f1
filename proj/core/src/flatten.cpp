#include "ibes/flatten.hpp"

#include <algorithm>

#include "ibes/errors.hpp"

namespace ibes {

Atom FlatMap::flat(const Formula& f) const {
  auto it = flat_.find(render_formula(f));
  if (it == flat_.end()) {
    throw ConfigError("formula '" + render_formula(f) + "' is not in the flattening domain");
  }
  return it->second;
}

Formula FlatMap::nat(const Atom& a) const {
  auto it = nat_.find(a);
  if (it == nat_.end()) return Formula::atom(a);
  return it->second;
}

bool FlatMap::is_fresh(const Atom& a) const { return nat_.count(a) > 0; }

Universe FlatMap::flat_universe() const {
  std::vector<Atom> atoms;
  for (const auto& [key, a] : flat_) atoms.push_back(a);
  return Universe(std::move(atoms));
}

AtomSet FlatMap::flat_all(const FormulaSet& fs) const {
  std::vector<Atom> atoms;
  for (const auto& f : fs) atoms.push_back(flat(f));
  return AtomSet(std::move(atoms));
}

FlatMap flatten(const FormulaSet& delta) {
  if (!is_subformula_closed(delta)) {
    throw ConfigError("flattening domain is not subformula-closed");
  }
  FlatMap fm;
  fm.domain_ = delta;
  std::vector<Atom> taken = atoms_of(delta);
  auto is_taken = [&](const std::string& name) {
    return std::binary_search(taken.begin(), taken.end(), Atom(name));
  };
  int counter = 0;
  for (const auto& f : delta) {
    if (f.is_atom()) {
      fm.flat_[render_formula(f)] = f.atom_ref();
      continue;
    }
    std::string name;
    do {
      name = "f" + std::to_string(++counter);
    } while (is_taken(name));
    Atom fresh(name);
    fm.flat_[render_formula(f)] = fresh;
    fm.nat_[fresh] = f;
  }
  return fm;
}

Base build_n_base(const FlatMap& fm) {
  const Universe u = fm.flat_universe();
  std::vector<AtomicRule> rules;
  auto free_premise = [](const Atom& a) { return RulePremise{AtomSet{}, a}; };
  for (const auto& delta : fm.domain()) {
    if (delta.is_atom()) continue;
    Atom d = fm.flat(delta);
    switch (delta.kind()) {
      case Formula::Kind::Impl: {
        Atom a = fm.flat(delta.left()), b = fm.flat(delta.right());
        rules.push_back(AtomicRule({RulePremise{AtomSet({a}), b}}, d));          // I
        rules.push_back(AtomicRule({free_premise(d), free_premise(a)}, b));      // E
        break;
      }
      case Formula::Kind::Conj: {
        Atom a = fm.flat(delta.left()), b = fm.flat(delta.right());
        rules.push_back(AtomicRule({free_premise(a), free_premise(b)}, d));      // I
        rules.push_back(AtomicRule({free_premise(d)}, a));                       // E1
        rules.push_back(AtomicRule({free_premise(d)}, b));                       // E2
        break;
      }
      case Formula::Kind::Disj: {
        Atom a = fm.flat(delta.left()), b = fm.flat(delta.right());
        rules.push_back(AtomicRule({free_premise(a)}, d));                       // I1
        rules.push_back(AtomicRule({free_premise(b)}, d));                       // I2
        for (const auto& p : u.atoms()) {                                        // E
          rules.push_back(AtomicRule(
              {free_premise(d), RulePremise{AtomSet({a}), p}, RulePremise{AtomSet({b}), p}},
              p));
        }
        break;
      }
      case Formula::Kind::Bot: {
        for (const auto& p : u.atoms()) {
          rules.push_back(AtomicRule({free_premise(d)}, p));
        }
        break;
      }
      default:
        break;
    }
  }
  Base n(std::move(rules), "N");
  return n;
}

CompletenessReport completeness_check(const FormulaSet& gamma, const Formula& phi) {
  CompletenessReport report;
  report.gamma = gamma;
  report.phi = phi;

  FormulaSet delta = subformulas(gamma.unioned(subformulas(phi)));
  FlatMap fm = flatten(delta);
  Base n = build_n_base(fm);
  Universe u = fm.flat_universe();
  report.flat_universe = u;
  report.n_rule_count = n.size();

  DerivTable table = saturate(n, u);
  report.flat_derivable = table.derivable(fm.flat_all(gamma), fm.flat(phi));

  report.nj_derivable = decide(gamma, phi).derivable;
  report.agree = report.flat_derivable == report.nj_derivable;
  return report;
}

}  // namespace ibes
