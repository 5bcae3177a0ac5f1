#include "ibes/saturate.hpp"

#include "ibes/errors.hpp"

namespace ibes {

VarContext canonical_context(const AtomSet& hyps) {
  VarContext ctx;
  ctx.reserve(hyps.size());
  for (const auto& a : hyps) ctx.emplace_back("x_" + a.name, a);
  return ctx;
}

DerivTable::DerivTable(Universe u) : universe_(std::move(u)) {
  terms_.assign((std::size_t{1} << universe_.size()) * universe_.size(), nullptr);
}

std::size_t DerivTable::slot(std::uint32_t mask, int atom_idx) const {
  return static_cast<std::size_t>(mask) * universe_.size() +
         static_cast<std::size_t>(atom_idx);
}

bool DerivTable::derivable_at(std::uint32_t mask, int atom_idx) const {
  return terms_[slot(mask, atom_idx)] != nullptr;
}

DerivTermPtr DerivTable::term_at(std::uint32_t mask, int atom_idx) const {
  return terms_[slot(mask, atom_idx)];
}

bool DerivTable::derivable(const AtomSet& hyps, const Atom& concl) const {
  int i = universe_.index_of(concl);
  if (i < 0) throw UniverseError("atom '" + concl.name + "' outside the universe");
  return derivable_at(atomset_mask(hyps, universe_), i);
}

DerivTermPtr DerivTable::term(const AtomSet& hyps, const Atom& concl) const {
  int i = universe_.index_of(concl);
  if (i < 0) throw UniverseError("atom '" + concl.name + "' outside the universe");
  return term_at(atomset_mask(hyps, universe_), i);
}

std::size_t DerivTable::derivable_count() const {
  std::size_t n = 0;
  for (const auto& t : terms_) {
    if (t) n++;
  }
  return n;
}

DerivTable saturate(const Base& base, const Universe& universe) {
  if (universe.size() > 16) {
    throw CapError("saturation universe too large: " + std::to_string(universe.size()) +
                       " atoms",
                   16);
  }
  require_in_universe(base, universe);

  const int n = universe.size();
  const std::uint32_t masks = 1u << n;
  DerivTable table(universe);

  // (Ref)
  std::vector<DerivTermPtr> ref_terms(static_cast<std::size_t>(n));
  for (int i = 0; i < n; i++) ref_terms[i] = DerivTerm::var("x_" + universe.at(i).name);
  for (std::uint32_t mask = 0; mask < masks; mask++) {
    for (int i = 0; i < n; i++) {
      if (mask & (1u << i)) table.terms_[table.slot(mask, i)] = ref_terms[i];
    }
  }

  // Per-rule precomputation: premise hyp masks and conclusion indices.
  struct PreppedRule {
    const AtomicRule* rule;
    int concl;
    std::vector<std::pair<std::uint32_t, int>> premises;  // (hyp mask, concl idx)
  };
  std::vector<PreppedRule> prepped;
  prepped.reserve(base.rules().size());
  for (const auto& r : base.rules()) {
    PreppedRule p;
    p.rule = &r;
    p.concl = universe.index_of(r.conclusion());
    for (const auto& prem : r.premises()) {
      p.premises.emplace_back(atomset_mask(prem.hyps, universe),
                              universe.index_of(prem.concl));
    }
    prepped.push_back(std::move(p));
  }

  // (App_R) to fixpoint. A stored term never changes, so argument bodies can
  // be taken from the table as they stand. Binders for hyp atoms already in
  // the mask are unused by the stored subterm (it refers to the outer
  // "x_<atom>"); they get globally fresh "u<k>" names so that nested shared
  // subterms never repeat a binder on one path.
  std::uint64_t fresh_counter = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::uint32_t mask = 0; mask < masks; mask++) {
      for (const auto& p : prepped) {
        if (table.terms_[table.slot(mask, p.concl)]) continue;
        bool ok = true;
        for (const auto& [hmask, q] : p.premises) {
          if (!table.terms_[table.slot(mask | hmask, q)]) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
        std::vector<DerivTerm::Arg> args;
        args.reserve(p.premises.size());
        for (std::size_t i = 0; i < p.premises.size(); i++) {
          const auto& prem = p.rule->premises()[i];
          std::vector<std::string> binders;
          binders.reserve(prem.hyps.size());
          for (const auto& h : prem.hyps) {
            int hi = universe.index_of(h);
            if (mask & (1u << hi)) {
              binders.push_back("u" + std::to_string(++fresh_counter));
            } else {
              binders.push_back("x_" + h.name);
            }
          }
          args.push_back(
              {std::move(binders),
               table.terms_[table.slot(mask | p.premises[i].first, p.premises[i].second)]});
        }
        table.terms_[table.slot(mask, p.concl)] = DerivTerm::app(*p.rule, std::move(args));
        changed = true;
      }
    }
  }
  return table;
}

std::optional<DerivTermPtr> derives(const Base& base, const AtomSet& hyps,
                                    const Atom& concl, const Universe& universe) {
  DerivTable table = saturate(base, universe);
  DerivTermPtr t = table.term(hyps, concl);
  if (!t) return std::nullopt;
  return t;
}

std::vector<std::uint32_t> derivability_bitsets(const Base& base,
                                                const Universe& universe) {
  if (universe.size() > 16) {
    throw CapError("saturation universe too large: " + std::to_string(universe.size()) +
                       " atoms",
                   16);
  }
  require_in_universe(base, universe);
  const int n = universe.size();
  const std::uint32_t masks = 1u << n;

  struct Prem {
    std::uint32_t hmask;
    int concl;
  };
  struct Rule {
    int concl;
    std::vector<Prem> premises;
  };
  std::vector<Rule> rules;
  rules.reserve(base.rules().size());
  for (const auto& r : base.rules()) {
    Rule pr;
    pr.concl = universe.index_of(r.conclusion());
    for (const auto& p : r.premises()) {
      pr.premises.push_back({atomset_mask(p.hyps, universe), universe.index_of(p.concl)});
    }
    rules.push_back(std::move(pr));
  }

  std::vector<std::uint32_t> der(masks);
  for (std::uint32_t mask = 0; mask < masks; mask++) der[mask] = mask;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::uint32_t mask = 0; mask < masks; mask++) {
      for (const auto& r : rules) {
        const std::uint32_t bit = 1u << r.concl;
        if (der[mask] & bit) continue;
        bool ok = true;
        for (const auto& p : r.premises) {
          if (!(der[mask | p.hmask] & (1u << p.concl))) {
            ok = false;
            break;
          }
        }
        if (ok) {
          der[mask] |= bit;
          changed = true;
        }
      }
    }
  }
  return der;
}

}  // namespace ibes
