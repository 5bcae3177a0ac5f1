#include "ibes/bes.hpp"

#include <algorithm>

#include "ibes/decide.hpp"
#include "ibes/errors.hpp"
#include "ibes/saturate.hpp"

namespace ibes {

namespace {

void require_formula_in_universe(const Formula& phi, const Universe& u) {
  for (const auto& a : atoms_of(phi)) {
    if (!u.contains(a)) {
      throw UniverseError("formula atom '" + a.name + "' outside the configured universe");
    }
  }
}

}  // namespace

BesEvaluator::BesEvaluator(Base root, ValidityConfig cfg) : cfg_(std::move(cfg)) {
  family_ = enumerate_extensions(root, cfg_.universe, cfg_.bounds);

  std::map<std::string, int> index;
  for (int i = 0; i < static_cast<int>(family_.size()); i++) {
    index[render_base(family_[static_cast<std::size_t>(i)])] = i;
  }

  // family_[j] extends family_[i] iff the extra rules of i form a subset of
  // the extras of j; walking subsets of each member's extras finds them all
  supersets_.assign(family_.size(), {});
  const auto& root_rules = family_[0].rules();
  for (int j = 0; j < static_cast<int>(family_.size()); j++) {
    std::vector<AtomicRule> extras;
    for (const auto& r : family_[static_cast<std::size_t>(j)].rules()) {
      if (!std::binary_search(root_rules.begin(), root_rules.end(), r)) {
        extras.push_back(r);
      }
    }
    const std::size_t k = extras.size();
    for (std::uint32_t sub = 0; sub < (1u << k); sub++) {
      std::vector<AtomicRule> rules = root_rules;
      for (std::size_t b = 0; b < k; b++) {
        if (sub & (1u << b)) rules.push_back(extras[b]);
      }
      auto it = index.find(render_base(Base(std::move(rules))));
      if (it != index.end()) {
        supersets_[static_cast<std::size_t>(it->second)].push_back(j);
      }
    }
  }
  for (auto& sup : supersets_) std::sort(sup.begin(), sup.end());

  derivable_atoms_.reserve(family_.size());
  for (const auto& b : family_) {
    derivable_atoms_.push_back(derivability_bitsets(b, cfg_.universe)[0]);
  }
}

const std::vector<int>& BesEvaluator::supersets(int base_idx) const {
  return supersets_.at(static_cast<std::size_t>(base_idx));
}

const std::vector<char>& BesEvaluator::atom_column(int atom_idx) {
  return column(Formula::atom(cfg_.universe.at(atom_idx)));
}

std::vector<char> BesEvaluator::entailment_column(const Formula& theta, int atom_idx) {
  const std::vector<char> tcol = column(theta);
  const std::vector<char> pcol = atom_column(atom_idx);
  std::vector<char> ent(family_.size(), 1);
  for (std::size_t j = 0; j < family_.size(); j++) {
    for (int k : supersets_[j]) {
      if (tcol[static_cast<std::size_t>(k)] && !pcol[static_cast<std::size_t>(k)]) {
        ent[j] = 0;
        break;
      }
    }
  }
  return ent;
}

const std::vector<char>& BesEvaluator::column(const Formula& phi) {
  const std::string key = render_formula(phi);
  if (auto it = columns_.find(key); it != columns_.end()) return it->second;

  const int n = cfg_.universe.size();
  std::vector<char> col(family_.size(), 0);
  switch (phi.kind()) {
    case Formula::Kind::Atom: {
      int idx = cfg_.universe.index_of(phi.atom_ref());
      if (idx < 0) {
        throw UniverseError("atom '" + phi.atom_ref().name +
                            "' outside the configured universe");
      }
      for (std::size_t i = 0; i < family_.size(); i++) {
        col[i] = (derivable_atoms_[i] >> idx) & 1u;
      }
      break;
    }
    case Formula::Kind::Bot: {
      if (cfg_.mode == SemanticsMode::Sandqvist) {
        const std::uint32_t full = n == 0 ? 0u : ((1u << n) - 1u);
        for (std::size_t i = 0; i < family_.size(); i++) {
          col[i] = derivable_atoms_[i] == full;
        }
      }
      break;
    }
    case Formula::Kind::Conj: {
      const std::vector<char> l = column(phi.left());
      const std::vector<char> r = column(phi.right());
      for (std::size_t i = 0; i < family_.size(); i++) col[i] = l[i] && r[i];
      break;
    }
    case Formula::Kind::Impl: {
      const std::vector<char> l = column(phi.left());
      const std::vector<char> r = column(phi.right());
      for (std::size_t i = 0; i < family_.size(); i++) {
        col[i] = 1;
        for (int j : supersets_[i]) {
          if (l[static_cast<std::size_t>(j)] && !r[static_cast<std::size_t>(j)]) {
            col[i] = 0;
            break;
          }
        }
      }
      break;
    }
    case Formula::Kind::Disj: {
      if (cfg_.mode == SemanticsMode::KripkeDisjunction) {
        const std::vector<char> l = column(phi.left());
        const std::vector<char> r = column(phi.right());
        for (std::size_t i = 0; i < family_.size(); i++) col[i] = l[i] || r[i];
        break;
      }
      std::fill(col.begin(), col.end(), 1);
      for (int p = 0; p < n; p++) {
        const std::vector<char> pcol = atom_column(p);
        const std::vector<char> lent = entailment_column(phi.left(), p);
        const std::vector<char> rent = entailment_column(phi.right(), p);
        for (std::size_t i = 0; i < family_.size(); i++) {
          if (!col[i]) continue;
          for (int j : supersets_[i]) {
            const auto ju = static_cast<std::size_t>(j);
            if (lent[ju] && rent[ju] && !pcol[ju]) {
              col[i] = 0;
              break;
            }
          }
        }
      }
      break;
    }
  }
  return columns_.emplace(key, std::move(col)).first->second;
}

bool BesEvaluator::valid_at(int base_idx, const Formula& phi) {
  require_formula_in_universe(phi, cfg_.universe);
  return column(phi)[static_cast<std::size_t>(base_idx)];
}

bool BesEvaluator::entails_at(int base_idx, const FormulaSet& theta, const Formula& phi) {
  if (theta.empty()) return valid_at(base_idx, phi);
  require_formula_in_universe(phi, cfg_.universe);
  std::vector<const std::vector<char>*> tcols;
  for (const auto& t : theta) {
    require_formula_in_universe(t, cfg_.universe);
    tcols.push_back(&column(t));
  }
  const std::vector<char>& pcol = column(phi);
  for (int j : supersets_[static_cast<std::size_t>(base_idx)]) {
    const auto ju = static_cast<std::size_t>(j);
    bool all = true;
    for (const auto* tc : tcols) {
      if (!(*tc)[ju]) {
        all = false;
        break;
      }
    }
    if (all && !pcol[ju]) return false;
  }
  return true;
}

std::optional<ValidityWitness> BesEvaluator::explain_invalid(int base_idx,
                                                             const Formula& phi) {
  if (valid_at(base_idx, phi)) return std::nullopt;
  switch (phi.kind()) {
    case Formula::Kind::Atom:
      return ValidityWitness{family_[static_cast<std::size_t>(base_idx)],
                             phi.atom_ref(), phi, "at"};
    case Formula::Kind::Bot: {
      if (cfg_.mode == SemanticsMode::KripkeDisjunction) {
        return ValidityWitness{family_[static_cast<std::size_t>(base_idx)], std::nullopt,
                               phi, "bot"};
      }
      for (int p = 0; p < cfg_.universe.size(); p++) {
        if (!((derivable_atoms_[static_cast<std::size_t>(base_idx)] >> p) & 1u)) {
          return ValidityWitness{family_[static_cast<std::size_t>(base_idx)],
                                 cfg_.universe.at(p), phi, "bot"};
        }
      }
      return std::nullopt;
    }
    case Formula::Kind::Conj: {
      if (!valid_at(base_idx, phi.left())) return explain_invalid(base_idx, phi.left());
      return explain_invalid(base_idx, phi.right());
    }
    case Formula::Kind::Impl: {
      const std::vector<char>& l = column(phi.left());
      const std::vector<char>& r = column(phi.right());
      for (int j : supersets_[static_cast<std::size_t>(base_idx)]) {
        const auto ju = static_cast<std::size_t>(j);
        if (l[ju] && !r[ju]) {
          return ValidityWitness{family_[ju], std::nullopt, phi.right(), "impl"};
        }
      }
      return std::nullopt;
    }
    case Formula::Kind::Disj: {
      if (cfg_.mode == SemanticsMode::KripkeDisjunction) {
        return explain_invalid(base_idx, phi.left());
      }
      for (int p = 0; p < cfg_.universe.size(); p++) {
        const std::vector<char> pcol = atom_column(p);
        const std::vector<char> lent = entailment_column(phi.left(), p);
        const std::vector<char> rent = entailment_column(phi.right(), p);
        for (int j : supersets_[static_cast<std::size_t>(base_idx)]) {
          const auto ju = static_cast<std::size_t>(j);
          if (lent[ju] && rent[ju] && !pcol[ju]) {
            return ValidityWitness{family_[ju], cfg_.universe.at(p), phi, "disj"};
          }
        }
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::optional<ValidityWitness> BesEvaluator::explain_non_entailment(
    int base_idx, const FormulaSet& theta, const Formula& phi) {
  if (theta.empty()) return explain_invalid(base_idx, phi);
  if (entails_at(base_idx, theta, phi)) return std::nullopt;
  const std::vector<char>& pcol = column(phi);
  for (int j : supersets_[static_cast<std::size_t>(base_idx)]) {
    const auto ju = static_cast<std::size_t>(j);
    bool all = true;
    for (const auto& t : theta) {
      if (!column(t)[ju]) {
        all = false;
        break;
      }
    }
    if (all && !pcol[ju]) {
      return ValidityWitness{family_[ju], std::nullopt, phi, "inf"};
    }
  }
  return std::nullopt;
}

namespace {

ValidityReport report_shell(const ValidityConfig& cfg) {
  ValidityReport r;
  r.mode = cfg.mode;
  r.engine = cfg.engine;
  r.universe = cfg.universe;
  r.bounds = cfg.bounds;
  return r;
}

void check_prover_config(const ValidityConfig& cfg, const Base& base) {
  if (cfg.mode != SemanticsMode::Sandqvist) {
    throw ConfigError("the prover-backed engine is only available in Sandqvist mode");
  }
  if (!base.empty()) {
    throw ConfigError(
        "the prover-backed engine only answers empty-base judgments; use the "
        "brute-force engine for other bases");
  }
}

}  // namespace

ValidityReport valid_in_base(const Base& base, const Formula& phi,
                             const ValidityConfig& cfg) {
  ValidityReport r = report_shell(cfg);
  if (cfg.engine == BesEngine::ProverBacked) {
    check_prover_config(cfg, base);
    r.verdict = decide(FormulaSet{}, phi).derivable;
    return r;
  }
  BesEvaluator ev(base, cfg);
  r.extensions_examined = ev.family().size();
  r.verdict = ev.valid_at(ev.root_index(), phi);
  if (!r.verdict) r.witness = ev.explain_invalid(ev.root_index(), phi);
  return r;
}

ValidityReport entails_in_base(const Base& base, const FormulaSet& theta,
                               const Formula& phi, const ValidityConfig& cfg) {
  if (theta.empty()) return valid_in_base(base, phi, cfg);
  ValidityReport r = report_shell(cfg);
  if (cfg.engine == BesEngine::ProverBacked) {
    check_prover_config(cfg, base);
    r.verdict = decide(theta, phi).derivable;
    return r;
  }
  BesEvaluator ev(base, cfg);
  r.extensions_examined = ev.family().size();
  r.verdict = ev.entails_at(ev.root_index(), theta, phi);
  if (!r.verdict) r.witness = ev.explain_non_entailment(ev.root_index(), theta, phi);
  return r;
}

ValidityReport valid(const FormulaSet& gamma, const Formula& phi,
                     const ValidityConfig& cfg) {
  ValidityReport r = report_shell(cfg);
  if (cfg.engine == BesEngine::ProverBacked) {
    if (cfg.mode != SemanticsMode::Sandqvist) {
      throw ConfigError("the prover-backed engine is only available in Sandqvist mode");
    }
    r.verdict = decide(gamma, phi).derivable;
    return r;
  }
  BesEvaluator ev(Base{}, cfg);
  r.extensions_examined = ev.family().size();
  if (gamma.empty()) {
    // validity of phi in every base of the family
    r.verdict = true;
    for (int j = 0; j < static_cast<int>(ev.family().size()); j++) {
      if (!ev.valid_at(j, phi)) {
        r.verdict = false;
        r.witness = ev.explain_invalid(j, phi);
        break;
      }
    }
    return r;
  }
  r.verdict = ev.entails_at(ev.root_index(), gamma, phi);
  if (!r.verdict) r.witness = ev.explain_non_entailment(ev.root_index(), gamma, phi);
  return r;
}

bool consequence_from_validity(const SequentOracle& oracle, const FormulaSet& gamma,
                               const Formula& phi) {
  for (const auto& g : gamma) {
    if (!oracle(FormulaSet{}, g)) return true;  // vacuous
  }
  return oracle(FormulaSet{}, phi);
}

}  // namespace ibes
