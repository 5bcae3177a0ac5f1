#include "ibes/extensions.hpp"

#include <algorithm>

#include "ibes/errors.hpp"

namespace ibes {

namespace {

// Subsets of {0..n-1} of size exactly k, lexicographic, via a callback.
// Returns false if the callback asks to stop.
template <typename F>
void for_each_combination(int n, int k, const F& f) {
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; i++) idx[static_cast<std::size_t>(i)] = i;
  if (k == 0) {
    f(idx);
    return;
  }
  if (k > n) return;
  while (true) {
    f(idx);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) i--;
    if (i < 0) return;
    idx[static_cast<std::size_t>(i)]++;
    for (int j = i + 1; j < k; j++) {
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < k; i++) {
    r = r * (n - i) / (i + 1);
  }
  return r;
}

void check_bounds_hold(const Base& base, const EnumerationBounds& b) {
  for (const auto& r : base.rules()) {
    if (static_cast<int>(r.premises().size()) > b.max_premises) {
      throw ConfigError("base rule " + render_rule(r) + " exceeds max_premises");
    }
    for (const auto& p : r.premises()) {
      if (static_cast<int>(p.hyps.size()) > b.max_hyps) {
        throw ConfigError("base rule " + render_rule(r) + " exceeds max_hyps");
      }
    }
  }
}

}  // namespace

std::vector<AtomicRule> candidate_rules(const Universe& u, const EnumerationBounds& b) {
  if (b.max_premises < 0 || b.max_hyps < 0) {
    throw ConfigError("enumeration bounds must be non-negative");
  }
  const int n = u.size();
  // hyp sets of size <= max_hyps, ordered by size then lexicographically
  std::vector<AtomSet> hyp_sets;
  for (int k = 0; k <= std::min(b.max_hyps, n); k++) {
    for_each_combination(n, k, [&](const std::vector<int>& idx) {
      std::vector<Atom> atoms;
      atoms.reserve(idx.size());
      for (int i : idx) atoms.push_back(u.at(i));
      hyp_sets.emplace_back(std::move(atoms));
    });
  }
  // premises (H => q) with q not in H
  std::vector<RulePremise> premises;
  for (const auto& h : hyp_sets) {
    for (int q = 0; q < n; q++) {
      if (h.contains(u.at(q))) continue;
      premises.push_back(RulePremise{h, u.at(q)});
    }
  }
  // rules: premise subsets of size <= max_premises, times conclusions
  std::vector<AtomicRule> rules;
  const int m = static_cast<int>(premises.size());
  for (int k = 0; k <= std::min(b.max_premises, m); k++) {
    for_each_combination(m, k, [&](const std::vector<int>& idx) {
      std::vector<RulePremise> ps;
      ps.reserve(idx.size());
      for (int i : idx) ps.push_back(premises[static_cast<std::size_t>(i)]);
      for (int r = 0; r < n; r++) {
        rules.emplace_back(ps, u.at(r));
      }
    });
  }
  return rules;
}

namespace {

std::vector<AtomicRule> fresh_candidates(const Base& base, const Universe& u,
                                         const EnumerationBounds& b) {
  std::vector<AtomicRule> cands = candidate_rules(u, b);
  std::vector<AtomicRule> fresh;
  fresh.reserve(cands.size());
  for (auto& r : cands) {
    if (!base.contains(r)) fresh.push_back(std::move(r));
  }
  return fresh;
}

}  // namespace

std::uint64_t count_extensions(const Base& base, const Universe& u,
                               const EnumerationBounds& b) {
  check_bounds_hold(base, b);
  require_in_universe(base, u);
  const std::uint64_t m = fresh_candidates(base, u, b).size();
  std::uint64_t total = 0;
  for (int k = 0; k <= b.max_extra_rules; k++) {
    total += binomial(m, static_cast<std::uint64_t>(k));
  }
  return total;
}

void for_each_extension(const Base& base, const Universe& u, const EnumerationBounds& b,
                        const std::function<void(const Base&)>& visit) {
  check_bounds_hold(base, b);
  require_in_universe(base, u);
  if (b.max_extra_rules < 0) throw ConfigError("max_extra_rules must be non-negative");

  const std::vector<AtomicRule> fresh = fresh_candidates(base, u, b);
  const int m = static_cast<int>(fresh.size());

  std::uint64_t total = 0;
  for (int k = 0; k <= b.max_extra_rules; k++) {
    total += binomial(static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(k));
  }
  if (total > b.extension_cap) {
    throw CapError("extension space of " + std::to_string(total) +
                       " bases exceeds the enumeration cap",
                   b.extension_cap);
  }

  for (int k = 0; k <= std::min(b.max_extra_rules, m); k++) {
    for_each_combination(m, k, [&](const std::vector<int>& idx) {
      std::vector<AtomicRule> rules = base.rules();
      rules.reserve(rules.size() + idx.size());
      for (int i : idx) rules.push_back(fresh[static_cast<std::size_t>(i)]);
      visit(Base(std::move(rules)));
    });
  }
}

std::vector<Base> enumerate_extensions(const Base& base, const Universe& u,
                                       const EnumerationBounds& b) {
  std::vector<Base> out;
  for_each_extension(base, u, b, [&](const Base& c) { out.push_back(c); });
  return out;
}

}  // namespace ibes
