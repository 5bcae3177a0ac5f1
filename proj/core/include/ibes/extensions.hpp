#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ibes/rules.hpp"

namespace ibes {

// Shape bounds for rule enumeration plus a hard cap on how many extensions a
// single enumeration may visit. The extension space is finite but
// exponential; the cap turns blow-ups into clean errors.
struct EnumerationBounds {
  int max_premises = 1;
  int max_hyps = 1;
  int max_extra_rules = 1;
  std::uint64_t extension_cap = 20'000'000;

  bool operator==(const EnumerationBounds&) const = default;
};

// All distinct canonical rules over the universe within the shape bounds:
// hyp sets of size <= max_hyps, premise sets of size <= max_premises,
// premises with concl in hyps excluded (they canonicalize away).
// Deterministic order.
std::vector<AtomicRule> candidate_rules(const Universe& u, const EnumerationBounds& b);

// Exact number of extensions enumerate_extensions would yield (no cap check).
std::uint64_t count_extensions(const Base& base, const Universe& u,
                               const EnumerationBounds& b);

// Visits every base C with base subseteq C, |C \ base| <= max_extra_rules and
// all rules within the shape bounds, in a fixed order without duplicates.
// The base itself is visited first. Throws CapError when the extension count
// exceeds the cap, ConfigError when the base violates the bounds.
void for_each_extension(const Base& base, const Universe& u, const EnumerationBounds& b,
                        const std::function<void(const Base&)>& visit);

std::vector<Base> enumerate_extensions(const Base& base, const Universe& u,
                                       const EnumerationBounds& b);

}  // namespace ibes
