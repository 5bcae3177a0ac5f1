#include "ibes/locale.hpp"

#include <algorithm>
#include <bit>

#include "ibes/errors.hpp"
#include "ibes/saturate.hpp"

namespace ibes {

namespace {

void require_same_poset(const Upset& a, const Upset& b) {
  if (a.poset() != b.poset() && !(*a.poset() == *b.poset())) {
    throw ConfigError("upset operation across different posets");
  }
}

}  // namespace

Upset::Upset(std::shared_ptr<const Poset> poset, std::uint64_t members)
    : poset_(std::move(poset)), members_(members) {
  const int n = poset_->size();
  if (n > 64) throw CapError("poset too large for upset masks", 64);
  for (int w = 0; w < n; w++) {
    if (!contains(w)) continue;
    for (int v : poset_->ups(w)) {
      if (!contains(v)) {
        throw ConfigError("set is not upward closed between " + poset_->label(w) +
                          " and " + poset_->label(v));
      }
    }
  }
}

Upset Upset::empty(std::shared_ptr<const Poset> poset) {
  return Upset(std::move(poset), 0);
}

Upset Upset::full(std::shared_ptr<const Poset> poset) {
  const int n = poset->size();
  std::uint64_t all = n >= 64 ? ~0ULL : ((1ULL << n) - 1);
  return Upset(std::move(poset), all);
}

Upset Upset::principal(std::shared_ptr<const Poset> poset, int element) {
  std::uint64_t m = 0;
  for (int v : poset->ups(element)) m |= (1ULL << v);
  return Upset(std::move(poset), m);
}

std::size_t Upset::count() const {
  return static_cast<std::size_t>(std::popcount(members_));
}

bool Upset::subset_of(const Upset& other) const {
  require_same_poset(*this, other);
  return (members_ & ~other.members_) == 0;
}

bool Upset::operator==(const Upset& other) const {
  require_same_poset(*this, other);
  return members_ == other.members_;
}

Upset up_meet(const Upset& a, const Upset& b) {
  require_same_poset(a, b);
  return Upset(a.poset(), a.mask() & b.mask());
}

Upset up_join(const Upset& a, const Upset& b) {
  require_same_poset(a, b);
  return Upset(a.poset(), a.mask() | b.mask());
}

Upset up_implies(const Upset& a, const Upset& b) {
  require_same_poset(a, b);
  const Poset& p = *a.poset();
  std::uint64_t m = 0;
  for (int w = 0; w < p.size(); w++) {
    bool in = true;
    for (int v : p.ups(w)) {
      if (a.contains(v) && !b.contains(v)) {
        in = false;
        break;
      }
    }
    if (in) m |= (1ULL << w);
  }
  return Upset(a.poset(), m);
}

Upset HeytingOps::top() const { return Upset::full(poset); }
Upset HeytingOps::bottom() const { return Upset::empty(poset); }

HeytingOps heyting_ops(std::shared_ptr<const Poset> poset) {
  return HeytingOps{std::move(poset)};
}

std::vector<Upset> all_upsets(const std::shared_ptr<const Poset>& poset) {
  const int n = poset->size();
  if (n > 16) throw CapError("upset enumeration over a poset this large refused", 16);
  std::vector<Upset> out;
  for (std::uint64_t m = 0; m < (1ULL << n); m++) {
    bool up = true;
    for (int w = 0; w < n && up; w++) {
      if (!((m >> w) & 1u)) continue;
      for (int v : poset->ups(w)) {
        if (!((m >> v) & 1u)) {
          up = false;
          break;
        }
      }
    }
    if (up) out.emplace_back(poset, m);
  }
  return out;
}

AtomInterp::AtomInterp(std::shared_ptr<const Poset> poset, std::map<Atom, Upset> val)
    : poset_(std::move(poset)), val_(std::move(val)) {
  for (const auto& [a, u] : val_) {
    if (u.poset() != poset_ && !(*u.poset() == *poset_)) {
      throw ConfigError("atom '" + a.name + "' interpreted over a different poset");
    }
  }
}

const Upset& AtomInterp::at(const Atom& a) const {
  auto it = val_.find(a);
  if (it == val_.end()) {
    throw ConfigError("no interpretation for atom '" + a.name + "'");
  }
  return it->second;
}

Upset nucleus_K(const Upset& u, const AtomInterp& interp) {
  if (interp.atom_count() == 0) {
    throw ConfigError("nucleus over an empty atom set is degenerate; refuse");
  }
  Upset acc = Upset::full(u.poset());
  for (const auto& [a, vp] : interp.values()) {
    acc = up_meet(acc, up_implies(up_implies(u, vp), vp));
  }
  return acc;
}

Upset vsem(const Formula& phi, const AtomInterp& interp) {
  const auto& poset = interp.poset();
  switch (phi.kind()) {
    case Formula::Kind::Atom:
      return interp.at(phi.atom_ref());
    case Formula::Kind::Conj:
      return up_meet(vsem(phi.left(), interp), vsem(phi.right(), interp));
    case Formula::Kind::Impl:
      return up_implies(vsem(phi.left(), interp), vsem(phi.right(), interp));
    case Formula::Kind::Bot:
      return nucleus_K(Upset::empty(poset), interp);
    case Formula::Kind::Disj: {
      if (interp.atom_count() == 0) {
        throw ConfigError("disjunction clause over an empty atom set is degenerate; refuse");
      }
      // w is in v[[phi|psi]] iff for every atom p and every w' >= w, if w'
      // lies in both (v[[phi]] -> v[[p]]) and (v[[psi]] -> v[[p]]) then w'
      // lies in v[[p]]
      Upset l = vsem(phi.left(), interp);
      Upset r = vsem(phi.right(), interp);
      const Poset& p = *poset;
      std::uint64_t m = 0;
      for (int w = 0; w < p.size(); w++) {
        bool in = true;
        for (const auto& [atom, vp] : interp.values()) {
          Upset lent = up_implies(l, vp);
          Upset rent = up_implies(r, vp);
          for (int v : p.ups(w)) {
            if (lent.contains(v) && rent.contains(v) && !vp.contains(v)) {
              in = false;
              break;
            }
          }
          if (!in) break;
        }
        if (in) m |= (1ULL << w);
      }
      return Upset(poset, m);
    }
  }
  throw ConfigError("unreachable formula kind");
}

OmegaK::OmegaK(AtomInterp interp) : interp_(std::move(interp)) {
  if (interp_.atom_count() == 0) {
    throw ConfigError("nucleus over an empty atom set is degenerate; refuse");
  }
  for (const auto& u : all_upsets(interp_.poset())) {
    if (nucleus_K(u, interp_) == u) closed_.push_back(u);
  }
}

bool OmegaK::is_closed(const Upset& u) const {
  return nucleus_K(u, interp_) == u;
}

Upset closed_join(const Upset& u, const Upset& v, const AtomInterp& interp) {
  if (interp.atom_count() == 0) {
    throw ConfigError("closed join over an empty atom set is degenerate; refuse");
  }
  Upset acc = Upset::full(interp.poset());
  for (const auto& [a, vp] : interp.values()) {
    acc = up_meet(acc, up_implies(up_implies(u, vp),
                                  up_implies(up_implies(v, vp), vp)));
  }
  return acc;
}

Upset OmegaK::join_K(const Upset& u, const Upset& v) const {
  return closed_join(u, v, interp_);
}

Upset OmegaK::top() const { return Upset::full(interp_.poset()); }

Upset OmegaK::bottom() const {
  return nucleus_K(Upset::empty(interp_.poset()), interp_);
}

BesPoset bes_poset(const Universe& universe, const EnumerationBounds& bounds) {
  BesPoset out;
  out.universe = universe;
  out.bounds = bounds;
  out.bases = enumerate_extensions(Base{}, universe, bounds);
  const int m = static_cast<int>(out.bases.size());
  if (m > 64) {
    throw CapError("base poset with " + std::to_string(m) + " elements exceeds the cap",
                   64);
  }
  std::vector<std::string> labels;
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < m; i++) {
    labels.push_back("B" + std::to_string(i));
    for (int j = 0; j < m; j++) {
      if (out.bases[static_cast<std::size_t>(i)].subset_of(
              out.bases[static_cast<std::size_t>(j)])) {
        pairs.emplace_back(i, j);
      }
    }
  }
  auto poset = std::make_shared<const Poset>(std::move(labels), std::move(pairs));
  std::map<Atom, Upset> val;
  std::vector<std::uint64_t> atom_masks(static_cast<std::size_t>(universe.size()), 0);
  for (int i = 0; i < m; i++) {
    std::uint32_t der =
        derivability_bitsets(out.bases[static_cast<std::size_t>(i)], universe)[0];
    for (int a = 0; a < universe.size(); a++) {
      if ((der >> a) & 1u) atom_masks[static_cast<std::size_t>(a)] |= (1ULL << i);
    }
  }
  for (int a = 0; a < universe.size(); a++) {
    val.emplace(universe.at(a), Upset(poset, atom_masks[static_cast<std::size_t>(a)]));
  }
  out.poset = poset;
  out.interp = AtomInterp(poset, std::move(val));
  return out;
}

}  // namespace ibes
