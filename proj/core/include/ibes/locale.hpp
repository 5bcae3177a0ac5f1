#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "ibes/extensions.hpp"
#include "ibes/formula.hpp"
#include "ibes/poset.hpp"
#include "ibes/rules.hpp"

namespace ibes {

// Upward-closed subset of a finite poset (at most 64 elements), stored as a
// bitmask over element indices. Upward closure is validated on construction.
class Upset {
 public:
  Upset() = default;
  Upset(std::shared_ptr<const Poset> poset, std::uint64_t members);

  static Upset empty(std::shared_ptr<const Poset> poset);
  static Upset full(std::shared_ptr<const Poset> poset);
  static Upset principal(std::shared_ptr<const Poset> poset, int element);  // up-cone

  bool contains(int i) const { return (members_ >> i) & 1u; }
  std::uint64_t mask() const { return members_; }
  const std::shared_ptr<const Poset>& poset() const { return poset_; }
  std::size_t count() const;

  bool subset_of(const Upset& other) const;
  bool operator==(const Upset& other) const;

 private:
  std::shared_ptr<const Poset> poset_;
  std::uint64_t members_ = 0;
};

// Heyting operations on the lattice of upsets: meet and join are
// intersection and union, implies(U, V) holds at w iff every w' >= w in U is
// in V. Mixed posets are rejected.
Upset up_meet(const Upset& a, const Upset& b);
Upset up_join(const Upset& a, const Upset& b);
Upset up_implies(const Upset& a, const Upset& b);

struct HeytingOps {
  std::shared_ptr<const Poset> poset;
  Upset top() const;
  Upset bottom() const;
  Upset meet(const Upset& a, const Upset& b) const { return up_meet(a, b); }
  Upset join(const Upset& a, const Upset& b) const { return up_join(a, b); }
  Upset implies(const Upset& a, const Upset& b) const { return up_implies(a, b); }
};
HeytingOps heyting_ops(std::shared_ptr<const Poset> poset);

// All upsets of the poset, ascending mask order. Capped at 16 elements.
std::vector<Upset> all_upsets(const std::shared_ptr<const Poset>& poset);

// The valuation v[[p]]: one upset per atom, all over the same poset.
class AtomInterp {
 public:
  AtomInterp() = default;
  AtomInterp(std::shared_ptr<const Poset> poset, std::map<Atom, Upset> val);

  const std::shared_ptr<const Poset>& poset() const { return poset_; }
  const Upset& at(const Atom& a) const;  // throws on missing atom
  const std::map<Atom, Upset>& values() const { return val_; }
  std::size_t atom_count() const { return val_.size(); }

 private:
  std::shared_ptr<const Poset> poset_;
  std::map<Atom, Upset> val_;
};

// Validity-based semantics: atoms through the interpretation, conjunction
// and implication through the Heyting operations, disjunction through the
// Sandqvist-style clause over the poset, bot as the closed bottom K(empty).
Upset vsem(const Formula& phi, const AtomInterp& interp);

// The nucleus KU = intersection over atoms p of (U -> v[[p]]) -> v[[p]].
// Rejects an empty atom set (the product would be degenerate).
Upset nucleus_K(const Upset& u, const AtomInterp& interp);

// The closed join: intersection over atoms p of
// (U -> v[[p]]) -> ((V -> v[[p]]) -> v[[p]]). Needs no enumeration, so it
// works on posets too large for OmegaK.
Upset closed_join(const Upset& u, const Upset& v, const AtomInterp& interp);

// The sublocale of K-closed upsets with its Heyting structure. join_K is the
// least closed upper bound computed by the closed-join formula.
class OmegaK {
 public:
  OmegaK(AtomInterp interp);  // enumerates closed upsets; poset capped at 16

  const std::vector<Upset>& closed() const { return closed_; }
  bool is_closed(const Upset& u) const;

  Upset join_K(const Upset& u, const Upset& v) const;
  Upset meet(const Upset& u, const Upset& v) const { return up_meet(u, v); }
  Upset implies(const Upset& u, const Upset& v) const { return up_implies(u, v); }
  Upset top() const;
  Upset bottom() const;  // K(empty)

  const AtomInterp& interp() const { return interp_; }

 private:
  AtomInterp interp_;
  std::vector<Upset> closed_;
};

inline OmegaK omega_K(AtomInterp interp) { return OmegaK(std::move(interp)); }

// The poset of bases within bounds ordered by inclusion, with the atomic
// valuation v[[p]] = set of bases deriving p. bases[i] corresponds to poset
// element i.
struct BesPoset {
  std::shared_ptr<const Poset> poset;
  AtomInterp interp;
  std::vector<Base> bases;
  Universe universe;
  EnumerationBounds bounds;
};
BesPoset bes_poset(const Universe& universe, const EnumerationBounds& bounds);

}  // namespace ibes
