#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "ibes/formula.hpp"

namespace ibes {

// Finite set of atoms (the hypothesis sets P, Q, S). Sorted, duplicate-free.
class AtomSet {
 public:
  AtomSet() = default;
  explicit AtomSet(std::vector<Atom> atoms);

  void insert(const Atom& a);
  bool contains(const Atom& a) const;
  bool subset_of(const AtomSet& other) const;
  AtomSet unioned(const AtomSet& other) const;
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  const std::vector<Atom>& atoms() const { return atoms_; }
  auto begin() const { return atoms_.begin(); }
  auto end() const { return atoms_.end(); }

  auto operator<=>(const AtomSet&) const = default;

 private:
  std::vector<Atom> atoms_;
};

// One premise (P_i => q_i) of a second-level rule: from hypotheses P_i,
// conclude q_i.
struct RulePremise {
  AtomSet hyps;
  Atom concl;

  auto operator<=>(const RulePremise&) const = default;
};

// Atomic rule ((P1 => q1), ..., (Pn => qn)) => r. Canonical form: premises
// sorted and duplicate-free, and premises whose conclusion already sits in
// its own hypotheses are dropped (Ref derives them in any base, so the rule
// is equivalent without them).
class AtomicRule {
 public:
  AtomicRule() = default;
  AtomicRule(std::vector<RulePremise> premises, Atom conclusion);

  // Premise-free rule "=> r".
  static AtomicRule axiom(Atom conclusion);

  const std::vector<RulePremise>& premises() const { return premises_; }
  const Atom& conclusion() const { return conclusion_; }
  std::vector<Atom> mentioned_atoms() const;

  auto operator<=>(const AtomicRule&) const = default;

 private:
  std::vector<RulePremise> premises_;
  Atom conclusion_;
};

std::string render_rule(const AtomicRule& r);

// Finite set of atomic rules. Set semantics: rules are kept sorted and
// deduplicated, so multiplicity never matters.
class Base {
 public:
  Base() = default;
  explicit Base(std::vector<AtomicRule> rules, std::string name = "");

  bool contains(const AtomicRule& r) const;
  bool subset_of(const Base& other) const;
  Base extended_with(const AtomicRule& r) const;
  const std::vector<AtomicRule>& rules() const { return rules_; }
  std::size_t size() const { return rules_.size(); }
  bool empty() const { return rules_.empty(); }
  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }

  bool operator==(const Base& other) const { return rules_ == other.rules_; }

 private:
  std::vector<AtomicRule> rules_;
  std::string name_;
};

std::string render_base(const Base& b);

// Declared atom universe. Judgments and enumerations are always relative to
// one of these; it is what makes saturation a finite fixpoint.
class Universe {
 public:
  Universe() = default;
  explicit Universe(std::vector<Atom> atoms);

  int index_of(const Atom& a) const;  // -1 when absent
  bool contains(const Atom& a) const;
  int size() const { return static_cast<int>(atoms_.size()); }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const Atom& at(int i) const { return atoms_.at(static_cast<std::size_t>(i)); }

  bool operator==(const Universe&) const = default;

 private:
  std::vector<Atom> atoms_;
};

Universe universe_of(const Base& b);

// Bitmask encoding of an AtomSet relative to a universe. Throws
// UniverseError if the set is not contained in the universe.
std::uint32_t atomset_mask(const AtomSet& s, const Universe& u);
AtomSet mask_atomset(std::uint32_t mask, const Universe& u);

// All rule atoms must lie inside the universe.
void require_in_universe(const Base& b, const Universe& u);

}  // namespace ibes
