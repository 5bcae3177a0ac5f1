#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ibes {

// Propositional atom. Identity is the name; names match [a-z][a-zA-Z0-9_]*.
struct Atom {
  std::string name;

  Atom() = default;
  explicit Atom(std::string n);

  auto operator<=>(const Atom&) const = default;
};

bool is_valid_atom_name(std::string_view name);

// Immutable formula tree over atoms, &, |, ->, bot. Value type backed by a
// shared node; copies are cheap and all values are safe to share across
// threads once built.
class Formula {
 public:
  enum class Kind { Atom, Conj, Impl, Disj, Bot };

  Formula();  // bot

  static Formula atom(Atom a);
  static Formula atom(std::string name);
  static Formula conj(Formula l, Formula r);
  static Formula impl(Formula l, Formula r);
  static Formula disj(Formula l, Formula r);
  static Formula bot();
  static Formula neg(Formula f);  // shorthand for f -> bot

  Kind kind() const;
  bool is_atom() const { return kind() == Kind::Atom; }
  bool is_bot() const { return kind() == Kind::Bot; }
  const Atom& atom_ref() const;
  Formula left() const;
  Formula right() const;

  std::size_t hash() const;
  bool operator==(const Formula& o) const;  // structural

  struct Node;  // implementation detail, only formula.cpp touches it

 private:
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Minimal-parentheses text; parse_formula(render_formula(f)) == f.
std::string render_formula(const Formula& f);

// Canonical formula order: by rendered text. Used everywhere a reproducible
// order over formulas is needed.
bool formula_lt(const Formula& a, const Formula& b);

struct ParseError : std::runtime_error {
  std::size_t position;
  ParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what), position(pos) {}
};

struct ParseOptions {
  // Accepts '~f' as sugar for 'f -> bot'. Off in the core grammar; the CLI
  // turns it on.
  bool allow_negation = false;
};

Formula parse_formula(std::string_view text, const ParseOptions& opts = {});

// Ordered, duplicate-free set of formulas in canonical (rendered-text) order.
class FormulaSet {
 public:
  FormulaSet() = default;
  explicit FormulaSet(std::vector<Formula> fs);

  void insert(const Formula& f);
  bool contains(const Formula& f) const;
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const std::vector<Formula>& items() const { return items_; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  FormulaSet unioned(const FormulaSet& other) const;
  bool subset_of(const FormulaSet& other) const;
  bool operator==(const FormulaSet& other) const;

 private:
  std::vector<Formula> items_;
};

// Closure of fs under immediate subformulas (includes fs itself).
FormulaSet subformulas(const FormulaSet& fs);
FormulaSet subformulas(const Formula& f);
bool is_subformula_closed(const FormulaSet& fs);

// Atoms occurring in the formulas, sorted and unique. Bot contributes none.
std::vector<Atom> atoms_of(const Formula& f);
std::vector<Atom> atoms_of(const FormulaSet& fs);

// "gamma1, gamma2 |- phi" or a bare "phi" (empty antecedent).
struct Sequent {
  FormulaSet antecedent;
  Formula consequent;
};
Sequent parse_sequent(std::string_view text, const ParseOptions& opts = {});
std::string render_sequent(const Sequent& s);

}  // namespace ibes

template <>
struct std::hash<ibes::Formula> {
  std::size_t operator()(const ibes::Formula& f) const noexcept { return f.hash(); }
};
