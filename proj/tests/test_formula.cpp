#include <doctest.h>

#include <random>

#include "ibes/formula.hpp"
#include "oracles.hpp"

using namespace ibes;

TEST_CASE("parsing basics") {
  CHECK(parse_formula("p") == Formula::atom("p"));
  CHECK(parse_formula("bot") == Formula::bot());
  // precedence: & over | over ->, with -> right-associative
  Formula expected = Formula::impl(Formula::conj(Formula::atom("p"), Formula::atom("q")),
                                   Formula::disj(Formula::atom("r"), Formula::bot()));
  CHECK(parse_formula("p & q -> r | bot") == expected);
  CHECK(parse_formula("p -> q -> r") ==
        Formula::impl(Formula::atom("p"),
                      Formula::impl(Formula::atom("q"), Formula::atom("r"))));
  CHECK(parse_formula("( p )") == Formula::atom("p"));
  CHECK(parse_formula("botanic") == Formula::atom("botanic"));
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse_formula("p &"), ParseError);
  CHECK_THROWS_AS(parse_formula("(p"), ParseError);
  CHECK_THROWS_AS(parse_formula("p q"), ParseError);
  CHECK_THROWS_AS(parse_formula(""), ParseError);
  CHECK_THROWS_AS(parse_formula("P"), ParseError);
  try {
    parse_formula("p & & q");
  } catch (const ParseError& e) {
    CHECK(e.position == 4);
  }
}

TEST_CASE("negation sugar only when enabled") {
  CHECK_THROWS_AS(parse_formula("~p"), ParseError);
  ParseOptions opts;
  opts.allow_negation = true;
  CHECK(parse_formula("~p", opts) == Formula::impl(Formula::atom("p"), Formula::bot()));
  CHECK(parse_formula("~(p | q)", opts) ==
        Formula::impl(Formula::disj(Formula::atom("p"), Formula::atom("q")),
                      Formula::bot()));
}

TEST_CASE("rendering with minimal parentheses") {
  CHECK(render_formula(Formula::atom("p")) == "p");
  CHECK(render_formula(Formula::impl(Formula::conj(Formula::atom("p"), Formula::atom("q")),
                                     Formula::atom("r"))) == "p & q -> r");
  CHECK(render_formula(Formula::conj(Formula::atom("p"),
                                     Formula::disj(Formula::atom("q"), Formula::atom("r")))) ==
        "p & (q | r)");
  // left-nested implication needs parentheses, right-nested does not
  CHECK(render_formula(Formula::impl(Formula::impl(Formula::atom("p"), Formula::atom("q")),
                                     Formula::atom("r"))) == "(p -> q) -> r");
}

TEST_CASE("round-trip on random formulas") {
  std::mt19937_64 rng(20240811);
  testing::FormulaGen gen(rng, {Atom("p"), Atom("q"), Atom("r")});
  for (int i = 0; i < 500; i++) {
    Formula f = gen.gen(1 + static_cast<int>(rng() % 9));
    CHECK(parse_formula(render_formula(f)) == f);
  }
}

TEST_CASE("subformulas") {
  Formula p = Formula::atom("p"), q = Formula::atom("q");
  CHECK(subformulas(FormulaSet({p})) == FormulaSet({p}));
  CHECK(subformulas(FormulaSet({Formula::conj(p, q)})) ==
        FormulaSet({Formula::conj(p, q), p, q}));
  // hand enumeration of the closure of {(p & q) | p}
  Formula f = Formula::disj(Formula::conj(p, q), p);
  CHECK(subformulas(FormulaSet({f})) == FormulaSet({f, Formula::conj(p, q), p, q}));
}

TEST_CASE("subformulas is idempotent and monotone") {
  std::mt19937_64 rng(7);
  testing::FormulaGen gen(rng, {Atom("p"), Atom("q")});
  for (int i = 0; i < 100; i++) {
    FormulaSet fs({gen.gen(4), gen.gen(3)});
    FormulaSet once = subformulas(fs);
    CHECK(subformulas(once) == once);
    FormulaSet bigger = fs;
    bigger.insert(gen.gen(2));
    for (const auto& f : once) CHECK(subformulas(bigger).contains(f));
  }
}

TEST_CASE("atoms_of") {
  CHECK(atoms_of(FormulaSet({Formula::bot()})).empty());
  CHECK(atoms_of(FormulaSet({parse_formula("p -> q")})) ==
        std::vector<Atom>{Atom("p"), Atom("q")});
  CHECK(atoms_of(FormulaSet({parse_formula("p & p")})) == std::vector<Atom>{Atom("p")});
}

TEST_CASE("formula sets are canonically ordered and duplicate-free") {
  FormulaSet fs;
  fs.insert(parse_formula("q"));
  fs.insert(parse_formula("p & q"));
  fs.insert(parse_formula("p"));
  fs.insert(parse_formula("p"));
  CHECK(fs.size() == 3);
  CHECK(render_formula(fs.items()[0]) == "p");
  CHECK(render_formula(fs.items()[1]) == "p & q");
  CHECK(render_formula(fs.items()[2]) == "q");
}

TEST_CASE("sequent parsing") {
  Sequent s = parse_sequent("p & q, r |- q");
  CHECK(s.antecedent.size() == 2);
  CHECK(s.consequent == Formula::atom("q"));
  Sequent bare = parse_sequent("p -> p");
  CHECK(bare.antecedent.empty());
  CHECK(render_sequent(bare) == "|- p -> p");
}
