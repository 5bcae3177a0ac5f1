#include <doctest.h>

#include <random>

#include "ibes/decide.hpp"
#include "ibes/kripke.hpp"
#include "ibes/nj.hpp"
#include "corpus.hpp"
#include "oracles.hpp"

using namespace ibes;

namespace {

const Formula P = Formula::atom("p");
const Formula Q = Formula::atom("q");
const Formula R = Formula::atom("r");

// random well-typed terms; redexes included so normalization has work to do
class TermGen {
 public:
  TermGen(std::mt19937_64& rng) : rng_(rng) {}

  NJTermPtr gen(const NJContext& ctx, const Formula& goal, int depth) {
    if (depth > 0) {
      switch (rng_() % 6) {
        case 0: {  // beta redex
          Formula arg_ty = random_small();
          std::string v = fresh();
          NJContext ectx = ctx;
          ectx.emplace_back(v, arg_ty);
          return NJTerm::app(NJTerm::lam(v, arg_ty, gen(ectx, goal, depth - 1)),
                             gen(ctx, arg_ty, depth - 1));
        }
        case 1: {  // projection redex
          Formula other = random_small();
          bool fst = rng_() & 1;
          NJTermPtr pair =
              fst ? NJTerm::pair(gen(ctx, goal, depth - 1), gen(ctx, other, depth - 1))
                  : NJTerm::pair(gen(ctx, other, depth - 1), gen(ctx, goal, depth - 1));
          return fst ? NJTerm::fst(pair) : NJTerm::snd(pair);
        }
        case 2: {  // case redex
          Formula a = random_small(), b = random_small();
          std::string x = fresh(), y = fresh();
          NJContext lctx = ctx, rctx = ctx;
          lctx.emplace_back(x, a);
          rctx.emplace_back(y, b);
          NJTermPtr scrut = (rng_() & 1)
                                ? NJTerm::inl(gen(ctx, a, depth - 1), b)
                                : NJTerm::inr(gen(ctx, b, depth - 1), a);
          return NJTerm::case_of(scrut, x, gen(lctx, goal, depth - 1), y,
                                 gen(rctx, goal, depth - 1));
        }
        default:
          break;
      }
    }
    // introduction forms down to a context variable
    switch (goal.kind()) {
      case Formula::Kind::Conj:
        return NJTerm::pair(gen(ctx, goal.left(), depth - 1),
                            gen(ctx, goal.right(), depth - 1));
      case Formula::Kind::Impl: {
        std::string v = fresh();
        NJContext ectx = ctx;
        ectx.emplace_back(v, goal.left());
        return NJTerm::lam(v, goal.left(), gen(ectx, goal.right(), depth - 1));
      }
      case Formula::Kind::Disj:
        if (rng_() & 1) return NJTerm::inl(gen(ctx, goal.left(), depth - 1), goal.right());
        return NJTerm::inr(gen(ctx, goal.right(), depth - 1), goal.left());
      default: {
        for (auto it = ctx.rbegin(); it != ctx.rend(); ++it) {
          if (it->second == goal) return NJTerm::var(it->first);
        }
        throw std::logic_error("generator context misses a goal witness");
      }
    }
  }

  Formula random_small() {
    switch (rng_() % 5) {
      case 0:
        return P;
      case 1:
        return Q;
      case 2:
        return Formula::conj(P, Q);
      case 3:
        return Formula::impl(P, Q);
      default:
        return Formula::disj(P, Q);
    }
  }

 private:
  std::string fresh() { return "t" + std::to_string(++counter_); }
  std::mt19937_64& rng_;
  int counter_ = 0;
};

NJContext seeded_ctx() { return {{"vp", P}, {"vq", Q}, {"vr", R}}; }

}  // namespace

TEST_CASE("check_nj basics") {
  CHECK(check_nj({}, NJTerm::lam("x", P, NJTerm::var("x")), Formula::impl(P, P)));
  NJContext ctx = {{"x", Formula::conj(P, Q)}};
  NJTermPtr swap = NJTerm::pair(NJTerm::snd(NJTerm::var("x")), NJTerm::fst(NJTerm::var("x")));
  CHECK(check_nj(ctx, swap, Formula::conj(Q, P)));
  NJContext dctx = {{"x", Formula::disj(P, Q)}};
  NJTermPtr dswap = NJTerm::case_of(NJTerm::var("x"), "y", NJTerm::inr(NJTerm::var("y"), Q),
                                    "z", NJTerm::inl(NJTerm::var("z"), P));
  CHECK(check_nj(dctx, dswap, Formula::disj(Q, P)));
  // ill-typed terms are rejected, not thrown
  CHECK_FALSE(check_nj({}, NJTerm::var("nope"), P));
  CHECK_FALSE(check_nj(ctx, NJTerm::fst(NJTerm::fst(NJTerm::var("x"))), P));
}

TEST_CASE("normalize contracts the three detours") {
  NJTermPtr u = NJTerm::var("u");
  NJTermPtr beta = NJTerm::app(NJTerm::lam("x", P, NJTerm::var("x")), u);
  CHECK(render_nj(normalize(beta)) == "u");
  NJTermPtr proj = NJTerm::fst(NJTerm::pair(NJTerm::var("a"), NJTerm::var("b")));
  CHECK(render_nj(normalize(proj)) == "a");
  NJTermPtr kase = NJTerm::case_of(NJTerm::inl(NJTerm::var("a"), Q), "y", NJTerm::var("y"),
                                   "z", NJTerm::var("z"));
  CHECK(render_nj(normalize(kase)) == "a");
}

TEST_CASE("normalization: subject reduction and no residual detours") {
  std::mt19937_64 rng(20240812);
  TermGen gen(rng);
  for (int generated = 0; generated < 300; generated++) {
    NJContext ctx = seeded_ctx();
    Formula goal = gen.random_small();
    NJTermPtr t = gen.gen(ctx, goal, 3);
    REQUIRE(check_nj(ctx, t, goal));
    NJTermPtr n = normalize(t);
    CHECK(check_nj(ctx, n, goal));
    CHECK_FALSE(has_detour(*n));
  }
}

TEST_CASE("kripke_eval basics") {
  Poset one = chain_poset(1);
  KripkeModel m1(one, {{Atom("p"), {true}}, {Atom("q"), {false}}});
  CHECK_FALSE(kripke_eval(m1, 0, Formula::bot()));
  CHECK(kripke_eval(m1, 0, Formula::disj(P, Q)));
  // two-chain with p only above: not-not-p holds at the root, p does not
  Poset two = chain_poset(2);
  KripkeModel m2(two, {{Atom("p"), {false, true}}});
  Formula nnp = Formula::neg(Formula::neg(P));
  CHECK(kripke_eval(m2, 0, nnp));
  CHECK_FALSE(kripke_eval(m2, 0, P));
}

TEST_CASE("kripke models reject non-monotone valuations") {
  Poset two = chain_poset(2);
  CHECK_THROWS(KripkeModel(two, {{Atom("p"), {true, false}}}));
}

TEST_CASE("kripke_eval is monotone in the world order") {
  std::mt19937_64 rng(5150);
  testing::FormulaGen fgen(rng, {Atom("p"), Atom("q")});
  for (int trial = 0; trial < 60; trial++) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < 4; i++) {
      for (int j = i + 1; j < 4; j++) {
        if (rng() & 1) pairs.emplace_back(i, j);
      }
    }
    Poset poset({"w0", "w1", "w2", "w3"}, pairs, /*apply_closure=*/true);
    std::map<Atom, std::vector<bool>> val;
    for (const auto* name : {"p", "q"}) {
      std::vector<bool> col(4, false);
      for (int w = 0; w < 4; w++) {
        if (rng() % 3 == 0) {
          for (int v : poset.ups(w)) col[static_cast<std::size_t>(v)] = true;
        }
      }
      val[Atom(name)] = col;
    }
    KripkeModel m(poset, val);
    Formula f = fgen.gen(5);
    for (int w = 0; w < 4; w++) {
      if (!kripke_eval(m, w, f)) continue;
      for (int v : poset.ups(w)) CHECK(kripke_eval(m, v, f));
    }
  }
}

TEST_CASE("decide: identity is derivable") {
  Decision d = decide(FormulaSet{}, Formula::impl(P, P));
  REQUIRE(d.derivable);
  CHECK(check_nj(d.term_context, d.term, Formula::impl(P, P)));
}

TEST_CASE("decide: Peirce gets a two-world countermodel") {
  Formula peirce = parse_formula("((p -> q) -> p) -> p");
  Decision d = decide(FormulaSet{}, peirce);
  REQUIRE_FALSE(d.derivable);
  CHECK(d.countermodel.worlds().size() == 2);
  CHECK_FALSE(kripke_eval(d.countermodel, d.refuting_world, peirce));
}

TEST_CASE("decide: the strong disjunction rule is refuted") {
  Sequent s = parse_sequent("p -> q | r |- (p -> q) | (p -> r)");
  Decision d = decide(s.antecedent, s.consequent);
  REQUIRE_FALSE(d.derivable);
  for (const auto& g : s.antecedent) {
    CHECK(kripke_eval(d.countermodel, d.refuting_world, g));
  }
  CHECK_FALSE(kripke_eval(d.countermodel, d.refuting_world, s.consequent));
}

TEST_CASE("decide classifies the corpus as expected") {
  for (auto text : testing::kDerivableCorpus) {
    Sequent s = parse_sequent(text);
    Decision d = decide(s.antecedent, s.consequent);
    CHECK_MESSAGE(d.derivable, "expected derivable: ", text);
    if (d.derivable) {
      CHECK(check_nj(d.term_context, d.term, s.consequent));
    }
  }
  for (auto text : testing::kUnderivableCorpus) {
    Sequent s = parse_sequent(text);
    Decision d = decide(s.antecedent, s.consequent);
    CHECK_MESSAGE(!d.derivable, "expected underivable: ", text);
    if (!d.derivable) {
      bool all = true;
      for (const auto& g : s.antecedent) {
        all = all && kripke_eval(d.countermodel, d.refuting_world, g);
      }
      CHECK(all);
      CHECK_FALSE(kripke_eval(d.countermodel, d.refuting_world, s.consequent));
    }
  }
}

TEST_CASE("decide: derivable sequents hold in random Kripke models") {
  std::mt19937_64 rng(31337);
  testing::FormulaGen fgen(rng, {Atom("p"), Atom("q")});
  int sampled = 0;
  while (sampled < 1000) {
    Formula f = fgen.gen(4);
    FormulaSet gamma;
    if (rng() & 1) gamma.insert(fgen.gen(3));
    Decision d = decide(gamma, f);
    if (!d.derivable) continue;
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < 3; i++) {
      for (int j = i + 1; j < 3; j++) {
        if (rng() & 1) pairs.emplace_back(i, j);
      }
    }
    Poset poset({"w0", "w1", "w2"}, pairs, true);
    std::map<Atom, std::vector<bool>> val;
    for (const auto* name : {"p", "q"}) {
      std::vector<bool> col(3, false);
      for (int w = 0; w < 3; w++) {
        if (rng() & 1) {
          for (int v : poset.ups(w)) col[static_cast<std::size_t>(v)] = true;
        }
      }
      val[Atom(name)] = col;
    }
    KripkeModel m(poset, val);
    CHECK(kripke_sequent_holds(m, gamma, f));
    sampled++;
  }
}
