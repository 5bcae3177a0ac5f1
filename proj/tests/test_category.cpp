#include <doctest.h>

#include <random>

#include "ibes/category.hpp"
#include "ibes/decide.hpp"
#include "ibes/errors.hpp"
#include "corpus.hpp"
#include "oracles.hpp"

using namespace ibes;

namespace {

const Atom p("p"), q("q"), r("r");

// base {} and {=> p} over {p}, contexts up to one atom
Fragment one_atom_fragment() {
  FragmentConfig cfg;
  cfg.universe = Universe({p});
  cfg.bounds = EnumerationBounds{0, 0, 1};
  cfg.depth = 1;
  cfg.ctx_cap = 1;
  return build_fragment(Base{}, cfg);
}

// bases {} and {=> p} over {p,q,r}, hand-picked contexts
Fragment small_pqr_fragment() {
  FragmentConfig cfg;
  cfg.universe = Universe({p, q, r});
  cfg.bounds = EnumerationBounds{1, 1, 1};
  cfg.depth = 1;
  cfg.ctx_cap = 1;
  Base axp({AtomicRule::axiom(p)});
  std::vector<World> worlds = {
      World{Base{}, {}},         World{Base{}, {{"x1", p}}},
      World{Base{}, {{"x1", q}}}, World{axp, {}},
      World{axp, {{"x1", p}}},   World{axp, {{"x1", q}}},
  };
  return fragment_from_worlds(std::move(worlds), cfg);
}

int world_index(const Fragment& f, const Base& b, const VarContext& ctx) {
  int w = f.find_world(World{b, ctx});
  REQUIRE(w >= 0);
  return w;
}

}  // namespace

TEST_CASE("fragment building: identities everywhere, example morphisms") {
  Fragment frag = one_atom_fragment();
  CHECK(frag.worlds().size() == 4);
  for (int w = 0; w < static_cast<int>(frag.worlds().size()); w++) {
    int id = frag.identity(w);
    CHECK(frag.morphisms()[static_cast<std::size_t>(id)].source == w);
    CHECK(frag.morphisms()[static_cast<std::size_t>(id)].target == w);
  }
  // ((empty),(x:p)) has the identity as its only endomorphism
  int wp = world_index(frag, Base{}, {{"x1", p}});
  CHECK(frag.hom(wp, wp).size() == 1);
  // the axiom term gives ({=> p}, {}) -> ((empty), (x:p))
  Base axp({AtomicRule::axiom(p)});
  int wa = world_index(frag, axp, {});
  REQUIRE(frag.hom(wa, wp).size() == 1);
  const WMorphism& m = frag.morphisms()[static_cast<std::size_t>(frag.hom(wa, wp)[0])];
  CHECK(term_eq(m.terms[0], DerivTerm::app(AtomicRule::axiom(p), {})));
  // no morphism the other way: the base inclusion fails
  int we = world_index(frag, Base{}, {});
  CHECK(frag.hom(we, wa).empty());
}

TEST_CASE("compose: unit laws and endpoint mismatch") {
  Fragment frag = one_atom_fragment();
  for (int mi = 0; mi < static_cast<int>(frag.morphisms().size()); mi++) {
    const auto& m = frag.morphisms()[static_cast<std::size_t>(mi)];
    CHECK(frag.compose(frag.identity(m.source), mi) == mi);
    CHECK(frag.compose(mi, frag.identity(m.target)) == mi);
  }
  // mismatched endpoints
  const auto& ms = frag.morphisms();
  for (std::size_t f = 0; f < ms.size(); f++) {
    for (std::size_t g = 0; g < ms.size(); g++) {
      if (ms[f].target == ms[g].source) continue;
      CHECK_THROWS_AS(compose_morphisms(frag, ms[f], ms[g]), ConfigError);
      goto done;
    }
  }
done:;
}

TEST_CASE("category laws hold exhaustively on small fragments") {
  for (Fragment frag : {one_atom_fragment(), small_pqr_fragment()}) {
    CHECK(frag.morphisms().size() <= 50);
    const auto& ms = frag.morphisms();
    for (std::size_t f = 0; f < ms.size(); f++) {
      for (std::size_t g = 0; g < ms.size(); g++) {
        if (ms[f].target != ms[g].source) continue;
        int fg = frag.compose(static_cast<int>(f), static_cast<int>(g));
        // associativity against every extender
        for (std::size_t h = 0; h < ms.size(); h++) {
          if (ms[g].target != ms[h].source) continue;
          int gh = frag.compose(static_cast<int>(g), static_cast<int>(h));
          CHECK(frag.compose(fg, static_cast<int>(h)) ==
                frag.compose(static_cast<int>(f), gh));
        }
      }
    }
  }
}

TEST_CASE("composition on a three-world chain matches direct substitution") {
  Fragment frag = small_pqr_fragment();
  Base axp({AtomicRule::axiom(p)});
  int w_src = world_index(frag, axp, {{"x1", q}});
  int w_mid = world_index(frag, axp, {{"x1", p}});
  int w_tgt = world_index(frag, Base{}, {{"x1", p}});
  // src -> mid via the axiom, mid -> tgt via the variable
  int f = -1, g = -1;
  for (int id : frag.hom(w_src, w_mid)) {
    if (!frag.morphisms()[static_cast<std::size_t>(id)].terms[0]->is_var()) f = id;
  }
  for (int id : frag.hom(w_mid, w_tgt)) {
    if (frag.morphisms()[static_cast<std::size_t>(id)].terms[0]->is_var()) g = id;
  }
  REQUIRE(f >= 0);
  REQUIRE(g >= 0);
  WMorphism direct = compose_morphisms(frag, frag.morphisms()[static_cast<std::size_t>(f)],
                                       frag.morphisms()[static_cast<std::size_t>(g)]);
  int composed = frag.compose(f, g);
  CHECK(frag.find_morphism(w_src, w_tgt, direct.terms) == composed);
  CHECK(term_eq(direct.terms[0], DerivTerm::app(AtomicRule::axiom(p), {})));
}

TEST_CASE("interp atom tables match the derivation sets") {
  Fragment frag = one_atom_fragment();
  Interpreter in(frag, DisjStyle::Forall);
  DenotPtr dp = in.interp(Formula::atom(p));
  Base axp({AtomicRule::axiom(p)});
  CHECK(dp->table(world_index(frag, Base{}, {})).empty());
  CHECK(dp->table(world_index(frag, axp, {})).size() == 1);
  CHECK(dp->table(world_index(frag, Base{}, {{"x1", p}})).size() == 1);
  CHECK(dp->table(world_index(frag, axp, {{"x1", p}})).size() == 2);
}

TEST_CASE("interp products are pointwise") {
  Fragment frag = small_pqr_fragment();
  Interpreter in(frag, DisjStyle::Forall);
  DenotPtr dpq = in.interp(Formula::conj(Formula::atom(p), Formula::atom(q)));
  DenotPtr dp = in.interp(Formula::atom(p));
  DenotPtr dq = in.interp(Formula::atom(q));
  for (int w = 0; w < static_cast<int>(frag.worlds().size()); w++) {
    CHECK(dpq->table(w).size() == dp->table(w).size() * dq->table(w).size());
  }
}

TEST_CASE("interp bot is empty where some atom table is empty") {
  Fragment frag = one_atom_fragment();
  Interpreter in(frag, DisjStyle::Forall);
  DenotPtr bot = in.interp(Formula::bot());
  int we = world_index(frag, Base{}, {});
  CHECK(bot->table(we).empty());
  Base axp({AtomicRule::axiom(p)});
  int wa = world_index(frag, axp, {});
  CHECK(bot->table(wa).size() == 1);
}

TEST_CASE("functoriality of interpreted denotations") {
  for (auto style : {DisjStyle::Forall, DisjStyle::Coproduct}) {
    Fragment frag = small_pqr_fragment();
    Interpreter in(frag, style);
    for (const char* text :
         {"p", "p & q", "p -> q", "p | q", "bot", "p -> p", "(p -> q) -> q"}) {
      DenotPtr d = in.interp(parse_formula(text));
      CHECK_MESSAGE(check_functoriality_deep(*d, frag), "formula: ", text);
    }
  }
}

TEST_CASE("naturality: identity, composition, and a broken mutation") {
  Fragment frag = small_pqr_fragment();
  Interpreter in(frag, DisjStyle::Forall);
  DenotPtr dp = in.interp(Formula::atom(p));
  // identity transformation
  NatTrans idnt;
  idnt.source = dp;
  idnt.target = dp;
  for (int w = 0; w < static_cast<int>(frag.worlds().size()); w++) {
    std::vector<int> comp(dp->table(w).size());
    for (std::size_t i = 0; i < comp.size(); i++) comp[i] = static_cast<int>(i);
    idnt.components.push_back(std::move(comp));
  }
  CHECK(check_naturality(idnt, frag));
  // composition of found naturals stays natural
  DenotPtr dpp = in.interp(parse_formula("p & p"));
  auto nt1 = find_nat_trans(dpp, dp, frag);
  REQUIRE(nt1.has_value());
  CHECK(check_naturality(*nt1, frag));
  auto nt2 = find_nat_trans(dp, dpp, frag);
  REQUIRE(nt2.has_value());
  NatTrans composed;
  composed.source = dp;
  composed.target = dp;
  for (int w = 0; w < static_cast<int>(frag.worlds().size()); w++) {
    std::vector<int> comp;
    for (std::size_t i = 0; i < dp->table(w).size(); i++) {
      comp.push_back(
          nt1->components[static_cast<std::size_t>(w)][static_cast<std::size_t>(
              nt2->components[static_cast<std::size_t>(w)][i])]);
    }
    composed.components.push_back(std::move(comp));
  }
  CHECK(check_naturality(composed, frag));
  // an inconsistent permutation across a nonidentity morphism breaks it
  Base axp({AtomicRule::axiom(p)});
  int wa = world_index(frag, axp, {{"x1", p}});
  NatTrans broken = idnt;
  REQUIRE(dp->table(wa).size() == 2);
  std::swap(broken.components[static_cast<std::size_t>(wa)][0],
            broken.components[static_cast<std::size_t>(wa)][1]);
  CHECK_FALSE(check_naturality(broken, frag));
}

TEST_CASE("algebraic completeness base case: applying a transformation to the identity") {
  Fragment frag = one_atom_fragment();
  Interpreter in(frag, DisjStyle::Forall);
  DenotPtr dp = in.interp(Formula::atom(p));
  DenotPtr ctx_denot = in.product({dp});
  auto nt = find_nat_trans(ctx_denot, dp, frag);
  REQUIRE(nt.has_value());
  int w = world_index(frag, Base{}, {{"x1", p}});
  int id_elem = ctx_denot->index_of(
      w, Element{TupleElem{{dp->index_of(w, Element{DerivTerm::var("x1")})}}});
  REQUIRE(id_elem >= 0);
  int out = nt->components[static_cast<std::size_t>(w)][static_cast<std::size_t>(id_elem)];
  DerivTermPtr term = std::get<DerivTermPtr>(dp->table(w)[static_cast<std::size_t>(out)]);
  CHECK(check_derivation(Base{}, {{"x1", p}}, term, p));
}

TEST_CASE("transcription of corpus proofs yields natural transformations") {
  Fragment frag = small_pqr_fragment();
  InterpCaps caps;
  caps.max_table = 4096;
  Interpreter in(frag, DisjStyle::Forall, caps);
  for (auto text : testing::kDerivableCorpus) {
    Sequent s = parse_sequent(text);
    Decision d = decide(s.antecedent, s.consequent);
    REQUIRE(d.derivable);
    NatTrans nt = transcribe_nj(in, d.term_context, d.term, s.consequent);
    CHECK_MESSAGE(check_naturality(nt, frag), "not natural on: ", text);
  }
}

TEST_CASE("sigma supports disjunction elimination per the closure laws") {
  Fragment frag = one_atom_fragment();
  Interpreter in(frag, DisjStyle::Forall);
  DenotPtr a = in.interp(Formula::atom(p));
  DenotPtr b = in.unit();
  // terminal object
  CHECK(supports_disjunction_check(in, a, b, in.unit()));
  // products of supported objects
  DenotPtr c0 = in.interp(Formula::atom(p));
  CHECK(supports_disjunction_check(in, a, b, c0));
  CHECK(supports_disjunction_check(in, a, b, in.product({c0, in.unit()})));
  // exponentials into supported objects
  CHECK(supports_disjunction_check(in, a, b, in.exponential(b, c0)));
  // denotations of formulas
  for (const char* text : {"p", "p & p", "p -> p", "p | p", "bot"}) {
    CHECK_MESSAGE(supports_disjunction_check(in, a, b, in.interp(parse_formula(text))),
                  "formula: ", text);
  }
}

TEST_CASE("the strong disjunction experiment") {
  DisjunctionExperimentReport rep =
      strong_disjunction_experiment(Universe({p, q, r}), EnumerationBounds{2, 1, 2});
  CHECK(rep.fragment_worlds >= 3);
  CHECK_FALSE(rep.degenerate);
  CHECK_MESSAGE(rep.coproduct_constructed, "note: ", rep.note);
  CHECK(rep.coproduct_natural);
  REQUIRE(rep.forall_nat_count.has_value());
  MESSAGE("forall-style natural transformation count: ", *rep.forall_nat_count);
}

TEST_CASE("the experiment flags degenerate universes") {
  DisjunctionExperimentReport rep =
      strong_disjunction_experiment(Universe({p}), EnumerationBounds{2, 1, 2});
  CHECK(rep.degenerate);
}
