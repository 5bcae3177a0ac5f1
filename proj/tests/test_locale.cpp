#include <doctest.h>

#include <memory>
#include <random>

#include "ibes/bes.hpp"
#include "ibes/errors.hpp"
#include "ibes/kripke.hpp"
#include "ibes/locale.hpp"
#include "oracles.hpp"

using namespace ibes;

namespace {

const Atom p("p"), q("q");

std::shared_ptr<const Poset> chain2() {
  return std::make_shared<const Poset>(chain_poset(2));
}

// random poset + interpretation over it, for the law sweeps
struct RandomInstance {
  std::shared_ptr<const Poset> poset;
  AtomInterp interp;
};

RandomInstance random_instance(std::mt19937_64& rng, int max_elems, int max_atoms) {
  int n = 1 + static_cast<int>(rng() % max_elems);
  std::vector<std::string> labels;
  for (int i = 0; i < n; i++) labels.push_back("w" + std::to_string(i));
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; i++) {
    for (int j = i + 1; j < n; j++) {
      if (rng() % 3 == 0) pairs.emplace_back(i, j);
    }
  }
  auto poset = std::make_shared<const Poset>(labels, pairs, /*apply_closure=*/true);
  int atom_count = 1 + static_cast<int>(rng() % max_atoms);
  std::map<Atom, Upset> val;
  const char* names[] = {"p", "q", "r"};
  for (int a = 0; a < atom_count; a++) {
    std::uint64_t mask = 0;
    for (int w = 0; w < n; w++) {
      if (rng() & 1) {
        for (int v : poset->ups(w)) mask |= (1ULL << v);
      }
    }
    val.emplace(Atom(names[a]), Upset(poset, mask));
  }
  return {poset, AtomInterp(poset, std::move(val))};
}

}  // namespace

TEST_CASE("upsets validate upward closure") {
  auto poset = chain2();
  CHECK_THROWS_AS(Upset(poset, 0b01), ConfigError);  // w0 without w1
  CHECK_NOTHROW(Upset(poset, 0b10));
  CHECK_NOTHROW(Upset(poset, 0b11));
}

TEST_CASE("heyting operations on the two-chain") {
  auto poset = chain2();
  HeytingOps ops = heyting_ops(poset);
  Upset w1 = Upset(poset, 0b10);
  CHECK(ops.implies(w1, ops.bottom()) == ops.bottom());
  CHECK(ops.meet(w1, ops.top()) == w1);
  for (const auto& u : all_upsets(poset)) {
    CHECK(ops.implies(u, u) == ops.top());
  }
}

TEST_CASE("heyting adjunction on random posets") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20; trial++) {
    auto inst = random_instance(rng, 5, 1);
    auto ups = all_upsets(inst.poset);
    for (const auto& wset : ups) {
      for (const auto& u : ups) {
        for (const auto& v : ups) {
          CHECK(up_meet(wset, u).subset_of(v) == wset.subset_of(up_implies(u, v)));
        }
      }
    }
  }
}

TEST_CASE("vsem basics") {
  auto poset = chain2();
  AtomInterp interp(poset, {{p, Upset(poset, 0b10)}});
  CHECK(vsem(Formula::atom(p), interp) == interp.at(p));
  CHECK(vsem(Formula::impl(Formula::atom(p), Formula::atom(p)), interp) ==
        Upset::full(poset));
  // with only p:{w1}, bot-as-K(empty) collapses to {w1} and not-not-p with it
  CHECK(vsem(Formula::bot(), interp) == interp.at(p));
  // an auxiliary never-derivable atom restores the Kripke double-negation
  // behaviour: K(empty) is then truly empty
  AtomInterp interp2(poset, {{p, Upset(poset, 0b10)}, {q, Upset::empty(poset)}});
  Formula nnp = Formula::neg(Formula::neg(Formula::atom(p)));
  CHECK(vsem(Formula::bot(), interp2) == Upset::empty(poset));
  CHECK(vsem(nnp, interp2) == Upset::full(poset));
  CHECK_FALSE(vsem(Formula::atom(p), interp2) == Upset::full(poset));
}

TEST_CASE("vsem rejects missing atoms and empty interpretations") {
  auto poset = chain2();
  AtomInterp interp(poset, {{p, Upset(poset, 0b10)}});
  CHECK_THROWS_AS(vsem(Formula::atom(q), interp), ConfigError);
  AtomInterp empty(poset, {});
  CHECK_THROWS_AS(vsem(Formula::bot(), empty), ConfigError);
  CHECK_THROWS_AS(nucleus_K(Upset::empty(poset), empty), ConfigError);
}

TEST_CASE("nucleus on a one-atom empty interpretation") {
  auto poset = chain2();
  AtomInterp interp(poset, {{p, Upset::empty(poset)}});
  CHECK(nucleus_K(Upset::empty(poset), interp) == Upset::empty(poset));
}

TEST_CASE("nucleus laws and sublocale items, exhaustively on random posets") {
  std::mt19937_64 rng(909);
  for (int trial = 0; trial < 25; trial++) {
    auto inst = random_instance(rng, 5, 3);
    const auto& interp = inst.interp;
    auto ups = all_upsets(inst.poset);
    auto K = [&](const Upset& u) { return nucleus_K(u, interp); };
    // nucleus laws
    for (const auto& u : ups) {
      CHECK(u.subset_of(K(u)));
      CHECK(K(K(u)) == K(u));
      for (const auto& v : ups) {
        CHECK(K(up_meet(u, v)) == up_meet(K(u), K(v)));
      }
    }
    OmegaK omega(interp);
    // 1. atoms closed
    for (const auto& [a, vp] : interp.values()) CHECK(omega.is_closed(vp));
    // 2. top closed
    CHECK(omega.is_closed(omega.top()));
    // 3/4/5: meets of closed, implications into closed, big meets
    for (const auto& u : omega.closed()) {
      for (const auto& v : omega.closed()) {
        CHECK(omega.is_closed(up_meet(u, v)));
      }
      for (const auto& w : ups) {
        CHECK(omega.is_closed(up_implies(w, u)));
      }
    }
    Upset big = omega.top();
    for (const auto& u : omega.closed()) big = up_meet(big, u);
    CHECK(omega.is_closed(big));
    // 6. join_K is the least closed upper bound, brute-forced
    for (const auto& u : omega.closed()) {
      for (const auto& v : omega.closed()) {
        Upset j = omega.join_K(u, v);
        CHECK(omega.is_closed(j));
        CHECK(u.subset_of(j));
        CHECK(v.subset_of(j));
        for (const auto& w : omega.closed()) {
          if (u.subset_of(w) && v.subset_of(w)) CHECK(j.subset_of(w));
        }
      }
    }
  }
}

TEST_CASE("bes_poset: single atom with only its axiom rule") {
  Universe u({p});
  EnumerationBounds bounds{0, 0, 1};
  BesPoset bp = bes_poset(u, bounds);
  REQUIRE(bp.poset->size() == 2);
  CHECK(bp.bases[0].empty());
  CHECK(bp.bases[1] == Base({AtomicRule::axiom(p)}));
  CHECK(bp.poset->leq(0, 1));
  CHECK_FALSE(bp.poset->leq(1, 0));
  CHECK(bp.interp.at(p) == Upset(bp.poset, 0b10));
}

TEST_CASE("bes_poset valuations are upsets") {
  Universe u({p, q});
  EnumerationBounds bounds{1, 1, 2};
  BesPoset bp = bes_poset(u, bounds);
  for (const auto& [a, up] : bp.interp.values()) {
    CHECK_NOTHROW(Upset(bp.poset, up.mask()));
  }
}

TEST_CASE("sandqvist disjunction equals the closed join on base posets") {
  // also cross-checks the bes clause engine against the locale computation
  for (auto universe : {Universe({p}), Universe({p, q})}) {
    EnumerationBounds bounds{1, 1, 2};
    BesPoset bp = bes_poset(universe, bounds);
    ValidityConfig cfg;
    cfg.universe = universe;
    cfg.bounds = bounds;
    BesEvaluator ev(Base{}, cfg);
    REQUIRE(ev.family().size() == bp.bases.size());
    for (const auto& a : universe.atoms()) {
      for (const auto& b : universe.atoms()) {
        Formula disj = Formula::disj(Formula::atom(a), Formula::atom(b));
        Upset via_vsem = vsem(disj, bp.interp);
        Upset via_join = closed_join(bp.interp.at(a), bp.interp.at(b), bp.interp);
        CHECK(via_vsem == via_join);
        const auto col = ev.column(disj);
        for (int i = 0; i < static_cast<int>(ev.family().size()); i++) {
          CHECK(static_cast<bool>(col[static_cast<std::size_t>(i)]) ==
                via_vsem.contains(i));
        }
      }
    }
  }
}

TEST_CASE("vsem matches kripke_eval on the disjunction-free fragment") {
  std::mt19937_64 rng(4445);
  for (int trial = 0; trial < 20; trial++) {
    auto inst = random_instance(rng, 5, 2);
    std::map<Atom, std::vector<bool>> val;
    for (const auto& [a, up] : inst.interp.values()) {
      std::vector<bool> col(static_cast<std::size_t>(inst.poset->size()));
      for (int w = 0; w < inst.poset->size(); w++) col[w] = up.contains(w);
      val[a] = col;
    }
    KripkeModel m(*inst.poset, val);
    std::vector<Atom> atoms;
    for (const auto& [a, up] : inst.interp.values()) atoms.push_back(a);
    std::mt19937_64 rng2(trial);
    testing::FormulaGen fgen(rng2, atoms);
    for (int i = 0; i < 10; i++) {
      Formula f = fgen.gen(4);
      bool uses_disj_or_bot = render_formula(f).find('|') != std::string::npos ||
                              render_formula(f).find("bot") != std::string::npos;
      if (uses_disj_or_bot) continue;
      Upset via_vsem = vsem(f, inst.interp);
      for (int w = 0; w < inst.poset->size(); w++) {
        CHECK(via_vsem.contains(w) == kripke_eval(m, w, f));
      }
    }
  }
}

TEST_CASE("vsem disjunction covers the union and may exceed it") {
  // join_K is at least the union; where they differ, kripke and vsem differ
  std::mt19937_64 rng(4446);
  for (int trial = 0; trial < 20; trial++) {
    auto inst = random_instance(rng, 4, 2);
    if (inst.interp.atom_count() < 2) continue;
    Formula disj = Formula::disj(Formula::atom(p), Formula::atom(q));
    Upset u = inst.interp.at(p);
    Upset v = inst.interp.at(q);
    Upset vd = vsem(disj, inst.interp);
    CHECK(up_join(u, v).subset_of(vd));
  }
}

TEST_CASE("omega_K caps oversized posets") {
  std::vector<std::string> labels;
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < 17; i++) labels.push_back("w" + std::to_string(i));
  auto poset = std::make_shared<const Poset>(labels, pairs, true);
  AtomInterp interp(poset, {{p, Upset::full(poset)}});
  CHECK_THROWS_AS(all_upsets(poset), CapError);
  CHECK_THROWS_AS((void)omega_K(interp), CapError);
}
