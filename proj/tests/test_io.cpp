#include <doctest.h>

#include "ibes/errors.hpp"
#include "ibes/json_io.hpp"

using namespace ibes;

TEST_CASE("base files round-trip with fixed field order") {
  auto parsed = base_from_json(Json::parse(
      R"({"universe":["p","q","r"],"rules":[{"premises":[{"hyps":["q"],"concl":"p"}],"concl":"r"}]})"));
  CHECK(parsed.second.size() == 3);
  CHECK(parsed.first.size() == 1);
  Json out = base_to_json(parsed.first, parsed.second);
  CHECK(out.dump() ==
        R"({"universe":["p","q","r"],"rules":[{"premises":[{"hyps":["q"],"concl":"p"}],"concl":"r"}]})");
}

TEST_CASE("base files reject atoms outside the universe") {
  try {
    base_from_json(Json::parse(
        R"({"universe":["p"],"rules":[{"premises":[],"concl":"z"}]})"));
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("z") != std::string::npos);
    CHECK(e.pointer == "/rules/0");
  }
}

TEST_CASE("poset files: closure applied, countermodels round-trip") {
  Json j = Json::parse(
      R"({"elements":["w0","w1","w2"],"leq":[["w0","w1"],["w1","w2"]],"atoms":{"p":["w1","w2"]}})");
  KripkeModel m = kripke_from_json(j);
  CHECK(m.worlds().leq(0, 2));  // transitive closure
  CHECK(m.forces_atom(1, Atom("p")));
  Json back = kripke_to_json(m);
  KripkeModel again = kripke_from_json(back);
  CHECK(again.worlds().size() == 3);
}

TEST_CASE("poset files name the offending pair on bad valuations") {
  Json j = Json::parse(
      R"({"elements":["w0","w1"],"leq":[["w0","w1"]],"atoms":{"p":["w0"]}})");
  try {
    kripke_from_json(j);
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    std::string msg = e.what();
    CHECK(msg.find("w0") != std::string::npos);
    CHECK(msg.find("w1") != std::string::npos);
  }
}

TEST_CASE("nj terms round-trip through json") {
  NJTermPtr t = NJTerm::case_of(
      NJTerm::var("x"), "y", NJTerm::inr(NJTerm::var("y"), Formula::atom("q")), "z",
      NJTerm::inl(NJTerm::var("z"), Formula::atom("p")));
  Json j = nj_term_to_json(t);
  NJTermPtr back = nj_term_from_json(j);
  CHECK(render_nj(back) == render_nj(t));
}

TEST_CASE("derivation terms round-trip through json") {
  AtomicRule rule({RulePremise{AtomSet({Atom("q")}), Atom("r")}}, Atom("s"));
  DerivTermPtr t = DerivTerm::app(rule, {{{"b1"}, DerivTerm::var("b1")}});
  Json j = deriv_term_to_json(t);
  DerivTermPtr back = deriv_term_from_json(j);
  CHECK(term_eq(t, back));
}

TEST_CASE("proof files parse both kinds") {
  Json nj = Json::parse(R"({
    "kind": "nj",
    "context": [{"var": "x", "formula": "p & q"}],
    "term": {"kind": "snd", "arg": {"kind": "var", "name": "x"}},
    "formula": "q"
  })");
  ProofFile pf = proof_from_json(nj);
  CHECK(pf.is_nj);
  CHECK(check_nj(pf.nj_context, pf.nj_term, pf.nj_formula));

  Json base = Json::parse(R"({
    "kind": "base",
    "universe": ["p"],
    "rules": [{"premises": [], "concl": "p"}],
    "context": [],
    "term": {"kind": "app", "rule": {"premises": [], "concl": "p"}, "args": []},
    "concl": "p"
  })");
  ProofFile pb = proof_from_json(base);
  CHECK_FALSE(pb.is_nj);
  CHECK(check_derivation(pb.base, pb.deriv_context, pb.deriv_term, pb.concl));
}

TEST_CASE("validity report json shape") {
  ValidityReport r;
  r.verdict = true;
  r.mode = SemanticsMode::KripkeDisjunction;
  r.engine = BesEngine::BruteForce;
  r.universe = Universe({Atom("p")});
  r.bounds = EnumerationBounds{2, 1, 2};
  r.extensions_examined = 42;
  Json j = validity_report_to_json(r);
  CHECK(j["verdict"] == true);
  CHECK(j["mode"] == "kripke");
  CHECK(j["engine"] == "brute");
  CHECK(j["witness"].is_null());
  CHECK(j["extensions_examined"] == 42);
}
