#include "ibes/json_io.hpp"

#include <fstream>

#include "ibes/errors.hpp"

namespace ibes {

namespace {

const Json& expect(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) {
    throw SchemaError("missing field '" + std::string(key) + "'", path);
  }
  return j.at(key);
}

std::string expect_string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError("expected a string", path);
  return j.get<std::string>();
}

int expect_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError("expected an integer", path);
  return j.get<int>();
}

Atom expect_atom(const Json& j, const std::string& path) {
  std::string name = expect_string(j, path);
  if (!is_valid_atom_name(name)) {
    throw SchemaError("'" + name + "' is not a valid atom name", path);
  }
  return Atom(name);
}

Formula expect_formula(const Json& j, const std::string& path) {
  std::string text = expect_string(j, path);
  try {
    return parse_formula(text);
  } catch (const ParseError& e) {
    throw SchemaError(std::string("formula syntax error: ") + e.what(), path);
  }
}

}  // namespace

Json base_to_json(const Base& b, const Universe& u) {
  Json j;
  Json universe = Json::array();
  for (const auto& a : u.atoms()) universe.push_back(a.name);
  j["universe"] = std::move(universe);
  Json rules = Json::array();
  for (const auto& r : b.rules()) {
    Json jr;
    Json premises = Json::array();
    for (const auto& p : r.premises()) {
      Json jp;
      Json hyps = Json::array();
      for (const auto& h : p.hyps) hyps.push_back(h.name);
      jp["hyps"] = std::move(hyps);
      jp["concl"] = p.concl.name;
      premises.push_back(std::move(jp));
    }
    jr["premises"] = std::move(premises);
    jr["concl"] = r.conclusion().name;
    rules.push_back(std::move(jr));
  }
  j["rules"] = std::move(rules);
  return j;
}

std::pair<Base, Universe> base_from_json(const Json& j) {
  std::vector<Atom> atoms;
  const Json& ju = expect(j, "universe", "");
  if (!ju.is_array()) throw SchemaError("expected an array", "/universe");
  for (std::size_t i = 0; i < ju.size(); i++) {
    atoms.push_back(expect_atom(ju[i], "/universe/" + std::to_string(i)));
  }
  Universe u(std::move(atoms));

  std::vector<AtomicRule> rules;
  const Json& jr = expect(j, "rules", "");
  if (!jr.is_array()) throw SchemaError("expected an array", "/rules");
  for (std::size_t i = 0; i < jr.size(); i++) {
    const std::string rpath = "/rules/" + std::to_string(i);
    const Json& rule = jr[i];
    std::vector<RulePremise> premises;
    const Json& jp = expect(rule, "premises", rpath);
    if (!jp.is_array()) throw SchemaError("expected an array", rpath + "/premises");
    for (std::size_t k = 0; k < jp.size(); k++) {
      const std::string ppath = rpath + "/premises/" + std::to_string(k);
      std::vector<Atom> hyps;
      const Json& jh = expect(jp[k], "hyps", ppath);
      if (!jh.is_array()) throw SchemaError("expected an array", ppath + "/hyps");
      for (std::size_t h = 0; h < jh.size(); h++) {
        hyps.push_back(expect_atom(jh[h], ppath + "/hyps/" + std::to_string(h)));
      }
      Atom concl = expect_atom(expect(jp[k], "concl", ppath), ppath + "/concl");
      premises.push_back(RulePremise{AtomSet(std::move(hyps)), std::move(concl)});
    }
    Atom concl = expect_atom(expect(rule, "concl", rpath), rpath + "/concl");
    AtomicRule r(std::move(premises), std::move(concl));
    for (const auto& a : r.mentioned_atoms()) {
      if (!u.contains(a)) {
        throw SchemaError("rule mentions atom '" + a.name + "' outside the universe",
                          rpath);
      }
    }
    rules.push_back(std::move(r));
  }
  return {Base(std::move(rules)), std::move(u)};
}

Json kripke_to_json(const KripkeModel& m) {
  Json j;
  Json elements = Json::array();
  for (int i = 0; i < m.worlds().size(); i++) elements.push_back(m.worlds().label(i));
  j["elements"] = std::move(elements);
  Json leq = Json::array();
  for (int a = 0; a < m.worlds().size(); a++) {
    for (int b = 0; b < m.worlds().size(); b++) {
      if (a != b && m.worlds().leq(a, b)) {
        leq.push_back(Json::array({m.worlds().label(a), m.worlds().label(b)}));
      }
    }
  }
  j["leq"] = std::move(leq);
  Json atoms = Json::object();
  for (const auto& [atom, val] : m.atom_val()) {
    Json worlds = Json::array();
    for (int i = 0; i < m.worlds().size(); i++) {
      if (val[static_cast<std::size_t>(i)]) worlds.push_back(m.worlds().label(i));
    }
    atoms[atom.name] = std::move(worlds);
  }
  j["atoms"] = std::move(atoms);
  return j;
}

KripkeModel kripke_from_json(const Json& j) {
  std::vector<std::string> labels;
  const Json& je = expect(j, "elements", "");
  if (!je.is_array()) throw SchemaError("expected an array", "/elements");
  for (std::size_t i = 0; i < je.size(); i++) {
    labels.push_back(expect_string(je[i], "/elements/" + std::to_string(i)));
  }
  std::vector<std::pair<int, int>> pairs;
  const Json& jl = expect(j, "leq", "");
  if (!jl.is_array()) throw SchemaError("expected an array", "/leq");
  auto index_of_label = [&](const std::string& l, const std::string& path) {
    for (int i = 0; i < static_cast<int>(labels.size()); i++) {
      if (labels[static_cast<std::size_t>(i)] == l) return i;
    }
    throw SchemaError("unknown element '" + l + "'", path);
  };
  for (std::size_t i = 0; i < jl.size(); i++) {
    const std::string path = "/leq/" + std::to_string(i);
    if (!jl[i].is_array() || jl[i].size() != 2) {
      throw SchemaError("expected a [lo, hi] pair", path);
    }
    int a = index_of_label(expect_string(jl[i][0], path + "/0"), path + "/0");
    int b = index_of_label(expect_string(jl[i][1], path + "/1"), path + "/1");
    pairs.emplace_back(a, b);
  }
  Poset poset;
  try {
    poset = Poset(labels, pairs, /*apply_closure=*/true);
  } catch (const ConfigError& e) {
    throw SchemaError(e.what(), "/leq");
  }

  std::map<Atom, std::vector<bool>> val;
  const Json& ja = expect(j, "atoms", "");
  if (!ja.is_object()) throw SchemaError("expected an object", "/atoms");
  for (auto it = ja.begin(); it != ja.end(); ++it) {
    const std::string path = "/atoms/" + it.key();
    if (!is_valid_atom_name(it.key())) {
      throw SchemaError("'" + it.key() + "' is not a valid atom name", path);
    }
    std::vector<bool> col(labels.size(), false);
    if (!it.value().is_array()) throw SchemaError("expected an array", path);
    for (std::size_t i = 0; i < it.value().size(); i++) {
      int w = index_of_label(expect_string(it.value()[i], path + "/" + std::to_string(i)),
                             path + "/" + std::to_string(i));
      col[static_cast<std::size_t>(w)] = true;
    }
    // upward closure check with the offending pair in the message
    for (int w = 0; w < poset.size(); w++) {
      if (!col[static_cast<std::size_t>(w)]) continue;
      for (int v : poset.ups(w)) {
        if (!col[static_cast<std::size_t>(v)]) {
          throw SchemaError("valuation of '" + it.key() +
                                "' is not upward closed: holds at " + poset.label(w) +
                                " but not at " + poset.label(v),
                            path);
        }
      }
    }
    val[Atom(it.key())] = std::move(col);
  }
  return KripkeModel(std::move(poset), std::move(val));
}

Json bounds_to_json(const EnumerationBounds& b) {
  Json j;
  j["max_premises"] = b.max_premises;
  j["max_hyps"] = b.max_hyps;
  j["max_extra_rules"] = b.max_extra_rules;
  return j;
}

EnumerationBounds bounds_from_json(const Json& j) {
  EnumerationBounds b;
  b.max_premises = expect_int(expect(j, "max_premises", "/bounds"), "/bounds/max_premises");
  b.max_hyps = expect_int(expect(j, "max_hyps", "/bounds"), "/bounds/max_hyps");
  b.max_extra_rules =
      expect_int(expect(j, "max_extra_rules", "/bounds"), "/bounds/max_extra_rules");
  return b;
}

Json validity_report_to_json(const ValidityReport& r) {
  Json j;
  j["verdict"] = r.verdict;
  j["mode"] = r.mode == SemanticsMode::Sandqvist ? "sandqvist" : "kripke";
  j["engine"] = r.engine == BesEngine::BruteForce ? "brute" : "prover";
  Json universe = Json::array();
  for (const auto& a : r.universe.atoms()) universe.push_back(a.name);
  j["universe"] = std::move(universe);
  j["bounds"] = bounds_to_json(r.bounds);
  if (r.witness) {
    Json w;
    w["extension"] = base_to_json(r.witness->extension, r.universe);
    w["atom"] = r.witness->atom ? Json(r.witness->atom->name) : Json(nullptr);
    w["formula"] =
        r.witness->formula ? Json(render_formula(*r.witness->formula)) : Json(nullptr);
    w["clause"] = r.witness->clause;
    j["witness"] = std::move(w);
  } else {
    j["witness"] = nullptr;
  }
  j["extensions_examined"] = r.extensions_examined;
  return j;
}

Json nj_term_to_json(const NJTermPtr& t) {
  using K = NJTerm::Kind;
  Json j;
  switch (t->kind()) {
    case K::Var:
      j["kind"] = "var";
      j["name"] = t->name();
      break;
    case K::Pair:
      j["kind"] = "pair";
      j["first"] = nj_term_to_json(t->child(0));
      j["second"] = nj_term_to_json(t->child(1));
      break;
    case K::Fst:
      j["kind"] = "fst";
      j["arg"] = nj_term_to_json(t->child(0));
      break;
    case K::Snd:
      j["kind"] = "snd";
      j["arg"] = nj_term_to_json(t->child(0));
      break;
    case K::Lam:
      j["kind"] = "lam";
      j["var"] = t->name();
      j["dom"] = render_formula(t->ann());
      j["body"] = nj_term_to_json(t->child(0));
      break;
    case K::App:
      j["kind"] = "app";
      j["fun"] = nj_term_to_json(t->child(0));
      j["arg"] = nj_term_to_json(t->child(1));
      break;
    case K::Inl:
      j["kind"] = "inl";
      j["arg"] = nj_term_to_json(t->child(0));
      j["other"] = render_formula(t->ann());
      break;
    case K::Inr:
      j["kind"] = "inr";
      j["arg"] = nj_term_to_json(t->child(0));
      j["other"] = render_formula(t->ann());
      break;
    case K::Case:
      j["kind"] = "case";
      j["scrut"] = nj_term_to_json(t->child(0));
      j["left_var"] = t->left_binder();
      j["left"] = nj_term_to_json(t->child(1));
      j["right_var"] = t->right_binder();
      j["right"] = nj_term_to_json(t->child(2));
      break;
    case K::Abort:
      j["kind"] = "abort";
      j["arg"] = nj_term_to_json(t->child(0));
      j["result"] = render_formula(t->ann());
      break;
  }
  return j;
}

NJTermPtr nj_term_from_json(const Json& j, const std::string& path) {
  std::string kind = expect_string(expect(j, "kind", path), path + "/kind");
  if (kind == "var") {
    return NJTerm::var(expect_string(expect(j, "name", path), path + "/name"));
  }
  if (kind == "pair") {
    return NJTerm::pair(nj_term_from_json(expect(j, "first", path), path + "/first"),
                        nj_term_from_json(expect(j, "second", path), path + "/second"));
  }
  if (kind == "fst") {
    return NJTerm::fst(nj_term_from_json(expect(j, "arg", path), path + "/arg"));
  }
  if (kind == "snd") {
    return NJTerm::snd(nj_term_from_json(expect(j, "arg", path), path + "/arg"));
  }
  if (kind == "lam") {
    return NJTerm::lam(expect_string(expect(j, "var", path), path + "/var"),
                       expect_formula(expect(j, "dom", path), path + "/dom"),
                       nj_term_from_json(expect(j, "body", path), path + "/body"));
  }
  if (kind == "app") {
    return NJTerm::app(nj_term_from_json(expect(j, "fun", path), path + "/fun"),
                       nj_term_from_json(expect(j, "arg", path), path + "/arg"));
  }
  if (kind == "inl") {
    return NJTerm::inl(nj_term_from_json(expect(j, "arg", path), path + "/arg"),
                       expect_formula(expect(j, "other", path), path + "/other"));
  }
  if (kind == "inr") {
    return NJTerm::inr(nj_term_from_json(expect(j, "arg", path), path + "/arg"),
                       expect_formula(expect(j, "other", path), path + "/other"));
  }
  if (kind == "case") {
    return NJTerm::case_of(
        nj_term_from_json(expect(j, "scrut", path), path + "/scrut"),
        expect_string(expect(j, "left_var", path), path + "/left_var"),
        nj_term_from_json(expect(j, "left", path), path + "/left"),
        expect_string(expect(j, "right_var", path), path + "/right_var"),
        nj_term_from_json(expect(j, "right", path), path + "/right"));
  }
  if (kind == "abort") {
    return NJTerm::abort(nj_term_from_json(expect(j, "arg", path), path + "/arg"),
                         expect_formula(expect(j, "result", path), path + "/result"));
  }
  throw SchemaError("unknown NJ term kind '" + kind + "'", path + "/kind");
}

Json deriv_term_to_json(const DerivTermPtr& t) {
  Json j;
  if (t->is_var()) {
    j["kind"] = "var";
    j["name"] = t->var_name();
    return j;
  }
  j["kind"] = "app";
  Json rule;
  Json premises = Json::array();
  for (const auto& p : t->rule().premises()) {
    Json jp;
    Json hyps = Json::array();
    for (const auto& h : p.hyps) hyps.push_back(h.name);
    jp["hyps"] = std::move(hyps);
    jp["concl"] = p.concl.name;
    premises.push_back(std::move(jp));
  }
  rule["premises"] = std::move(premises);
  rule["concl"] = t->rule().conclusion().name;
  j["rule"] = std::move(rule);
  Json args = Json::array();
  for (const auto& a : t->args()) {
    Json ja;
    Json binders = Json::array();
    for (const auto& b : a.binders) binders.push_back(b);
    ja["binders"] = std::move(binders);
    ja["body"] = deriv_term_to_json(a.body);
    args.push_back(std::move(ja));
  }
  j["args"] = std::move(args);
  return j;
}

DerivTermPtr deriv_term_from_json(const Json& j, const std::string& path) {
  std::string kind = expect_string(expect(j, "kind", path), path + "/kind");
  if (kind == "var") {
    return DerivTerm::var(expect_string(expect(j, "name", path), path + "/name"));
  }
  if (kind != "app") throw SchemaError("unknown derivation kind '" + kind + "'", path);
  const Json& jr = expect(j, "rule", path);
  std::vector<RulePremise> premises;
  const Json& jp = expect(jr, "premises", path + "/rule");
  for (std::size_t i = 0; i < jp.size(); i++) {
    const std::string ppath = path + "/rule/premises/" + std::to_string(i);
    std::vector<Atom> hyps;
    const Json& jh = expect(jp[i], "hyps", ppath);
    for (std::size_t h = 0; h < jh.size(); h++) {
      hyps.push_back(expect_atom(jh[h], ppath + "/hyps/" + std::to_string(h)));
    }
    premises.push_back(RulePremise{
        AtomSet(std::move(hyps)),
        expect_atom(expect(jp[i], "concl", ppath), ppath + "/concl")});
  }
  AtomicRule rule(std::move(premises),
                  expect_atom(expect(jr, "concl", path + "/rule"), path + "/rule/concl"));
  std::vector<DerivTerm::Arg> args;
  const Json& ja = expect(j, "args", path);
  for (std::size_t i = 0; i < ja.size(); i++) {
    const std::string apath = path + "/args/" + std::to_string(i);
    std::vector<std::string> binders;
    const Json& jb = expect(ja[i], "binders", apath);
    for (std::size_t b = 0; b < jb.size(); b++) {
      binders.push_back(expect_string(jb[b], apath + "/binders/" + std::to_string(b)));
    }
    args.push_back({std::move(binders),
                    deriv_term_from_json(expect(ja[i], "body", apath), apath + "/body")});
  }
  return DerivTerm::app(std::move(rule), std::move(args));
}

Json decision_to_json(const Decision& d, const Sequent& s) {
  Json j;
  j["sequent"] = render_sequent(s);
  j["verdict"] = d.derivable ? "derivable" : "underivable";
  if (d.derivable) {
    j["term"] = render_nj(d.term);
    j["term_json"] = nj_term_to_json(d.term);
    j["countermodel"] = nullptr;
  } else {
    j["term"] = nullptr;
    j["term_json"] = nullptr;
    Json cm = kripke_to_json(d.countermodel);
    cm["refuting_world"] = d.countermodel.worlds().label(d.refuting_world);
    j["countermodel"] = std::move(cm);
  }
  return j;
}

Json completeness_report_to_json(const CompletenessReport& r) {
  Json j;
  j["sequent"] = render_sequent(Sequent{r.gamma, r.phi});
  j["nj_derivable"] = r.nj_derivable;
  j["flat_derivable"] = r.flat_derivable;
  j["agreement"] = r.agree;
  Json universe = Json::array();
  for (const auto& a : r.flat_universe.atoms()) universe.push_back(a.name);
  j["flat_universe"] = std::move(universe);
  j["n_rule_count"] = r.n_rule_count;
  return j;
}

Json fragment_to_json(const Fragment& f) {
  Json j;
  Json worlds = Json::array();
  for (const auto& w : f.worlds()) {
    Json jw;
    jw["base"] = base_to_json(w.base, f.universe());
    Json ctx = Json::array();
    for (const auto& [n, a] : w.ctx) {
      Json entry;
      entry["var"] = n;
      entry["atom"] = a.name;
      ctx.push_back(std::move(entry));
    }
    jw["ctx"] = std::move(ctx);
    worlds.push_back(std::move(jw));
  }
  j["worlds"] = std::move(worlds);
  Json morphisms = Json::array();
  for (const auto& m : f.morphisms()) {
    Json jm;
    jm["source"] = m.source;
    jm["target"] = m.target;
    Json terms = Json::array();
    for (const auto& t : m.terms) terms.push_back(deriv_term_to_json(t));
    jm["terms"] = std::move(terms);
    morphisms.push_back(std::move(jm));
  }
  j["morphisms"] = std::move(morphisms);
  j["depth"] = f.depth();
  return j;
}

Json fragment_tables_to_json(const Fragment& f, const Denot& d) {
  Json j;
  j["formula"] = d.formula() ? Json(render_formula(*d.formula())) : Json(nullptr);
  Json sizes = Json::array();
  for (int w = 0; w < static_cast<int>(f.worlds().size()); w++) {
    sizes.push_back(d.table(w).size());
  }
  j["table_cardinalities"] = std::move(sizes);
  return j;
}

ProofFile proof_from_json(const Json& j) {
  ProofFile out;
  std::string kind = expect_string(expect(j, "kind", ""), "/kind");
  if (kind == "nj") {
    out.is_nj = true;
    const Json& jc = expect(j, "context", "");
    if (!jc.is_array()) throw SchemaError("expected an array", "/context");
    for (std::size_t i = 0; i < jc.size(); i++) {
      const std::string path = "/context/" + std::to_string(i);
      out.nj_context.emplace_back(
          expect_string(expect(jc[i], "var", path), path + "/var"),
          expect_formula(expect(jc[i], "formula", path), path + "/formula"));
    }
    out.nj_term = nj_term_from_json(expect(j, "term", ""), "/term");
    out.nj_formula = expect_formula(expect(j, "formula", ""), "/formula");
    return out;
  }
  if (kind == "base") {
    out.is_nj = false;
    auto [base, universe] = base_from_json(j);
    out.base = std::move(base);
    out.universe = std::move(universe);
    const Json& jc = expect(j, "context", "");
    if (!jc.is_array()) throw SchemaError("expected an array", "/context");
    for (std::size_t i = 0; i < jc.size(); i++) {
      const std::string path = "/context/" + std::to_string(i);
      out.deriv_context.emplace_back(
          expect_string(expect(jc[i], "var", path), path + "/var"),
          expect_atom(expect(jc[i], "atom", path), path + "/atom"));
    }
    out.deriv_term = deriv_term_from_json(expect(j, "term", ""), "/term");
    out.concl = expect_atom(expect(j, "concl", ""), "/concl");
    return out;
  }
  throw SchemaError("unknown proof kind '" + kind + "'", "/kind");
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("JSON parse error: ") + e.what(), "/");
  }
  return j;
}

}  // namespace ibes
