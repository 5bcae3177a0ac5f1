#pragma once

#include <string>
#include <utility>

#include <json.hpp>

#include "ibes/bes.hpp"
#include "ibes/category.hpp"
#include "ibes/decide.hpp"
#include "ibes/flatten.hpp"
#include "ibes/kripke.hpp"
#include "ibes/rules.hpp"

namespace ibes {

using Json = nlohmann::ordered_json;

// Base files: {"universe":["p","q"],"rules":[{"premises":[{"hyps":["q"],
// "concl":"p"}],"concl":"r"}]}. Field order in emitted files is fixed.
Json base_to_json(const Base& b, const Universe& u);
std::pair<Base, Universe> base_from_json(const Json& j);

// Poset files: {"elements":["w0","w1"],"leq":[["w0","w1"]],"atoms":
// {"p":["w1"]}}; reflexive/transitive closure is applied on load and
// non-upward-closed valuations are rejected naming the offending world pair.
Json kripke_to_json(const KripkeModel& m);
KripkeModel kripke_from_json(const Json& j);

Json bounds_to_json(const EnumerationBounds& b);
EnumerationBounds bounds_from_json(const Json& j);

Json validity_report_to_json(const ValidityReport& r);
Json decision_to_json(const Decision& d, const Sequent& s);
Json completeness_report_to_json(const CompletenessReport& r);

Json nj_term_to_json(const NJTermPtr& t);
NJTermPtr nj_term_from_json(const Json& j, const std::string& path = "/term");

Json deriv_term_to_json(const DerivTermPtr& t);
DerivTermPtr deriv_term_from_json(const Json& j, const std::string& path = "/term");

Json fragment_to_json(const Fragment& f);
Json fragment_tables_to_json(const Fragment& f, const Denot& d);

// Proof files carry either an NJ proof ("kind":"nj") with a context, term,
// and formula, or a base derivation ("kind":"base") with a base, context,
// term, and conclusion atom.
struct ProofFile {
  bool is_nj = true;
  // nj
  NJContext nj_context;
  NJTermPtr nj_term;
  Formula nj_formula;
  // base
  Base base;
  Universe universe;
  VarContext deriv_context;
  DerivTermPtr deriv_term;
  Atom concl;
};
ProofFile proof_from_json(const Json& j);

Json load_json_file(const std::string& path);

}  // namespace ibes
