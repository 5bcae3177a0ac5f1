#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ibes/formula.hpp"

namespace ibes {

class NJTerm;
using NJTermPtr = std::shared_ptr<const NJTerm>;

// Proof terms for NJ: typed lambda calculus with products, sums and an empty
// type. Binders carry the formula annotations needed to reconstruct the
// typing derivation.
class NJTerm {
 public:
  enum class Kind { Var, Pair, Fst, Snd, Lam, App, Inl, Inr, Case, Abort };

  static NJTermPtr var(std::string name);
  static NJTermPtr pair(NJTermPtr a, NJTermPtr b);
  static NJTermPtr fst(NJTermPtr t);
  static NJTermPtr snd(NJTermPtr t);
  static NJTermPtr lam(std::string v, Formula dom, NJTermPtr body);
  static NJTermPtr app(NJTermPtr f, NJTermPtr a);
  static NJTermPtr inl(NJTermPtr t, Formula right_disjunct);
  static NJTermPtr inr(NJTermPtr t, Formula left_disjunct);
  static NJTermPtr case_of(NJTermPtr scrut, std::string lv, NJTermPtr l,
                           std::string rv, NJTermPtr r);
  static NJTermPtr abort(NJTermPtr t, Formula result);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }      // Var, Lam binder
  const std::string& left_binder() const { return name_; }
  const std::string& right_binder() const { return name2_; }
  const Formula& ann() const { return ann_; }
  const NJTermPtr& child(std::size_t i) const { return children_.at(i); }
  std::size_t arity() const { return children_.size(); }

 private:
  NJTerm() = default;
  Kind kind_ = Kind::Var;
  std::string name_, name2_;
  Formula ann_;
  std::vector<NJTermPtr> children_;
};

using NJContext = std::vector<std::pair<std::string, Formula>>;

// Type inference under the rules of NJ. Later bindings shadow earlier ones.
std::optional<Formula> infer_nj(const NJContext& ctx, const NJTerm& t);

// True iff t encodes an NJ derivation of ctx |- phi.
bool check_nj(const NJContext& ctx, const NJTerm& t, const Formula& phi);
bool check_nj(const NJContext& ctx, const NJTermPtr& t, const Formula& phi);

std::set<std::string> nj_free_vars(const NJTerm& t);

// Capture-avoiding substitution of val for free occurrences of var.
NJTermPtr nj_substitute(const NJTermPtr& t, const std::string& var,
                        const NJTermPtr& val);

// Beta-normal form: no App(Lam..), Fst/Snd(Pair..), Case(Inl/Inr..) left.
// Terminates on well-typed terms and preserves the sequent.
NJTermPtr normalize(const NJTermPtr& t);

bool has_detour(const NJTerm& t);

std::string render_nj(const NJTerm& t);
inline std::string render_nj(const NJTermPtr& t) { return render_nj(*t); }

}  // namespace ibes
