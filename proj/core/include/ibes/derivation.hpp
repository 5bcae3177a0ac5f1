#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ibes/rules.hpp"

namespace ibes {

class DerivTerm;
using DerivTermPtr = std::shared_ptr<const DerivTerm>;

// Proof term for derivations in a base:
//   Phi ::= x | Phi_R(Phi_1, ..., Phi_n)
// Each argument of an application binds one variable per hypothesis atom of
// the corresponding premise (in the premise's sorted hyp order); those
// binders scope over the argument body only.
class DerivTerm {
 public:
  struct Arg {
    std::vector<std::string> binders;
    DerivTermPtr body;
  };

  static DerivTermPtr var(std::string name);
  static DerivTermPtr app(AtomicRule rule, std::vector<Arg> args);

  bool is_var() const { return is_var_; }
  const std::string& var_name() const { return name_; }
  const AtomicRule& rule() const { return rule_; }
  const std::vector<Arg>& args() const { return args_; }
  int depth() const { return depth_; }  // Var has depth 1

 private:
  DerivTerm() = default;
  bool is_var_ = false;
  std::string name_;
  AtomicRule rule_;
  std::vector<Arg> args_;
  int depth_ = 1;
};

// Structural equality, binder names included. Terms produced by
// canonicalize_binders compare equal iff they are alpha-equal.
bool term_eq(const DerivTerm& a, const DerivTerm& b);
bool term_eq(const DerivTermPtr& a, const DerivTermPtr& b);

std::string render_term(const DerivTerm& t);
inline std::string render_term(const DerivTermPtr& t) { return render_term(*t); }

// Typing context (X : P): ordered variable/atom pairs, names distinct.
using VarContext = std::vector<std::pair<std::string, Atom>>;

bool context_names_distinct(const VarContext& ctx);

// The (Ref)/(App_R) typing rules: true iff t derives `target` from ctx in
// `base`. Ill-formed terms yield false, never an exception.
bool check_derivation(const Base& base, const VarContext& ctx, const DerivTerm& t,
                      const Atom& target);
bool check_derivation(const Base& base, const VarContext& ctx, const DerivTermPtr& t,
                      const Atom& target);

std::set<std::string> free_vars(const DerivTerm& t);

// Capture-avoiding simultaneous substitution. Binders that would capture a
// free variable of the substituted terms (or that shadow a domain variable
// being remapped deeper in) are renamed deterministically.
DerivTermPtr substitute(const DerivTermPtr& t,
                        const std::map<std::string, DerivTermPtr>& subst);

// Renames every binder to the positional scheme "b1", "b2", ... (outermost
// scope first), skipping names in `avoid`. Alpha-equal terms canonicalize to
// structurally equal ones, which is what lets denotation tables use plain
// structural equality.
DerivTermPtr canonicalize_binders(const DerivTermPtr& t,
                                  const std::set<std::string>& avoid);

// All well-formed derivations of `target` from ctx in `base` with depth at
// most max_depth, canonical binder naming, deterministic order. Throws
// CapError if more than `cap` terms would be produced.
std::vector<DerivTermPtr> enumerate_terms(const Base& base, const VarContext& ctx,
                                          const Atom& target, int max_depth,
                                          std::uint64_t cap = 100000);

}  // namespace ibes
