#include "ibes/derivation.hpp"

#include <algorithm>

#include "ibes/errors.hpp"

namespace ibes {

DerivTermPtr DerivTerm::var(std::string name) {
  auto t = std::shared_ptr<DerivTerm>(new DerivTerm());
  t->is_var_ = true;
  t->name_ = std::move(name);
  t->depth_ = 1;
  return t;
}

DerivTermPtr DerivTerm::app(AtomicRule rule, std::vector<Arg> args) {
  auto t = std::shared_ptr<DerivTerm>(new DerivTerm());
  t->is_var_ = false;
  t->rule_ = std::move(rule);
  t->args_ = std::move(args);
  int d = 0;
  for (const auto& a : t->args_) d = std::max(d, a.body ? a.body->depth() : 0);
  t->depth_ = d + 1;
  return t;
}

bool term_eq(const DerivTerm& a, const DerivTerm& b) {
  if (&a == &b) return true;
  if (a.is_var() != b.is_var()) return false;
  if (a.is_var()) return a.var_name() == b.var_name();
  if (!(a.rule() == b.rule())) return false;
  if (a.args().size() != b.args().size()) return false;
  for (std::size_t i = 0; i < a.args().size(); i++) {
    if (a.args()[i].binders != b.args()[i].binders) return false;
    if (!term_eq(*a.args()[i].body, *b.args()[i].body)) return false;
  }
  return true;
}

bool term_eq(const DerivTermPtr& a, const DerivTermPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return term_eq(*a, *b);
}

std::string render_term(const DerivTerm& t) {
  if (t.is_var()) return t.var_name();
  std::string out = "[" + render_rule(t.rule()) + "]";
  out += "(";
  bool first = true;
  for (const auto& a : t.args()) {
    if (!first) out += ", ";
    first = false;
    if (!a.binders.empty()) {
      bool fb = true;
      for (const auto& b : a.binders) {
        if (!fb) out += ",";
        fb = false;
        out += b;
      }
      out += ". ";
    }
    out += render_term(*a.body);
  }
  out += ")";
  return out;
}

bool context_names_distinct(const VarContext& ctx) {
  std::set<std::string> seen;
  for (const auto& [name, atom] : ctx) {
    if (!seen.insert(name).second) return false;
  }
  return true;
}

namespace {

// innermost binding wins; binders may shadow outer names
const Atom* lookup(const VarContext& ctx, const std::string& name) {
  for (auto it = ctx.rbegin(); it != ctx.rend(); ++it) {
    if (it->first == name) return &it->second;
  }
  return nullptr;
}

bool check_rec(const Base& base, const VarContext& ctx, const DerivTerm& t,
               const Atom& target) {
  if (t.is_var()) {
    const Atom* a = lookup(ctx, t.var_name());
    return a != nullptr && *a == target;
  }
  const AtomicRule& r = t.rule();
  if (!base.contains(r)) return false;
  if (!(r.conclusion() == target)) return false;
  if (t.args().size() != r.premises().size()) return false;
  for (std::size_t i = 0; i < t.args().size(); i++) {
    const auto& arg = t.args()[i];
    const auto& prem = r.premises()[i];
    if (!arg.body) return false;
    if (arg.binders.size() != prem.hyps.size()) return false;
    std::set<std::string> distinct(arg.binders.begin(), arg.binders.end());
    if (distinct.size() != arg.binders.size()) return false;
    VarContext extended = ctx;
    for (std::size_t j = 0; j < arg.binders.size(); j++) {
      extended.emplace_back(arg.binders[j], prem.hyps.atoms()[j]);
    }
    if (!check_rec(base, extended, *arg.body, prem.concl)) return false;
  }
  return true;
}

void free_vars_rec(const DerivTerm& t, std::set<std::string>& bound,
                   std::set<std::string>& out) {
  if (t.is_var()) {
    if (!bound.count(t.var_name())) out.insert(t.var_name());
    return;
  }
  for (const auto& arg : t.args()) {
    std::vector<std::string> added;
    for (const auto& b : arg.binders) {
      if (bound.insert(b).second) added.push_back(b);
    }
    free_vars_rec(*arg.body, bound, out);
    for (const auto& b : added) bound.erase(b);
  }
}

std::string fresh_name(const std::string& stem, const std::set<std::string>& used) {
  if (!used.count(stem)) return stem;
  for (int k = 1;; k++) {
    std::string cand = stem + "_" + std::to_string(k);
    if (!used.count(cand)) return cand;
  }
}

DerivTermPtr subst_rec(const DerivTermPtr& t,
                       const std::map<std::string, DerivTermPtr>& subst,
                       const std::set<std::string>& range_frees) {
  if (t->is_var()) {
    auto it = subst.find(t->var_name());
    return it == subst.end() ? t : it->second;
  }
  std::vector<DerivTerm::Arg> args;
  args.reserve(t->args().size());
  for (const auto& arg : t->args()) {
    std::map<std::string, DerivTermPtr> inner = subst;
    std::set<std::string> inner_frees = range_frees;
    std::vector<std::string> binders = arg.binders;
    for (auto& b : binders) {
      inner.erase(b);  // shadowed
    }
    // rename binders that would capture a free variable of the range
    std::set<std::string> body_frees = free_vars(*arg.body);
    for (auto& b : binders) {
      if (inner_frees.count(b)) {
        std::set<std::string> used = inner_frees;
        used.insert(body_frees.begin(), body_frees.end());
        for (const auto& ob : binders) used.insert(ob);
        std::string nb = fresh_name(b, used);
        inner[b] = DerivTerm::var(nb);
        inner_frees.insert(nb);
        b = nb;
      }
    }
    args.push_back({std::move(binders), subst_rec(arg.body, inner, inner_frees)});
  }
  return DerivTerm::app(t->rule(), std::move(args));
}

DerivTermPtr canon_rec(const DerivTermPtr& t,
                       const std::map<std::string, std::string>& renames,
                       int scope_depth, const std::set<std::string>& avoid) {
  if (t->is_var()) {
    auto it = renames.find(t->var_name());
    return it == renames.end() ? t : DerivTerm::var(it->second);
  }
  std::vector<DerivTerm::Arg> args;
  args.reserve(t->args().size());
  for (const auto& arg : t->args()) {
    std::map<std::string, std::string> inner = renames;
    std::vector<std::string> binders;
    int depth = scope_depth;
    for (const auto& b : arg.binders) {
      std::string nb;
      do {
        depth++;
        nb = "b" + std::to_string(depth);
      } while (avoid.count(nb));
      inner[b] = nb;
      binders.push_back(nb);
    }
    args.push_back({std::move(binders), canon_rec(arg.body, inner, depth, avoid)});
  }
  return DerivTerm::app(t->rule(), std::move(args));
}

}  // namespace

bool check_derivation(const Base& base, const VarContext& ctx, const DerivTerm& t,
                      const Atom& target) {
  if (!context_names_distinct(ctx)) return false;
  return check_rec(base, ctx, t, target);
}

bool check_derivation(const Base& base, const VarContext& ctx, const DerivTermPtr& t,
                      const Atom& target) {
  return t && check_derivation(base, ctx, *t, target);
}

std::set<std::string> free_vars(const DerivTerm& t) {
  std::set<std::string> bound, out;
  free_vars_rec(t, bound, out);
  return out;
}

DerivTermPtr substitute(const DerivTermPtr& t,
                        const std::map<std::string, DerivTermPtr>& subst) {
  if (!t) return t;
  std::set<std::string> range_frees;
  for (const auto& [k, v] : subst) {
    auto fv = free_vars(*v);
    range_frees.insert(fv.begin(), fv.end());
  }
  return subst_rec(t, subst, range_frees);
}

DerivTermPtr canonicalize_binders(const DerivTermPtr& t,
                                  const std::set<std::string>& avoid) {
  if (!t) return t;
  return canon_rec(t, {}, 0, avoid);
}

namespace {

void enumerate_rec(const Base& base, const VarContext& ctx, const Atom& target,
                   int max_depth, int scope_depth, const std::set<std::string>& avoid,
                   std::uint64_t cap, std::uint64_t& produced,
                   std::vector<DerivTermPtr>& out) {
  if (max_depth <= 0) return;
  for (const auto& [name, atom] : ctx) {
    if (atom == target) {
      if (++produced > cap) throw CapError("term enumeration exceeds cap", cap);
      out.push_back(DerivTerm::var(name));
    }
  }
  for (const auto& rule : base.rules()) {
    if (!(rule.conclusion() == target)) continue;
    // depth of an application is 1 + max over args (0 if none)
    if (!rule.premises().empty() && max_depth < 2) continue;
    // enumerate argument lists premise by premise
    std::vector<std::vector<DerivTerm::Arg>> per_premise;
    bool feasible = true;
    for (const auto& prem : rule.premises()) {
      VarContext extended = ctx;
      std::vector<std::string> binders;
      int depth = scope_depth;
      for (const auto& h : prem.hyps) {
        std::string nb;
        do {
          depth++;
          nb = "b" + std::to_string(depth);
        } while (avoid.count(nb));
        binders.push_back(nb);
        extended.emplace_back(nb, h);
      }
      std::vector<DerivTermPtr> bodies;
      enumerate_rec(base, extended, prem.concl, max_depth - 1, depth, avoid, cap,
                    produced, bodies);
      if (bodies.empty()) {
        feasible = false;
        break;
      }
      std::vector<DerivTerm::Arg> alts;
      alts.reserve(bodies.size());
      for (auto& b : bodies) alts.push_back({binders, std::move(b)});
      per_premise.push_back(std::move(alts));
    }
    if (!feasible) continue;
    // cartesian product in lexicographic order
    std::vector<std::size_t> idx(per_premise.size(), 0);
    while (true) {
      std::vector<DerivTerm::Arg> args;
      args.reserve(per_premise.size());
      for (std::size_t i = 0; i < per_premise.size(); i++) {
        args.push_back(per_premise[i][idx[i]]);
      }
      if (++produced > cap) throw CapError("term enumeration exceeds cap", cap);
      out.push_back(DerivTerm::app(rule, std::move(args)));
      std::size_t k = per_premise.size();
      while (k > 0) {
        k--;
        if (++idx[k] < per_premise[k].size()) break;
        idx[k] = 0;
        if (k == 0) goto done_rule;
      }
      if (per_premise.empty()) break;
    }
  done_rule:;
  }
}

}  // namespace

std::vector<DerivTermPtr> enumerate_terms(const Base& base, const VarContext& ctx,
                                          const Atom& target, int max_depth,
                                          std::uint64_t cap) {
  std::set<std::string> avoid;
  for (const auto& [n, a] : ctx) avoid.insert(n);
  std::vector<DerivTermPtr> out;
  std::uint64_t produced = 0;
  enumerate_rec(base, ctx, target, max_depth, 0, avoid, cap, produced, out);
  return out;
}

}  // namespace ibes
