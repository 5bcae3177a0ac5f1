#include "ibes/nj.hpp"

#include <algorithm>

namespace ibes {

namespace {
std::string fresh_name(const std::string& stem, const std::set<std::string>& used) {
  if (!used.count(stem)) return stem;
  for (int k = 1;; k++) {
    std::string cand = stem + "_" + std::to_string(k);
    if (!used.count(cand)) return cand;
  }
}
}  // namespace

NJTermPtr NJTerm::var(std::string name) {
  auto t = std::shared_ptr<NJTerm>(new NJTerm());
  t->kind_ = Kind::Var;
  t->name_ = std::move(name);
  return t;
}
NJTermPtr NJTerm::pair(NJTermPtr a, NJTermPtr b) {
  auto t = std::shared_ptr<NJTerm>(new NJTerm());
  t->kind_ = Kind::Pair;
  t->children_ = {std::move(a), std::move(b)};
  return t;
}
NJTermPtr NJTerm::fst(NJTermPtr c) {
  auto t = std::shared_ptr<NJTerm>(new NJTerm());
  t->kind_ = Kind::Fst;
  t->children_ = {std::move(c)};
  return t;
}
NJTermPtr NJTerm::snd(NJTermPtr c) {
  auto t = std::shared_ptr<NJTerm>(new NJTerm());
  t->kind_ = Kind::Snd;
  t->children_ = {std::move(c)};
  return t;
}
NJTermPtr NJTerm::lam(std::string v, Formula dom, NJTermPtr body) {
  auto t = std::shared_ptr<NJTerm>(new NJTerm());
  t->kind_ = Kind::Lam;
  t->name_ = std::move(v);
  t->ann_ = std::move(dom);
  t->children_ = {std::move(body)};
  return t;
}
NJTermPtr NJTerm::app(NJTermPtr f, NJTermPtr a) {
  auto t = std::shared_ptr<NJTerm>(new NJTerm());
  t->kind_ = Kind::App;
  t->children_ = {std::move(f), std::move(a)};
  return t;
}
NJTermPtr NJTerm::inl(NJTermPtr c, Formula right_disjunct) {
  auto t = std::shared_ptr<NJTerm>(new NJTerm());
  t->kind_ = Kind::Inl;
  t->ann_ = std::move(right_disjunct);
  t->children_ = {std::move(c)};
  return t;
}
NJTermPtr NJTerm::inr(NJTermPtr c, Formula left_disjunct) {
  auto t = std::shared_ptr<NJTerm>(new NJTerm());
  t->kind_ = Kind::Inr;
  t->ann_ = std::move(left_disjunct);
  t->children_ = {std::move(c)};
  return t;
}
NJTermPtr NJTerm::case_of(NJTermPtr scrut, std::string lv, NJTermPtr l,
                          std::string rv, NJTermPtr r) {
  auto t = std::shared_ptr<NJTerm>(new NJTerm());
  t->kind_ = Kind::Case;
  t->name_ = std::move(lv);
  t->name2_ = std::move(rv);
  t->children_ = {std::move(scrut), std::move(l), std::move(r)};
  return t;
}
NJTermPtr NJTerm::abort(NJTermPtr c, Formula result) {
  auto t = std::shared_ptr<NJTerm>(new NJTerm());
  t->kind_ = Kind::Abort;
  t->ann_ = std::move(result);
  t->children_ = {std::move(c)};
  return t;
}

std::optional<Formula> infer_nj(const NJContext& ctx, const NJTerm& t) {
  using K = NJTerm::Kind;
  switch (t.kind()) {
    case K::Var: {
      for (auto it = ctx.rbegin(); it != ctx.rend(); ++it) {
        if (it->first == t.name()) return it->second;
      }
      return std::nullopt;
    }
    case K::Pair: {
      auto a = infer_nj(ctx, *t.child(0));
      auto b = infer_nj(ctx, *t.child(1));
      if (!a || !b) return std::nullopt;
      return Formula::conj(*a, *b);
    }
    case K::Fst: {
      auto a = infer_nj(ctx, *t.child(0));
      if (!a || a->kind() != Formula::Kind::Conj) return std::nullopt;
      return a->left();
    }
    case K::Snd: {
      auto a = infer_nj(ctx, *t.child(0));
      if (!a || a->kind() != Formula::Kind::Conj) return std::nullopt;
      return a->right();
    }
    case K::Lam: {
      NJContext extended = ctx;
      extended.emplace_back(t.name(), t.ann());
      auto b = infer_nj(extended, *t.child(0));
      if (!b) return std::nullopt;
      return Formula::impl(t.ann(), *b);
    }
    case K::App: {
      auto f = infer_nj(ctx, *t.child(0));
      auto a = infer_nj(ctx, *t.child(1));
      if (!f || !a || f->kind() != Formula::Kind::Impl) return std::nullopt;
      if (!(f->left() == *a)) return std::nullopt;
      return f->right();
    }
    case K::Inl: {
      auto a = infer_nj(ctx, *t.child(0));
      if (!a) return std::nullopt;
      return Formula::disj(*a, t.ann());
    }
    case K::Inr: {
      auto b = infer_nj(ctx, *t.child(0));
      if (!b) return std::nullopt;
      return Formula::disj(t.ann(), *b);
    }
    case K::Case: {
      auto s = infer_nj(ctx, *t.child(0));
      if (!s || s->kind() != Formula::Kind::Disj) return std::nullopt;
      NJContext lctx = ctx;
      lctx.emplace_back(t.left_binder(), s->left());
      auto l = infer_nj(lctx, *t.child(1));
      NJContext rctx = ctx;
      rctx.emplace_back(t.right_binder(), s->right());
      auto r = infer_nj(rctx, *t.child(2));
      if (!l || !r || !(*l == *r)) return std::nullopt;
      return l;
    }
    case K::Abort: {
      auto a = infer_nj(ctx, *t.child(0));
      if (!a || !a->is_bot()) return std::nullopt;
      return t.ann();
    }
  }
  return std::nullopt;
}

bool check_nj(const NJContext& ctx, const NJTerm& t, const Formula& phi) {
  auto inferred = infer_nj(ctx, t);
  return inferred.has_value() && *inferred == phi;
}

bool check_nj(const NJContext& ctx, const NJTermPtr& t, const Formula& phi) {
  return t && check_nj(ctx, *t, phi);
}

namespace {
void free_vars_rec(const NJTerm& t, std::set<std::string>& bound,
                   std::set<std::string>& out) {
  using K = NJTerm::Kind;
  switch (t.kind()) {
    case K::Var:
      if (!bound.count(t.name())) out.insert(t.name());
      return;
    case K::Lam: {
      bool added = bound.insert(t.name()).second;
      free_vars_rec(*t.child(0), bound, out);
      if (added) bound.erase(t.name());
      return;
    }
    case K::Case: {
      free_vars_rec(*t.child(0), bound, out);
      bool la = bound.insert(t.left_binder()).second;
      free_vars_rec(*t.child(1), bound, out);
      if (la) bound.erase(t.left_binder());
      bool ra = bound.insert(t.right_binder()).second;
      free_vars_rec(*t.child(2), bound, out);
      if (ra) bound.erase(t.right_binder());
      return;
    }
    default:
      for (std::size_t i = 0; i < t.arity(); i++) {
        free_vars_rec(*t.child(i), bound, out);
      }
  }
}
}  // namespace

std::set<std::string> nj_free_vars(const NJTerm& t) {
  std::set<std::string> bound, out;
  free_vars_rec(t, bound, out);
  return out;
}

NJTermPtr nj_substitute(const NJTermPtr& t, const std::string& var,
                        const NJTermPtr& val) {
  using K = NJTerm::Kind;
  switch (t->kind()) {
    case K::Var:
      return t->name() == var ? val : t;
    case K::Pair:
      return NJTerm::pair(nj_substitute(t->child(0), var, val),
                          nj_substitute(t->child(1), var, val));
    case K::Fst:
      return NJTerm::fst(nj_substitute(t->child(0), var, val));
    case K::Snd:
      return NJTerm::snd(nj_substitute(t->child(0), var, val));
    case K::App:
      return NJTerm::app(nj_substitute(t->child(0), var, val),
                         nj_substitute(t->child(1), var, val));
    case K::Inl:
      return NJTerm::inl(nj_substitute(t->child(0), var, val), t->ann());
    case K::Inr:
      return NJTerm::inr(nj_substitute(t->child(0), var, val), t->ann());
    case K::Abort:
      return NJTerm::abort(nj_substitute(t->child(0), var, val), t->ann());
    case K::Lam: {
      if (t->name() == var) return t;  // shadowed
      std::string binder = t->name();
      NJTermPtr body = t->child(0);
      auto val_frees = nj_free_vars(*val);
      if (val_frees.count(binder)) {
        auto used = val_frees;
        auto bf = nj_free_vars(*body);
        used.insert(bf.begin(), bf.end());
        used.insert(var);
        std::string nb = fresh_name(binder, used);
        body = nj_substitute(body, binder, NJTerm::var(nb));
        binder = nb;
      }
      return NJTerm::lam(binder, t->ann(), nj_substitute(body, var, val));
    }
    case K::Case: {
      NJTermPtr scrut = nj_substitute(t->child(0), var, val);
      auto rename_branch = [&](std::string binder, NJTermPtr body)
          -> std::pair<std::string, NJTermPtr> {
        if (binder == var) return {binder, body};  // shadowed
        auto val_frees = nj_free_vars(*val);
        if (val_frees.count(binder)) {
          auto used = val_frees;
          auto bf = nj_free_vars(*body);
          used.insert(bf.begin(), bf.end());
          used.insert(var);
          std::string nb = fresh_name(binder, used);
          body = nj_substitute(body, binder, NJTerm::var(nb));
          binder = nb;
        }
        return {binder, nj_substitute(body, var, val)};
      };
      auto [lv, l] = rename_branch(t->left_binder(), t->child(1));
      auto [rv, r] = rename_branch(t->right_binder(), t->child(2));
      return NJTerm::case_of(scrut, lv, l, rv, r);
    }
  }
  return t;
}

namespace {

bool is_intro_for(const NJTerm& t, NJTerm::Kind elim) {
  using K = NJTerm::Kind;
  switch (elim) {
    case K::Fst:
    case K::Snd:
      return t.kind() == K::Pair;
    case K::App:
      return t.kind() == K::Lam;
    case K::Case:
      return t.kind() == K::Inl || t.kind() == K::Inr;
    default:
      return false;
  }
}

}  // namespace

NJTermPtr normalize(const NJTermPtr& t) {
  using K = NJTerm::Kind;
  switch (t->kind()) {
    case K::Var:
      return t;
    case K::Pair:
      return NJTerm::pair(normalize(t->child(0)), normalize(t->child(1)));
    case K::Lam:
      return NJTerm::lam(t->name(), t->ann(), normalize(t->child(0)));
    case K::Inl:
      return NJTerm::inl(normalize(t->child(0)), t->ann());
    case K::Inr:
      return NJTerm::inr(normalize(t->child(0)), t->ann());
    case K::Abort:
      return NJTerm::abort(normalize(t->child(0)), t->ann());
    case K::Fst: {
      NJTermPtr s = normalize(t->child(0));
      if (s->kind() == K::Pair) return s->child(0);
      return NJTerm::fst(s);
    }
    case K::Snd: {
      NJTermPtr s = normalize(t->child(0));
      if (s->kind() == K::Pair) return s->child(1);
      return NJTerm::snd(s);
    }
    case K::App: {
      NJTermPtr f = normalize(t->child(0));
      NJTermPtr a = normalize(t->child(1));
      if (f->kind() == K::Lam) {
        return normalize(nj_substitute(f->child(0), f->name(), a));
      }
      return NJTerm::app(f, a);
    }
    case K::Case: {
      NJTermPtr s = normalize(t->child(0));
      if (s->kind() == K::Inl) {
        return normalize(nj_substitute(t->child(1), t->left_binder(), s->child(0)));
      }
      if (s->kind() == K::Inr) {
        return normalize(nj_substitute(t->child(2), t->right_binder(), s->child(0)));
      }
      return NJTerm::case_of(s, t->left_binder(), normalize(t->child(1)),
                             t->right_binder(), normalize(t->child(2)));
    }
  }
  return t;
}

bool has_detour(const NJTerm& t) {
  using K = NJTerm::Kind;
  switch (t.kind()) {
    case K::Fst:
    case K::Snd:
    case K::App:
    case K::Case:
      if (is_intro_for(*t.child(0), t.kind())) return true;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < t.arity(); i++) {
    if (has_detour(*t.child(i))) return true;
  }
  return false;
}

std::string render_nj(const NJTerm& t) {
  using K = NJTerm::Kind;
  switch (t.kind()) {
    case K::Var:
      return t.name();
    case K::Pair:
      return "<" + render_nj(*t.child(0)) + ", " + render_nj(*t.child(1)) + ">";
    case K::Fst:
      return "fst(" + render_nj(*t.child(0)) + ")";
    case K::Snd:
      return "snd(" + render_nj(*t.child(0)) + ")";
    case K::Lam:
      return "\\" + t.name() + ":" + render_formula(t.ann()) + ". " +
             render_nj(*t.child(0));
    case K::App:
      return "(" + render_nj(*t.child(0)) + ") (" + render_nj(*t.child(1)) + ")";
    case K::Inl:
      return "inl(" + render_nj(*t.child(0)) + ")";
    case K::Inr:
      return "inr(" + render_nj(*t.child(0)) + ")";
    case K::Case:
      return "case " + render_nj(*t.child(0)) + " of inl " + t.left_binder() + ". " +
             render_nj(*t.child(1)) + " | inr " + t.right_binder() + ". " +
             render_nj(*t.child(2));
    case K::Abort:
      return "abort(" + render_nj(*t.child(0)) + ")";
  }
  return "?";
}

}  // namespace ibes
