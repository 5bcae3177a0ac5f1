#include "ibes/decide.hpp"

#include <algorithm>
#include <cstdint>

namespace ibes {

namespace {

using K = Formula::Kind;

struct ProverState {
  int fresh = 0;
  std::string fresh_var(const char* stem) {
    return std::string(stem) + std::to_string(++fresh);
  }
};

std::optional<NJTermPtr> search(ProverState& st, NJContext ctx, const Formula& goal);

// Γ, x:A∧B => G  reduces to  Γ, y:A, z:B => G  with y := fst x, z := snd x.
std::optional<NJTermPtr> left_conj(ProverState& st, NJContext ctx, std::size_t i,
                                   const Formula& goal) {
  Formula a = ctx[i].second.left(), b = ctx[i].second.right();
  NJTermPtr x = NJTerm::var(ctx[i].first);
  std::string y = st.fresh_var("c"), z = st.fresh_var("c");
  ctx.erase(ctx.begin() + static_cast<std::ptrdiff_t>(i));
  ctx.emplace_back(y, a);
  ctx.emplace_back(z, b);
  auto t = search(st, std::move(ctx), goal);
  if (!t) return std::nullopt;
  NJTermPtr r = nj_substitute(*t, y, NJTerm::fst(x));
  return nj_substitute(r, z, NJTerm::snd(x));
}

std::optional<NJTermPtr> left_disj(ProverState& st, NJContext ctx, std::size_t i,
                                   const Formula& goal) {
  Formula a = ctx[i].second.left(), b = ctx[i].second.right();
  std::string xname = ctx[i].first;
  ctx.erase(ctx.begin() + static_cast<std::ptrdiff_t>(i));
  std::string y = st.fresh_var("d"), z = st.fresh_var("d");
  NJContext lctx = ctx;
  lctx.emplace_back(y, a);
  auto l = search(st, std::move(lctx), goal);
  if (!l) return std::nullopt;
  NJContext rctx = ctx;
  rctx.emplace_back(z, b);
  auto r = search(st, std::move(rctx), goal);
  if (!r) return std::nullopt;
  return NJTerm::case_of(NJTerm::var(xname), y, *l, z, *r);
}

std::optional<NJTermPtr> search(ProverState& st, NJContext ctx, const Formula& goal) {
  // explosion from a bot hypothesis
  for (const auto& [name, f] : ctx) {
    if (f.is_bot()) return NJTerm::abort(NJTerm::var(name), goal);
  }
  // hypothesis matching the goal exactly
  for (const auto& [name, f] : ctx) {
    if (f == goal) return NJTerm::var(name);
  }

  // invertible left rules
  for (std::size_t i = 0; i < ctx.size(); i++) {
    const Formula& f = ctx[i].second;
    if (f.kind() == K::Conj) return left_conj(st, std::move(ctx), i, goal);
    if (f.kind() == K::Disj) return left_disj(st, std::move(ctx), i, goal);
    if (f.kind() != K::Impl) continue;
    Formula d = f.left(), e = f.right();
    NJTermPtr x = NJTerm::var(ctx[i].first);
    switch (d.kind()) {
      case K::Bot: {
        // bot -> E is vacuous
        ctx.erase(ctx.begin() + static_cast<std::ptrdiff_t>(i));
        return search(st, std::move(ctx), goal);
      }
      case K::Atom: {
        // needs the atom at hand; otherwise left for the choice phase (it
        // may become available after more decomposition, handled because we
        // re-scan on every recursion)
        const auto w =
            std::find_if(ctx.begin(), ctx.end(),
                         [&](const auto& h) { return h.second == d; });
        if (w == ctx.end()) continue;
        NJTermPtr witness = NJTerm::var(w->first);
        std::string y = st.fresh_var("m");
        ctx.erase(ctx.begin() + static_cast<std::ptrdiff_t>(i));
        ctx.emplace_back(y, e);
        auto t = search(st, std::move(ctx), goal);
        if (!t) return std::nullopt;
        return nj_substitute(*t, y, NJTerm::app(x, witness));
      }
      case K::Conj: {
        // (A&B)->E  ~>  A->(B->E)
        Formula a = d.left(), b = d.right();
        std::string y = st.fresh_var("k");
        ctx.erase(ctx.begin() + static_cast<std::ptrdiff_t>(i));
        ctx.emplace_back(y, Formula::impl(a, Formula::impl(b, e)));
        auto t = search(st, std::move(ctx), goal);
        if (!t) return std::nullopt;
        std::string va = st.fresh_var("a"), vb = st.fresh_var("a");
        NJTermPtr curried = NJTerm::lam(
            va, a,
            NJTerm::lam(vb, b,
                        NJTerm::app(x, NJTerm::pair(NJTerm::var(va), NJTerm::var(vb)))));
        return nj_substitute(*t, y, curried);
      }
      case K::Disj: {
        // (A|B)->E  ~>  A->E, B->E
        Formula a = d.left(), b = d.right();
        std::string y = st.fresh_var("k"), z = st.fresh_var("k");
        ctx.erase(ctx.begin() + static_cast<std::ptrdiff_t>(i));
        ctx.emplace_back(y, Formula::impl(a, e));
        ctx.emplace_back(z, Formula::impl(b, e));
        auto t = search(st, std::move(ctx), goal);
        if (!t) return std::nullopt;
        std::string va = st.fresh_var("a"), vb = st.fresh_var("a");
        NJTermPtr via_l =
            NJTerm::lam(va, a, NJTerm::app(x, NJTerm::inl(NJTerm::var(va), b)));
        NJTermPtr via_r =
            NJTerm::lam(vb, b, NJTerm::app(x, NJTerm::inr(NJTerm::var(vb), a)));
        NJTermPtr r = nj_substitute(*t, y, via_l);
        return nj_substitute(r, z, via_r);
      }
      case K::Impl:
        break;  // choice phase
    }
  }

  // invertible right rules
  if (goal.kind() == K::Conj) {
    auto a = search(st, ctx, goal.left());
    if (!a) return std::nullopt;
    auto b = search(st, ctx, goal.right());
    if (!b) return std::nullopt;
    return NJTerm::pair(*a, *b);
  }
  if (goal.kind() == K::Impl) {
    std::string v = st.fresh_var("h");
    NJContext extended = ctx;
    extended.emplace_back(v, goal.left());
    auto b = search(st, std::move(extended), goal.right());
    if (!b) return std::nullopt;
    return NJTerm::lam(v, goal.left(), *b);
  }

  // choice phase: goal is an atom, bot, or a disjunction; the context holds
  // only atoms, (D1->D2)->E, and p->B with p unavailable
  if (goal.kind() == K::Disj) {
    if (auto l = search(st, ctx, goal.left())) {
      return NJTerm::inl(*l, goal.right());
    }
    if (auto r = search(st, ctx, goal.right())) {
      return NJTerm::inr(*r, goal.left());
    }
  }
  for (std::size_t i = 0; i < ctx.size(); i++) {
    const Formula& f = ctx[i].second;
    if (f.kind() != K::Impl || f.left().kind() != K::Impl) continue;
    Formula d1 = f.left().left(), d2 = f.left().right(), e = f.right();
    NJTermPtr x = NJTerm::var(ctx[i].first);
    NJContext rest = ctx;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
    // premise 1: rest, D2->E => D1->D2
    std::string y = st.fresh_var("j");
    NJContext first = rest;
    first.emplace_back(y, Formula::impl(d2, e));
    auto t1 = search(st, std::move(first), f.left());
    if (!t1) continue;
    // premise 2: rest, E => goal
    std::string z = st.fresh_var("j");
    NJContext second = rest;
    second.emplace_back(z, e);
    auto t2 = search(st, std::move(second), goal);
    if (!t2) continue;
    std::string vb = st.fresh_var("a"), va = st.fresh_var("a");
    NJTermPtr d2e = NJTerm::lam(
        vb, d2, NJTerm::app(x, NJTerm::lam(va, d1, NJTerm::var(vb))));
    NJTermPtr g = nj_substitute(*t1, y, d2e);
    NJTermPtr ee = NJTerm::app(x, g);
    return nj_substitute(*t2, z, ee);
  }
  return std::nullopt;
}

}  // namespace

std::optional<NJTermPtr> prove_nj(const NJContext& ctx, const Formula& phi) {
  ProverState st;
  return search(st, ctx, phi);
}

namespace {

// Prime theories over the subformula closure: subsets closed under
// derivability within the closure, with the disjunction property and without
// bot. Cheap syntactic filters run before the prover-backed closure check.
std::vector<std::uint32_t> prime_theories(const std::vector<Formula>& delta) {
  const int n = static_cast<int>(delta.size());
  std::vector<std::uint32_t> out;
  const std::uint32_t total = 1u << n;

  auto idx_of = [&](const Formula& f) -> int {
    for (int i = 0; i < n; i++) {
      if (delta[static_cast<std::size_t>(i)] == f) return i;
    }
    return -1;
  };

  for (std::uint32_t mask = 0; mask < total; mask++) {
    bool ok = true;
    for (int i = 0; i < n && ok; i++) {
      const Formula& f = delta[static_cast<std::size_t>(i)];
      bool in = mask & (1u << i);
      switch (f.kind()) {
        case K::Bot:
          if (in) ok = false;
          break;
        case K::Conj: {
          int l = idx_of(f.left()), r = idx_of(f.right());
          bool both = (mask & (1u << l)) && (mask & (1u << r));
          if (in != both) ok = false;
          break;
        }
        case K::Disj: {
          int l = idx_of(f.left()), r = idx_of(f.right());
          bool either = (mask & (1u << l)) || (mask & (1u << r));
          if (in != either) ok = false;  // primality one way, closure the other
          break;
        }
        case K::Impl: {
          int l = idx_of(f.left()), r = idx_of(f.right());
          if (in && (mask & (1u << l)) && !(mask & (1u << r))) ok = false;
          if (!in && (mask & (1u << r))) ok = false;  // T |- B gives T |- A->B
          break;
        }
        default:
          break;
      }
    }
    if (!ok) continue;
    // prover-backed closure: mask = { d in delta : T |- d }
    NJContext ctx;
    for (int i = 0; i < n; i++) {
      if (mask & (1u << i)) {
        ctx.emplace_back("t" + std::to_string(i), delta[static_cast<std::size_t>(i)]);
      }
    }
    for (int i = 0; i < n && ok; i++) {
      bool provable = prove_nj(ctx, delta[static_cast<std::size_t>(i)]).has_value();
      if (provable != static_cast<bool>(mask & (1u << i))) ok = false;
    }
    if (ok) out.push_back(mask);
  }
  return out;
}

KripkeModel model_from_theories(const std::vector<Formula>& delta,
                                const std::vector<std::uint32_t>& theories,
                                const std::vector<Atom>& atoms) {
  const int m = static_cast<int>(theories.size());
  std::vector<std::string> labels;
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < m; i++) {
    labels.push_back("w" + std::to_string(i));
    for (int j = 0; j < m; j++) {
      if ((theories[static_cast<std::size_t>(i)] &
           ~theories[static_cast<std::size_t>(j)]) == 0) {
        pairs.emplace_back(i, j);  // T_i subseteq T_j
      }
    }
  }
  std::map<Atom, std::vector<bool>> val;
  for (const auto& a : atoms) {
    Formula fa = Formula::atom(a);
    int ai = -1;
    for (int i = 0; i < static_cast<int>(delta.size()); i++) {
      if (delta[static_cast<std::size_t>(i)] == fa) ai = i;
    }
    std::vector<bool> col(static_cast<std::size_t>(m), false);
    if (ai >= 0) {
      for (int i = 0; i < m; i++) {
        col[static_cast<std::size_t>(i)] =
            theories[static_cast<std::size_t>(i)] & (1u << ai);
      }
    }
    val[a] = std::move(col);
  }
  return KripkeModel(Poset(std::move(labels), std::move(pairs)), std::move(val));
}

bool refutes(const KripkeModel& model, int world, const FormulaSet& gamma,
             const Formula& phi) {
  for (const auto& g : gamma) {
    if (!kripke_eval(model, world, g)) return false;
  }
  return !kripke_eval(model, world, phi);
}

}  // namespace

Decision decide(const FormulaSet& gamma, const Formula& phi, const DecideOptions& opts) {
  Decision d;

  NJContext ctx;
  int i = 0;
  for (const auto& g : gamma) {
    ctx.emplace_back("g" + std::to_string(++i), g);
  }
  if (auto term = prove_nj(ctx, phi)) {
    d.derivable = true;
    d.term = *term;
    d.term_context = std::move(ctx);
    return d;
  }

  // countermodel over the subformula closure
  FormulaSet closure = subformulas(gamma.unioned(subformulas(phi)));
  std::vector<Formula> delta = closure.items();
  if (delta.size() > 20) {
    throw CountermodelBoundError("subformula closure too large for countermodel search");
  }
  std::vector<Atom> atoms = atoms_of(closure);
  std::vector<std::uint32_t> theories = prime_theories(delta);

  // refuting prime theory: contains gamma, omits phi
  std::uint32_t gmask = 0, pmask = 0;
  for (int k = 0; k < static_cast<int>(delta.size()); k++) {
    if (gamma.contains(delta[static_cast<std::size_t>(k)])) gmask |= (1u << k);
    if (delta[static_cast<std::size_t>(k)] == phi) pmask |= (1u << k);
  }
  int root = -1;
  for (int k = 0; k < static_cast<int>(theories.size()); k++) {
    std::uint32_t t = theories[static_cast<std::size_t>(k)];
    if ((gmask & ~t) == 0 && (t & pmask) == 0) {
      root = k;
      break;
    }
  }
  if (root < 0) {
    throw CountermodelBoundError("no refuting prime theory found");
  }

  // generated submodel above the root
  std::vector<std::uint32_t> cone;
  for (std::uint32_t t : theories) {
    if ((theories[static_cast<std::size_t>(root)] & ~t) == 0) cone.push_back(t);
  }
  std::sort(cone.begin(), cone.end());
  KripkeModel model = model_from_theories(delta, cone, atoms);
  int world = -1;
  for (int k = 0; k < static_cast<int>(cone.size()); k++) {
    if (cone[static_cast<std::size_t>(k)] == theories[static_cast<std::size_t>(root)]) {
      world = k;
    }
  }
  if (!refutes(model, world, gamma, phi)) {
    throw CountermodelBoundError("canonical model failed to refute the sequent");
  }

  // greedy minimization: drop worlds while the refutation survives
  bool shrunk = true;
  while (shrunk) {
    shrunk = false;
    for (int drop = static_cast<int>(cone.size()) - 1; drop >= 0; drop--) {
      if (cone[static_cast<std::size_t>(drop)] ==
          cone[static_cast<std::size_t>(world)]) {
        continue;
      }
      std::vector<std::uint32_t> reduced = cone;
      reduced.erase(reduced.begin() + drop);
      KripkeModel candidate = model_from_theories(delta, reduced, atoms);
      int rw = world > drop ? world - 1 : world;
      if (refutes(candidate, rw, gamma, phi)) {
        cone = std::move(reduced);
        world = rw;
        model = std::move(candidate);
        shrunk = true;
        break;
      }
    }
  }

  if (static_cast<int>(cone.size()) > opts.max_countermodel_worlds) {
    throw CountermodelBoundError("no countermodel within " +
                                 std::to_string(opts.max_countermodel_worlds) +
                                 " worlds");
  }

  d.derivable = false;
  d.countermodel = std::move(model);
  d.refuting_world = world;
  return d;
}

}  // namespace ibes
