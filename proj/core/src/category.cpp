#include "ibes/category.hpp"

#include <algorithm>
#include <functional>

#include "ibes/errors.hpp"

namespace ibes {

std::string render_world(const World& w) {
  std::string out = render_base(w.base) + " ; (";
  bool first = true;
  for (const auto& [n, a] : w.ctx) {
    if (!first) out += ", ";
    first = false;
    out += n + ":" + a.name;
  }
  out += ")";
  return out;
}

namespace {

std::string morphism_key(int source, int target, const std::vector<DerivTermPtr>& terms) {
  std::string key = std::to_string(source) + ">" + std::to_string(target);
  for (const auto& t : terms) key += "|" + render_term(t);
  return key;
}

std::set<std::string> ctx_names(const VarContext& ctx) {
  std::set<std::string> out;
  for (const auto& [n, a] : ctx) out.insert(n);
  return out;
}

VarContext canonical_ctx_for(const AtomSet& atoms) {
  VarContext ctx;
  int i = 0;
  for (const auto& a : atoms) ctx.emplace_back("x" + std::to_string(++i), a);
  return ctx;
}

}  // namespace

const std::vector<int>& Fragment::hom(int source, int target) const {
  return hom_.at(static_cast<std::size_t>(source)).at(static_cast<std::size_t>(target));
}

int Fragment::compose(int f, int g) const {
  auto it = comp_.find({f, g});
  if (it == comp_.end()) {
    throw std::logic_error("fragment composition table missing a composable pair");
  }
  return it->second;
}

int Fragment::find_world(const World& w) const {
  for (int i = 0; i < static_cast<int>(worlds_.size()); i++) {
    const World& o = worlds_[static_cast<std::size_t>(i)];
    if (o.base == w.base && o.ctx == w.ctx) return i;
  }
  return -1;
}

int Fragment::find_morphism(int source, int target,
                            const std::vector<DerivTermPtr>& terms) const {
  for (int id : hom(source, target)) {
    const auto& m = morphisms_[static_cast<std::size_t>(id)];
    if (m.terms.size() != terms.size()) continue;
    bool eq = true;
    for (std::size_t i = 0; i < terms.size(); i++) {
      if (!term_eq(m.terms[i], terms[i])) {
        eq = false;
        break;
      }
    }
    if (eq) return id;
  }
  return -1;
}

WMorphism compose_morphisms(const Fragment& frag, const WMorphism& f, const WMorphism& g) {
  if (f.target != g.source) {
    throw ConfigError("compose: mismatched endpoints");
  }
  const World& a = frag.worlds()[static_cast<std::size_t>(f.source)];
  const World& b = frag.worlds()[static_cast<std::size_t>(f.target)];
  std::map<std::string, DerivTermPtr> subst;
  for (std::size_t i = 0; i < b.ctx.size(); i++) {
    subst[b.ctx[i].first] = f.terms[i];
  }
  WMorphism out;
  out.source = f.source;
  out.target = g.target;
  const auto avoid = ctx_names(a.ctx);
  for (const auto& t : g.terms) {
    out.terms.push_back(canonicalize_binders(substitute(t, subst), avoid));
  }
  return out;
}

void Fragment::close_and_index(const FragmentConfig& cfg) {
  const int W = static_cast<int>(worlds_.size());
  if (static_cast<std::uint64_t>(W) > cfg.max_worlds) {
    throw CapError("fragment world count " + std::to_string(W) + " exceeds the cap",
                   cfg.max_worlds);
  }

  // depth-bounded morphism enumeration between every admissible world pair
  morphisms_.clear();
  std::map<std::string, int> seen;
  auto add_morphism = [&](WMorphism m) -> int {
    std::string key = morphism_key(m.source, m.target, m.terms);
    auto it = seen.find(key);
    if (it != seen.end()) return it->second;
    if (morphisms_.size() >= cfg.max_morphisms) {
      throw CapError("fragment morphism count exceeds the cap", cfg.max_morphisms);
    }
    int id = static_cast<int>(morphisms_.size());
    morphisms_.push_back(std::move(m));
    seen.emplace(std::move(key), id);
    return id;
  };

  for (int s = 0; s < W; s++) {
    const World& sw = worlds_[static_cast<std::size_t>(s)];
    for (int t = 0; t < W; t++) {
      const World& tw = worlds_[static_cast<std::size_t>(t)];
      if (!tw.base.subset_of(sw.base)) continue;
      std::vector<std::vector<DerivTermPtr>> per_entry;
      bool feasible = true;
      for (const auto& [name, atom] : tw.ctx) {
        auto terms = enumerate_terms(sw.base, sw.ctx, atom, depth_, cfg.max_morphisms);
        if (terms.empty()) {
          feasible = false;
          break;
        }
        per_entry.push_back(std::move(terms));
      }
      if (!feasible) continue;
      std::vector<std::size_t> idx(per_entry.size(), 0);
      while (true) {
        WMorphism m;
        m.source = s;
        m.target = t;
        for (std::size_t i = 0; i < per_entry.size(); i++) {
          m.terms.push_back(per_entry[i][idx[i]]);
        }
        add_morphism(std::move(m));
        std::size_t k = per_entry.size();
        bool done = per_entry.empty();
        while (k > 0) {
          k--;
          if (++idx[k] < per_entry[k].size()) break;
          idx[k] = 0;
          if (k == 0) done = true;
        }
        if (done) break;
      }
    }
  }

  // close under composition; composites beyond the depth are recorded as-is
  bool grew = true;
  while (grew) {
    grew = false;
    const std::size_t m_count = morphisms_.size();
    for (std::size_t f = 0; f < m_count; f++) {
      for (std::size_t g = 0; g < m_count; g++) {
        if (morphisms_[f].target != morphisms_[g].source) continue;
        auto key = std::make_pair(static_cast<int>(f), static_cast<int>(g));
        if (comp_.count(key)) continue;
        WMorphism composite = compose_morphisms(*this, morphisms_[f], morphisms_[g]);
        std::string ck = morphism_key(composite.source, composite.target, composite.terms);
        auto it = seen.find(ck);
        int id;
        if (it != seen.end()) {
          id = it->second;
        } else {
          id = add_morphism(std::move(composite));
          grew = true;
        }
        comp_[key] = id;
      }
    }
  }

  hom_.assign(static_cast<std::size_t>(W),
              std::vector<std::vector<int>>(static_cast<std::size_t>(W)));
  for (int id = 0; id < static_cast<int>(morphisms_.size()); id++) {
    const auto& m = morphisms_[static_cast<std::size_t>(id)];
    hom_[static_cast<std::size_t>(m.source)][static_cast<std::size_t>(m.target)]
        .push_back(id);
  }

  identities_.assign(static_cast<std::size_t>(W), -1);
  for (int w = 0; w < W; w++) {
    std::vector<DerivTermPtr> vars;
    for (const auto& [n, a] : worlds_[static_cast<std::size_t>(w)].ctx) {
      vars.push_back(DerivTerm::var(n));
    }
    int id = find_morphism(w, w, vars);
    if (id < 0) throw std::logic_error("fragment is missing an identity morphism");
    identities_[static_cast<std::size_t>(w)] = id;
  }
}

Fragment build_fragment(const Base& base, const FragmentConfig& cfg) {
  Fragment frag;
  frag.universe_ = cfg.universe;
  frag.depth_ = cfg.depth;
  std::vector<Base> bases = enumerate_extensions(base, cfg.universe, cfg.bounds);

  // contexts: atom subsets up to the cap, canonical variable names
  std::vector<AtomSet> ctxs;
  const int n = cfg.universe.size();
  std::function<void(int, std::vector<Atom>&)> gen = [&](int from, std::vector<Atom>& acc) {
    ctxs.emplace_back(acc);
    if (static_cast<int>(acc.size()) >= cfg.ctx_cap) return;
    for (int i = from; i < n; i++) {
      acc.push_back(cfg.universe.at(i));
      gen(i + 1, acc);
      acc.pop_back();
    }
  };
  std::vector<Atom> acc;
  gen(0, acc);
  std::sort(ctxs.begin(), ctxs.end(), [](const AtomSet& a, const AtomSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });

  for (const auto& b : bases) {
    for (const auto& c : ctxs) {
      frag.worlds_.push_back(World{b, canonical_ctx_for(c)});
    }
  }
  frag.close_and_index(cfg);
  return frag;
}

Fragment fragment_from_worlds(std::vector<World> worlds, const FragmentConfig& cfg) {
  Fragment frag;
  frag.universe_ = cfg.universe;
  frag.depth_ = cfg.depth;
  for (auto& w : worlds) {
    if (frag.find_world(w) >= 0) continue;
    frag.worlds_.push_back(std::move(w));
  }
  frag.close_and_index(cfg);
  return frag;
}

// ---- denotations -------------------------------------------------------

bool element_eq(const Element& a, const Element& b) {
  if (a.index() != b.index()) return false;
  if (std::holds_alternative<DerivTermPtr>(a)) {
    return term_eq(std::get<DerivTermPtr>(a), std::get<DerivTermPtr>(b));
  }
  if (std::holds_alternative<TupleElem>(a)) {
    return std::get<TupleElem>(a) == std::get<TupleElem>(b);
  }
  if (std::holds_alternative<TagElem>(a)) {
    return std::get<TagElem>(a) == std::get<TagElem>(b);
  }
  return std::get<ExpElem>(a) == std::get<ExpElem>(b);
}

int Denot::action(int morphism, int elem) const {
  return actions_.at(static_cast<std::size_t>(morphism)).at(static_cast<std::size_t>(elem));
}

int Denot::index_of(int world, const Element& e) const {
  const auto& tab = table(world);
  for (int i = 0; i < static_cast<int>(tab.size()); i++) {
    if (element_eq(tab[static_cast<std::size_t>(i)], e)) return i;
  }
  return -1;
}

const std::vector<Denot::ExpSlot>& Denot::exp_slots(int world) const {
  return exp_slots_.at(static_cast<std::size_t>(world));
}

int Denot::exp_slot_index(int world, int morphism, int elem) const {
  const auto& idx = exp_index_.at(static_cast<std::size_t>(world));
  auto it = idx.find({morphism, elem});
  if (it == idx.end()) throw std::logic_error("exponential slot lookup failed");
  return it->second;
}

int Denot::exp_apply(int world, int elem, int morphism, int arg) const {
  const ExpElem& e = std::get<ExpElem>(table(world).at(static_cast<std::size_t>(elem)));
  return e.values.at(static_cast<std::size_t>(exp_slot_index(world, morphism, arg)));
}

std::size_t Denot::total_elements() const {
  std::size_t n = 0;
  for (const auto& t : tables_) n += t.size();
  return n;
}

namespace {

// Backtracking enumerator for natural families. Slots carry per-slot value
// domains; a constraint (from, to, m) forces val[to] == act(m, val[from]).
struct FamilySolver {
  struct Constraint {
    int from, to, morphism;
  };
  std::vector<int> dom_size;
  std::vector<Constraint> constraints;
  std::function<int(int, int)> act;  // (morphism, value) -> value
  std::uint64_t max_steps = 1000000;

  // emit returns false to stop the search
  std::uint64_t solve(const std::function<bool(const std::vector<int>&)>& emit) const {
    const int s = static_cast<int>(dom_size.size());
    std::vector<std::vector<Constraint>> into(static_cast<std::size_t>(s));
    std::vector<std::vector<Constraint>> outof(static_cast<std::size_t>(s));
    for (const auto& c : constraints) {
      into[static_cast<std::size_t>(c.to)].push_back(c);
      outof[static_cast<std::size_t>(c.from)].push_back(c);
    }
    std::vector<int> val(static_cast<std::size_t>(s), -1);
    std::uint64_t steps = 0;
    std::uint64_t found = 0;
    bool stop = false;

    std::function<void(int)> rec = [&](int i) {
      if (stop) return;
      if (i == s) {
        found++;
        if (!emit(val)) stop = true;
        return;
      }
      const auto iu = static_cast<std::size_t>(i);
      int forced = -2;  // -2 unknown, -1 conflict
      for (const auto& c : into[iu]) {
        if (val[static_cast<std::size_t>(c.from)] < 0) continue;
        int want = act(c.morphism, val[static_cast<std::size_t>(c.from)]);
        if (forced == -2) {
          forced = want;
        } else if (forced != want) {
          forced = -1;
        }
      }
      if (forced == -1) return;
      int lo = forced >= 0 ? forced : 0;
      int hi = forced >= 0 ? forced + 1 : dom_size[iu];
      for (int v = lo; v < hi; v++) {
        if (++steps > max_steps) {
          throw CapError("natural-family search exceeded the step cap", max_steps);
        }
        bool ok = true;
        for (const auto& c : outof[iu]) {
          if (c.to == i) {
            if (act(c.morphism, v) != v) {
              ok = false;
              break;
            }
            continue;
          }
          if (val[static_cast<std::size_t>(c.to)] >= 0 &&
              act(c.morphism, v) != val[static_cast<std::size_t>(c.to)]) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
        val[iu] = v;
        rec(i + 1);
        val[iu] = -1;
        if (stop) return;
      }
    };
    rec(0);
    return found;
  }
};

}  // namespace

Interpreter::Interpreter(const Fragment& frag, DisjStyle style, InterpCaps caps)
    : frag_(frag), style_(style), caps_(caps) {}

DenotPtr Interpreter::finish_atom(const Atom& a) {
  auto d = std::make_shared<Denot>();
  d->kind_ = DenotKind::Atom;
  d->formula_ = Formula::atom(a);
  const int W = static_cast<int>(frag_.worlds().size());
  std::vector<std::vector<DerivTermPtr>> tabs(static_cast<std::size_t>(W));
  for (int w = 0; w < W; w++) {
    const World& world = frag_.worlds()[static_cast<std::size_t>(w)];
    tabs[static_cast<std::size_t>(w)] =
        enumerate_terms(world.base, world.ctx, a, frag_.depth(), caps_.max_table);
  }
  // close under the substitution action so every action is total
  auto act_term = [&](const DerivTermPtr& t, const WMorphism& m) {
    const World& src = frag_.worlds()[static_cast<std::size_t>(m.source)];
    const World& tgt = frag_.worlds()[static_cast<std::size_t>(m.target)];
    std::map<std::string, DerivTermPtr> subst;
    for (std::size_t i = 0; i < tgt.ctx.size(); i++) subst[tgt.ctx[i].first] = m.terms[i];
    return canonicalize_binders(substitute(t, subst), ctx_names(src.ctx));
  };
  std::vector<std::vector<DerivTermPtr>> closed = tabs;
  for (const auto& m : frag_.morphisms()) {
    for (const auto& t : tabs[static_cast<std::size_t>(m.target)]) {
      closed[static_cast<std::size_t>(m.source)].push_back(act_term(t, m));
    }
  }
  d->tables_.resize(static_cast<std::size_t>(W));
  for (int w = 0; w < W; w++) {
    auto& ts = closed[static_cast<std::size_t>(w)];
    std::sort(ts.begin(), ts.end(), [](const DerivTermPtr& x, const DerivTermPtr& y) {
      return render_term(x) < render_term(y);
    });
    ts.erase(std::unique(ts.begin(), ts.end(),
                         [](const DerivTermPtr& x, const DerivTermPtr& y) {
                           return term_eq(x, y);
                         }),
             ts.end());
    if (ts.size() > caps_.max_table) {
      throw CapError("atom table exceeds the element cap", caps_.max_table);
    }
    auto& tab = d->tables_[static_cast<std::size_t>(w)];
    for (auto& t : ts) tab.emplace_back(std::move(t));
  }
  d->actions_.resize(frag_.morphisms().size());
  for (int mi = 0; mi < static_cast<int>(frag_.morphisms().size()); mi++) {
    const auto& m = frag_.morphisms()[static_cast<std::size_t>(mi)];
    auto& amap = d->actions_[static_cast<std::size_t>(mi)];
    for (const auto& e : d->tables_[static_cast<std::size_t>(m.target)]) {
      DerivTermPtr moved = act_term(std::get<DerivTermPtr>(e), m);
      int idx = d->index_of(m.source, Element{moved});
      if (idx < 0) throw std::logic_error("atom table not closed under the action");
      amap.push_back(idx);
    }
  }
  return d;
}

DenotPtr Interpreter::atom_denot(const Atom& a) {
  auto it = atom_memo_.find(a.name);
  if (it != atom_memo_.end()) return it->second;
  DenotPtr d = finish_atom(a);
  atom_memo_[a.name] = d;
  return d;
}

// product-like table assembly shared by Product and Family
void Interpreter::build_tuple_tables(Denot& d) {
  const int W = static_cast<int>(frag_.worlds().size());
  d.tables_.resize(static_cast<std::size_t>(W));
  for (int w = 0; w < W; w++) {
    std::uint64_t total = 1;
    for (const auto& c : d.children_) {
      total *= c->table(w).size();
      if (total > caps_.max_table) {
        throw CapError("product table exceeds the element cap", caps_.max_table);
      }
    }
    std::vector<int> idx(d.children_.size(), 0);
    auto& tab = d.tables_[static_cast<std::size_t>(w)];
    if (total == 0) continue;
    while (true) {
      tab.push_back(Element{TupleElem{idx}});
      std::size_t k = d.children_.size();
      bool done = d.children_.empty();
      while (k > 0) {
        k--;
        if (++idx[k] < static_cast<int>(d.children_[k]->table(w).size())) break;
        idx[k] = 0;
        if (k == 0) done = true;
      }
      if (done) break;
    }
  }
  d.actions_.resize(frag_.morphisms().size());
  for (int mi = 0; mi < static_cast<int>(frag_.morphisms().size()); mi++) {
    const auto& m = frag_.morphisms()[static_cast<std::size_t>(mi)];
    auto& amap = d.actions_[static_cast<std::size_t>(mi)];
    for (const auto& e : d.tables_[static_cast<std::size_t>(m.target)]) {
      const auto& parts = std::get<TupleElem>(e).parts;
      TupleElem moved;
      for (std::size_t c = 0; c < parts.size(); c++) {
        moved.parts.push_back(d.children_[c]->action(mi, parts[c]));
      }
      int idx2 = d.index_of(m.source, Element{moved});
      if (idx2 < 0) throw std::logic_error("tuple table not closed under the action");
      amap.push_back(idx2);
    }
  }
}

DenotPtr Interpreter::product(std::vector<DenotPtr> children) {
  auto d = std::make_shared<Denot>();
  d->kind_ = DenotKind::Product;
  d->children_ = std::move(children);
  build_tuple_tables(*d);
  return d;
}

DenotPtr Interpreter::unit() { return product({}); }

DenotPtr Interpreter::family(std::vector<DenotPtr> per_atom) {
  auto d = std::make_shared<Denot>();
  d->kind_ = DenotKind::Family;
  d->children_ = std::move(per_atom);
  build_tuple_tables(*d);
  return d;
}

DenotPtr Interpreter::coproduct(DenotPtr l, DenotPtr r) {
  auto d = std::make_shared<Denot>();
  d->kind_ = DenotKind::Coproduct;
  d->children_ = {std::move(l), std::move(r)};
  const int W = static_cast<int>(frag_.worlds().size());
  d->tables_.resize(static_cast<std::size_t>(W));
  for (int w = 0; w < W; w++) {
    auto& tab = d->tables_[static_cast<std::size_t>(w)];
    for (int tag = 0; tag < 2; tag++) {
      const auto& sub = d->children_[static_cast<std::size_t>(tag)]->table(w);
      for (int i = 0; i < static_cast<int>(sub.size()); i++) {
        tab.push_back(Element{TagElem{tag, i}});
      }
    }
    if (tab.size() > caps_.max_table) {
      throw CapError("coproduct table exceeds the element cap", caps_.max_table);
    }
  }
  d->actions_.resize(frag_.morphisms().size());
  for (int mi = 0; mi < static_cast<int>(frag_.morphisms().size()); mi++) {
    const auto& m = frag_.morphisms()[static_cast<std::size_t>(mi)];
    auto& amap = d->actions_[static_cast<std::size_t>(mi)];
    for (const auto& e : d->tables_[static_cast<std::size_t>(m.target)]) {
      const auto& te = std::get<TagElem>(e);
      TagElem moved{te.tag, d->children_[static_cast<std::size_t>(te.tag)]->action(mi, te.value)};
      int idx = d->index_of(m.source, Element{moved});
      if (idx < 0) throw std::logic_error("coproduct table not closed under the action");
      amap.push_back(idx);
    }
  }
  return d;
}

DenotPtr Interpreter::exponential(DenotPtr dom, DenotPtr cod) {
  auto d = std::make_shared<Denot>();
  d->kind_ = DenotKind::Exponential;
  d->children_ = {dom, cod};
  const int W = static_cast<int>(frag_.worlds().size());
  d->tables_.resize(static_cast<std::size_t>(W));
  d->exp_slots_.resize(static_cast<std::size_t>(W));
  d->exp_index_.resize(static_cast<std::size_t>(W));

  for (int w = 0; w < W; w++) {
    auto& slots = d->exp_slots_[static_cast<std::size_t>(w)];
    for (int u = 0; u < W; u++) {
      for (int g : frag_.hom(u, w)) {
        for (int a = 0; a < static_cast<int>(dom->table(u).size()); a++) {
          d->exp_index_[static_cast<std::size_t>(w)][{g, a}] =
              static_cast<int>(slots.size());
          slots.push_back({u, g, a});
        }
      }
    }
    // naturality constraints between slots: (u, g, a) and h: v->u give
    // (v, g.h, dom(h)(a)) with value cod(h)(-)
    FamilySolver solver;
    solver.max_steps = caps_.max_search_steps;
    for (const auto& s : slots) {
      solver.dom_size.push_back(static_cast<int>(cod->table(s.world).size()));
    }
    for (int si = 0; si < static_cast<int>(slots.size()); si++) {
      const auto& s = slots[static_cast<std::size_t>(si)];
      for (int v = 0; v < W; v++) {
        for (int h : frag_.hom(v, s.world)) {
          int composed = frag_.compose(h, s.morphism);  // v -> w
          int moved = dom->action(h, s.elem);
          int ti = d->exp_slot_index(w, composed, moved);
          solver.constraints.push_back({si, ti, h});
        }
      }
    }
    solver.act = [&](int m, int v) { return cod->action(m, v); };
    auto& tab = d->tables_[static_cast<std::size_t>(w)];
    solver.solve([&](const std::vector<int>& vals) {
      tab.push_back(Element{ExpElem{vals}});
      if (tab.size() > caps_.max_table) {
        throw CapError("exponential table exceeds the element cap", caps_.max_table);
      }
      return true;
    });
  }

  d->actions_.resize(frag_.morphisms().size());
  for (int mi = 0; mi < static_cast<int>(frag_.morphisms().size()); mi++) {
    const auto& m = frag_.morphisms()[static_cast<std::size_t>(mi)];
    auto& amap = d->actions_[static_cast<std::size_t>(mi)];
    const auto& src_slots = d->exp_slots_[static_cast<std::size_t>(m.source)];
    for (const auto& e : d->tables_[static_cast<std::size_t>(m.target)]) {
      const auto& ee = std::get<ExpElem>(e);
      ExpElem moved;
      moved.values.reserve(src_slots.size());
      for (const auto& s : src_slots) {
        int composed = frag_.compose(s.morphism, mi);  // v -> target(m)
        int ti = d->exp_slot_index(m.target, composed, s.elem);
        moved.values.push_back(ee.values.at(static_cast<std::size_t>(ti)));
      }
      int idx = d->index_of(m.source, Element{moved});
      if (idx < 0) throw std::logic_error("exponential table not closed under the action");
      amap.push_back(idx);
    }
  }
  return d;
}

DenotPtr Interpreter::sigma(DenotPtr a, DenotPtr b) {
  std::vector<DenotPtr> per_atom;
  for (const auto& p : frag_.universe().atoms()) {
    DenotPtr pp = atom_denot(p);
    per_atom.push_back(exponential(exponential(a, pp), exponential(exponential(b, pp), pp)));
  }
  return family(std::move(per_atom));
}

DenotPtr Interpreter::interp(const Formula& phi) {
  const std::string key = render_formula(phi);
  if (auto it = formula_memo_.find(key); it != formula_memo_.end()) return it->second;
  DenotPtr d;
  switch (phi.kind()) {
    case Formula::Kind::Atom:
      d = atom_denot(phi.atom_ref());
      break;
    case Formula::Kind::Conj:
      d = product({interp(phi.left()), interp(phi.right())});
      break;
    case Formula::Kind::Impl:
      d = exponential(interp(phi.left()), interp(phi.right()));
      break;
    case Formula::Kind::Disj:
      if (style_ == DisjStyle::Coproduct) {
        d = coproduct(interp(phi.left()), interp(phi.right()));
      } else {
        d = sigma(interp(phi.left()), interp(phi.right()));
      }
      break;
    case Formula::Kind::Bot: {
      std::vector<DenotPtr> per_atom;
      for (const auto& p : frag_.universe().atoms()) per_atom.push_back(atom_denot(p));
      d = family(std::move(per_atom));
      break;
    }
  }
  auto mutable_d = std::const_pointer_cast<Denot>(d);
  if (!mutable_d->formula_.has_value()) mutable_d->formula_ = phi;
  formula_memo_[key] = d;
  return d;
}

DenotPtr interp(const Formula& phi, const Fragment& frag, DisjStyle style,
                const InterpCaps& caps) {
  Interpreter in(frag, style, caps);
  return in.interp(phi);
}

DenotPtr interp_coproduct(const Formula& disj, const Fragment& frag,
                          const InterpCaps& caps) {
  if (disj.kind() != Formula::Kind::Disj) {
    throw ConfigError("interp_coproduct expects a disjunction");
  }
  Interpreter in(frag, DisjStyle::Coproduct, caps);
  return in.interp(disj);
}

bool check_functoriality(const Denot& d, const Fragment& frag) {
  const int W = static_cast<int>(frag.worlds().size());
  for (int w = 0; w < W; w++) {
    int id = frag.identity(w);
    for (int e = 0; e < static_cast<int>(d.table(w).size()); e++) {
      if (d.action(id, e) != e) return false;
    }
  }
  for (int f = 0; f < static_cast<int>(frag.morphisms().size()); f++) {
    for (int g = 0; g < static_cast<int>(frag.morphisms().size()); g++) {
      const auto& mf = frag.morphisms()[static_cast<std::size_t>(f)];
      const auto& mg = frag.morphisms()[static_cast<std::size_t>(g)];
      if (mf.target != mg.source) continue;
      int cg = frag.compose(f, g);
      const auto& mtab = d.table(mg.target);
      for (int e = 0; e < static_cast<int>(mtab.size()); e++) {
        if (d.action(cg, e) != d.action(f, d.action(g, e))) return false;
      }
    }
  }
  return true;
}

bool check_functoriality_deep(const Denot& d, const Fragment& frag) {
  if (!check_functoriality(d, frag)) return false;
  for (const auto& c : d.children()) {
    if (!check_functoriality_deep(*c, frag)) return false;
  }
  return true;
}

bool check_naturality(const NatTrans& nt, const Fragment& frag) {
  const int W = static_cast<int>(frag.worlds().size());
  if (static_cast<int>(nt.components.size()) != W) return false;
  for (int w = 0; w < W; w++) {
    if (nt.components[static_cast<std::size_t>(w)].size() !=
        nt.source->table(w).size()) {
      return false;
    }
    for (int v : nt.components[static_cast<std::size_t>(w)]) {
      if (v < 0 || v >= static_cast<int>(nt.target->table(w).size())) return false;
    }
  }
  for (int mi = 0; mi < static_cast<int>(frag.morphisms().size()); mi++) {
    const auto& m = frag.morphisms()[static_cast<std::size_t>(mi)];
    for (int e = 0; e < static_cast<int>(nt.source->table(m.target).size()); e++) {
      int via_target = nt.target->action(
          mi, nt.components[static_cast<std::size_t>(m.target)][static_cast<std::size_t>(e)]);
      int via_source =
          nt.components[static_cast<std::size_t>(m.source)]
                       [static_cast<std::size_t>(nt.source->action(mi, e))];
      if (via_target != via_source) return false;
    }
  }
  return true;
}

namespace {

// slots for a natural transformation search: one per (world, source element)
struct NTSlots {
  std::vector<std::pair<int, int>> slots;
  std::map<std::pair<int, int>, int> index;
};

NTSlots nt_slots(const DenotPtr& source, const Fragment& frag) {
  NTSlots out;
  for (int w = 0; w < static_cast<int>(frag.worlds().size()); w++) {
    for (int e = 0; e < static_cast<int>(source->table(w).size()); e++) {
      out.index[{w, e}] = static_cast<int>(out.slots.size());
      out.slots.emplace_back(w, e);
    }
  }
  return out;
}

FamilySolver nt_solver(const DenotPtr& source, const DenotPtr& target,
                       const Fragment& frag, const NTSlots& sl, std::uint64_t max_steps) {
  FamilySolver solver;
  solver.max_steps = max_steps;
  for (const auto& [w, e] : sl.slots) {
    solver.dom_size.push_back(static_cast<int>(target->table(w).size()));
  }
  for (int si = 0; si < static_cast<int>(sl.slots.size()); si++) {
    auto [w, e] = sl.slots[static_cast<std::size_t>(si)];
    for (int u = 0; u < static_cast<int>(frag.worlds().size()); u++) {
      for (int h : frag.hom(u, w)) {
        int ti = sl.index.at({u, source->action(h, e)});
        solver.constraints.push_back({si, ti, h});
      }
    }
  }
  solver.act = [target](int m, int v) { return target->action(m, v); };
  return solver;
}

NatTrans nt_from_vals(const DenotPtr& source, const DenotPtr& target,
                      const Fragment& frag, const NTSlots& sl,
                      const std::vector<int>& vals) {
  NatTrans nt;
  nt.source = source;
  nt.target = target;
  nt.components.resize(frag.worlds().size());
  for (int w = 0; w < static_cast<int>(frag.worlds().size()); w++) {
    nt.components[static_cast<std::size_t>(w)].resize(source->table(w).size());
  }
  for (int si = 0; si < static_cast<int>(sl.slots.size()); si++) {
    auto [w, e] = sl.slots[static_cast<std::size_t>(si)];
    nt.components[static_cast<std::size_t>(w)][static_cast<std::size_t>(e)] =
        vals[static_cast<std::size_t>(si)];
  }
  return nt;
}

}  // namespace

std::optional<NatTrans> find_nat_trans(const DenotPtr& source, const DenotPtr& target,
                                       const Fragment& frag, const InterpCaps& caps) {
  NTSlots sl = nt_slots(source, frag);
  FamilySolver solver = nt_solver(source, target, frag, sl, caps.max_search_steps);
  std::optional<NatTrans> out;
  solver.solve([&](const std::vector<int>& vals) {
    out = nt_from_vals(source, target, frag, sl, vals);
    return false;
  });
  return out;
}

std::uint64_t count_nat_trans(const DenotPtr& source, const DenotPtr& target,
                              const Fragment& frag, const InterpCaps& caps) {
  NTSlots sl = nt_slots(source, frag);
  FamilySolver solver = nt_solver(source, target, frag, sl, caps.max_search_steps);
  return solver.solve([](const std::vector<int>&) { return true; });
}

bool supports_disjunction_check(Interpreter& in, const DenotPtr& a, const DenotPtr& b,
                                const DenotPtr& c) {
  DenotPtr lhs = in.product({in.sigma(a, b), in.exponential(a, c), in.exponential(b, c)});
  return find_nat_trans(lhs, c, in.fragment(), in.caps()).has_value();
}

// ---- NJ transcription ---------------------------------------------------

namespace {

class Transcriber {
 public:
  Transcriber(Interpreter& in) : in_(in), frag_(in.fragment()) {}

  // per-world maps: context-product element index -> interp(phi) element index
  std::vector<std::vector<int>> go(const NJContext& ctx, const NJTermPtr& t,
                                   const Formula& phi) {
    using K = NJTerm::Kind;
    switch (t->kind()) {
      case K::Var: {
        int pos = -1;
        for (int i = static_cast<int>(ctx.size()) - 1; i >= 0; i--) {
          if (ctx[static_cast<std::size_t>(i)].first == t->name()) {
            pos = i;
            break;
          }
        }
        if (pos < 0) throw std::logic_error("transcription: unbound variable");
        DenotPtr cp = ctx_prod(ctx);
        return map_worlds(cp, [&](int w, int g) {
          return std::get<TupleElem>(cp->table(w)[static_cast<std::size_t>(g)])
              .parts[static_cast<std::size_t>(pos)];
        });
      }
      case K::Pair: {
        Formula a = type_of(ctx, t->child(0)), b = type_of(ctx, t->child(1));
        auto ta = go(ctx, t->child(0), a);
        auto tb = go(ctx, t->child(1), b);
        DenotPtr cp = ctx_prod(ctx);
        DenotPtr target = in_.interp(phi);
        return map_worlds(cp, [&](int w, int g) {
          TupleElem e{{ta[static_cast<std::size_t>(w)][static_cast<std::size_t>(g)],
                       tb[static_cast<std::size_t>(w)][static_cast<std::size_t>(g)]}};
          return must_index(*target, w, Element{e});
        });
      }
      case K::Fst:
      case K::Snd: {
        Formula s = type_of(ctx, t->child(0));
        auto ts = go(ctx, t->child(0), s);
        DenotPtr sd = in_.interp(s);
        DenotPtr cp = ctx_prod(ctx);
        const std::size_t part = t->kind() == K::Fst ? 0 : 1;
        return map_worlds(cp, [&](int w, int g) {
          const auto& e = std::get<TupleElem>(
              sd->table(w)[static_cast<std::size_t>(
                  ts[static_cast<std::size_t>(w)][static_cast<std::size_t>(g)])]);
          return e.parts[part];
        });
      }
      case K::Lam: {
        NJContext ectx = ctx;
        ectx.emplace_back(t->name(), t->ann());
        auto tb = go(ectx, t->child(0), phi.right());
        return curry(ctx, phi, tb);
      }
      case K::App: {
        Formula ft = type_of(ctx, t->child(0));
        auto tf = go(ctx, t->child(0), ft);
        auto ta = go(ctx, t->child(1), ft.left());
        DenotPtr fd = in_.interp(ft);
        DenotPtr cp = ctx_prod(ctx);
        return map_worlds(cp, [&](int w, int g) {
          return fd->exp_apply(
              w, tf[static_cast<std::size_t>(w)][static_cast<std::size_t>(g)],
              frag_.identity(w),
              ta[static_cast<std::size_t>(w)][static_cast<std::size_t>(g)]);
        });
      }
      case K::Inl:
      case K::Inr: {
        const bool left = t->kind() == K::Inl;
        Formula arg_ty = left ? phi.left() : phi.right();
        auto tt = go(ctx, t->child(0), arg_ty);
        DenotPtr cp = ctx_prod(ctx);
        DenotPtr target = in_.interp(phi);
        if (in_.style() == DisjStyle::Coproduct) {
          return map_worlds(cp, [&](int w, int g) {
            TagElem e{left ? 0 : 1,
                      tt[static_cast<std::size_t>(w)][static_cast<std::size_t>(g)]};
            return must_index(*target, w, Element{e});
          });
        }
        return injection_forall(ctx, phi, left, tt);
      }
      case K::Case:
        return eliminate(ctx, t, phi);
      case K::Abort:
        return eliminate(ctx, t, phi);
    }
    throw std::logic_error("transcription: unhandled term");
  }

  DenotPtr ctx_prod(const NJContext& ctx) {
    std::vector<DenotPtr> parts;
    for (const auto& [n, f] : ctx) parts.push_back(in_.interp(f));
    return in_.product(std::move(parts));
  }

 private:
  template <typename F>
  std::vector<std::vector<int>> map_worlds(const DenotPtr& cp, const F& f) {
    std::vector<std::vector<int>> out(frag_.worlds().size());
    for (int w = 0; w < static_cast<int>(frag_.worlds().size()); w++) {
      auto& row = out[static_cast<std::size_t>(w)];
      for (int g = 0; g < static_cast<int>(cp->table(w).size()); g++) {
        row.push_back(f(w, g));
      }
    }
    return out;
  }

  Formula type_of(const NJContext& ctx, const NJTermPtr& t) {
    auto ty = infer_nj(ctx, *t);
    if (!ty) throw std::logic_error("transcription: ill-typed subterm");
    return *ty;
  }

  static int must_index(const Denot& d, int w, const Element& e) {
    int idx = d.index_of(w, e);
    if (idx < 0) {
      throw std::logic_error("transcription: element missing from the enumerated table");
    }
    return idx;
  }

  // extended-context tuple index: transported gamma plus one extra element
  int extend_tuple(const DenotPtr& cp, const DenotPtr& ecp, int morphism, int w_src,
                   int gamma_at_target, int extra) {
    int moved = cp->action(morphism, gamma_at_target);
    TupleElem e = std::get<TupleElem>(
        cp->table(w_src)[static_cast<std::size_t>(moved)]);
    e.parts.push_back(extra);
    return must_index(*ecp, w_src, Element{e});
  }

  // Cur: from components over ctx+A at every world to exponential elements
  std::vector<std::vector<int>> curry(const NJContext& ctx, const Formula& impl_ty,
                                      const std::vector<std::vector<int>>& body) {
    DenotPtr cp = ctx_prod(ctx);
    NJContext ectx = ctx;
    ectx.emplace_back("$cur", impl_ty.left());
    DenotPtr ecp = ctx_prod(ectx);
    DenotPtr target = in_.interp(impl_ty);
    return map_worlds(cp, [&](int w, int g) {
      ExpElem fe;
      for (const auto& s : target->exp_slots(w)) {
        int eg = extend_tuple(cp, ecp, s.morphism, s.world, g, s.elem);
        fe.values.push_back(
            body[static_cast<std::size_t>(s.world)][static_cast<std::size_t>(eg)]);
      }
      return must_index(*target, w, Element{fe});
    });
  }

  // forall-style injection: lambda p. lambda F1. lambda F2. F_side(eta gamma)
  std::vector<std::vector<int>> injection_forall(const NJContext& ctx, const Formula& phi,
                                                 bool left,
                                                 const std::vector<std::vector<int>>& tt) {
    DenotPtr cp = ctx_prod(ctx);
    DenotPtr target = in_.interp(phi);  // family over atoms
    DenotPtr arg_d = in_.interp(left ? phi.left() : phi.right());
    const auto& atoms = frag_.universe().atoms();
    return map_worlds(cp, [&](int w, int g) {
      TupleElem parts;
      for (std::size_t ai = 0; ai < atoms.size(); ai++) {
        DenotPtr dp = target->children()[ai];           // (A->p) -> ((B->p) -> p)
        DenotPtr e1 = dp->children()[0];                // A -> p
        DenotPtr e2 = dp->children()[1];                // (B -> p) -> p
        DenotPtr e1b = e2->children()[0];               // B -> p
        ExpElem alpha;
        for (const auto& s1 : dp->exp_slots(w)) {
          // s1: (u, g1: u -> w, F1)
          ExpElem beta;
          for (const auto& s2 : e2->exp_slots(s1.world)) {
            // s2: (v, h: v -> u, F2)
            int path = frag_.compose(s2.morphism, s1.morphism);  // v -> w
            int moved =
                arg_d->action(path, tt[static_cast<std::size_t>(w)][static_cast<std::size_t>(g)]);
            int value;
            if (left) {
              value = e1->exp_apply(s1.world, s1.elem, s2.morphism, moved);
            } else {
              value = e1b->exp_apply(s2.world, s2.elem, frag_.identity(s2.world), moved);
            }
            beta.values.push_back(value);
          }
          alpha.values.push_back(must_index(*e2, s1.world, Element{beta}));
        }
        parts.parts.push_back(must_index(*dp, w, Element{alpha}));
      }
      return must_index(*target, w, Element{parts});
    });
  }

  // Case and Abort share the induction over the target formula
  std::vector<std::vector<int>> eliminate(const NJContext& ctx, const NJTermPtr& t,
                                          const Formula& chi) {
    using K = NJTerm::Kind;
    const bool is_case = t->kind() == K::Case;
    Formula scrut_ty = type_of(ctx, t->child(0));

    if (is_case && in_.style() == DisjStyle::Coproduct) {
      auto ts = go(ctx, t->child(0), scrut_ty);
      NJContext lctx = ctx, rctx = ctx;
      lctx.emplace_back(t->left_binder(), scrut_ty.left());
      rctx.emplace_back(t->right_binder(), scrut_ty.right());
      auto tl = go(lctx, t->child(1), chi);
      auto tr = go(rctx, t->child(2), chi);
      DenotPtr cp = ctx_prod(ctx);
      DenotPtr sd = in_.interp(scrut_ty);
      DenotPtr lcp = ctx_prod(lctx), rcp = ctx_prod(rctx);
      return map_worlds(cp, [&](int w, int g) {
        const auto& te = std::get<TagElem>(
            sd->table(w)[static_cast<std::size_t>(
                ts[static_cast<std::size_t>(w)][static_cast<std::size_t>(g)])]);
        const DenotPtr& ecp = te.tag == 0 ? lcp : rcp;
        TupleElem base = std::get<TupleElem>(cp->table(w)[static_cast<std::size_t>(g)]);
        base.parts.push_back(te.value);
        int eg = must_index(*ecp, w, Element{base});
        const auto& branch = te.tag == 0 ? tl : tr;
        return branch[static_cast<std::size_t>(w)][static_cast<std::size_t>(eg)];
      });
    }

    switch (chi.kind()) {
      case Formula::Kind::Atom:
      case Formula::Kind::Bot: {
        // componentwise at each atom; Bot targets the whole family
        DenotPtr cp = ctx_prod(ctx);
        DenotPtr target = in_.interp(chi);
        auto ts = go(ctx, t->child(0), scrut_ty);
        DenotPtr sd = in_.interp(scrut_ty);

        std::vector<int> atom_indices;
        if (chi.kind() == Formula::Kind::Atom) {
          int ai = frag_.universe().index_of(chi.atom_ref());
          if (ai < 0) throw UniverseError("transcription atom outside the universe");
          atom_indices.push_back(ai);
        } else {
          for (int ai = 0; ai < frag_.universe().size(); ai++) atom_indices.push_back(ai);
        }

        NJContext lctx = ctx, rctx = ctx;
        DenotPtr lcp, rcp;
        std::vector<std::vector<int>> tl_raw, tr_raw;
        if (is_case) {
          lctx.emplace_back(t->left_binder(), scrut_ty.left());
          rctx.emplace_back(t->right_binder(), scrut_ty.right());
          tl_raw = go(lctx, t->child(1), chi);
          tr_raw = go(rctx, t->child(2), chi);
          lcp = ctx_prod(lctx);
          rcp = ctx_prod(rctx);
        }
        // branch value at one atom: for an atomic chi the transcription
        // itself, for bot the projection of the family element
        auto branch_at = [&](const std::vector<std::vector<int>>& raw, int w, int eg,
                             int ai) -> int {
          int v = raw[static_cast<std::size_t>(w)][static_cast<std::size_t>(eg)];
          if (chi.kind() == Formula::Kind::Atom) return v;
          const auto& tup =
              std::get<TupleElem>(target->table(w)[static_cast<std::size_t>(v)]);
          return tup.parts[static_cast<std::size_t>(ai)];
        };

        return map_worlds(cp, [&](int w, int g) -> int {
          auto value_at_atom = [&](int ai) -> int {
            int d = ts[static_cast<std::size_t>(w)][static_cast<std::size_t>(g)];
            const auto& tup = std::get<TupleElem>(sd->table(w)[static_cast<std::size_t>(d)]);
            if (!is_case) {
              // scrutinee in [[bot]]: project the ai component
              return tup.parts[static_cast<std::size_t>(ai)];
            }
            int alpha = tup.parts[static_cast<std::size_t>(ai)];
            DenotPtr dp = sd->children()[static_cast<std::size_t>(ai)];
            DenotPtr e1 = dp->children()[0];
            DenotPtr e2 = dp->children()[1];
            DenotPtr e1b = e2->children()[0];
            auto cur_branch = [&](const DenotPtr& ecp,
                                  const std::vector<std::vector<int>>& raw,
                                  const DenotPtr& exp_d) -> int {
              ExpElem fe;
              for (const auto& s : exp_d->exp_slots(w)) {
                int eg = extend_tuple(cp, ecp, s.morphism, s.world, g, s.elem);
                fe.values.push_back(branch_at(raw, s.world, eg, ai));
              }
              return must_index(*exp_d, w, Element{fe});
            };
            int f1 = cur_branch(lcp, tl_raw, e1);
            int f2 = cur_branch(rcp, tr_raw, e1b);
            int beta = dp->exp_apply(w, alpha, frag_.identity(w), f1);
            return e2->exp_apply(w, beta, frag_.identity(w), f2);
          };
          if (chi.kind() == Formula::Kind::Atom) {
            return value_at_atom(atom_indices[0]);
          }
          TupleElem parts;
          for (int ai : atom_indices) parts.parts.push_back(value_at_atom(ai));
          return must_index(*target, w, Element{parts});
        });
      }
      case Formula::Kind::Conj: {
        NJTermPtr t1, t2;
        if (is_case) {
          t1 = NJTerm::case_of(t->child(0), t->left_binder(), NJTerm::fst(t->child(1)),
                               t->right_binder(), NJTerm::fst(t->child(2)));
          t2 = NJTerm::case_of(t->child(0), t->left_binder(), NJTerm::snd(t->child(1)),
                               t->right_binder(), NJTerm::snd(t->child(2)));
        } else {
          t1 = NJTerm::abort(t->child(0), chi.left());
          t2 = NJTerm::abort(t->child(0), chi.right());
        }
        auto c1 = go(ctx, t1, chi.left());
        auto c2 = go(ctx, t2, chi.right());
        DenotPtr cp = ctx_prod(ctx);
        DenotPtr target = in_.interp(chi);
        return map_worlds(cp, [&](int w, int g) {
          TupleElem e{{c1[static_cast<std::size_t>(w)][static_cast<std::size_t>(g)],
                       c2[static_cast<std::size_t>(w)][static_cast<std::size_t>(g)]}};
          return must_index(*target, w, Element{e});
        });
      }
      case Formula::Kind::Impl: {
        std::string z = fresh_ctx_var(ctx, t);
        NJContext zctx = ctx;
        zctx.emplace_back(z, chi.left());
        NJTermPtr inner;
        if (is_case) {
          inner = NJTerm::case_of(t->child(0), t->left_binder(),
                                  NJTerm::app(t->child(1), NJTerm::var(z)),
                                  t->right_binder(),
                                  NJTerm::app(t->child(2), NJTerm::var(z)));
        } else {
          inner = NJTerm::abort(t->child(0), chi.right());
        }
        auto body = go(zctx, inner, chi.right());
        return curry(ctx, chi, body);
      }
      case Formula::Kind::Disj: {
        if (in_.style() == DisjStyle::Coproduct) {
          throw std::logic_error("coproduct case handled earlier");
        }
        return eliminate_into_disj(ctx, t, chi);
      }
    }
    throw std::logic_error("transcription: unhandled eliminator target");
  }

  // forall-style disjunction target for Case/Abort: the Cur-mu construction
  std::vector<std::vector<int>> eliminate_into_disj(const NJContext& ctx,
                                                    const NJTermPtr& t,
                                                    const Formula& chi) {
    using K = NJTerm::Kind;
    const bool is_case = t->kind() == K::Case;
    Formula scrut_ty = type_of(ctx, t->child(0));
    DenotPtr cp = ctx_prod(ctx);
    DenotPtr target = in_.interp(chi);  // family over atoms
    DenotPtr chi1 = in_.interp(chi.left());
    DenotPtr chi2 = in_.interp(chi.right());
    auto ts = go(ctx, t->child(0), scrut_ty);
    DenotPtr sd = in_.interp(scrut_ty);

    NJContext lctx = ctx, rctx = ctx;
    std::vector<std::vector<int>> tl, tr;  // branch transcriptions at chi
    DenotPtr lcp, rcp;
    if (is_case) {
      lctx.emplace_back(t->left_binder(), scrut_ty.left());
      rctx.emplace_back(t->right_binder(), scrut_ty.right());
      tl = go(lctx, t->child(1), chi);
      tr = go(rctx, t->child(2), chi);
      lcp = ctx_prod(lctx);
      rcp = ctx_prod(rctx);
    }

    const auto& atoms = frag_.universe().atoms();
    return map_worlds(cp, [&](int w, int g) {
      TupleElem parts;
      for (std::size_t ai = 0; ai < atoms.size(); ai++) {
        DenotPtr dp = target->children()[ai];  // (chi1 -> p) -> ((chi2 -> p) -> p)
        DenotPtr e1 = dp->children()[0];
        DenotPtr e2 = dp->children()[1];
        DenotPtr e1b = e2->children()[0];
        DenotPtr pd = e2->children()[1];
        ExpElem alpha;
        for (const auto& s1 : dp->exp_slots(w)) {
          // s1: (u, g1: u -> w, F1 in (chi1 -> p)(u))
          ExpElem beta;
          for (const auto& s2 : e2->exp_slots(s1.world)) {
            // s2: (v, h: v -> u, F2 in (chi2 -> p)(v))
            int path_vw = frag_.compose(s2.morphism, s1.morphism);  // v -> w
            int gamma_v = cp->action(path_vw, g);
            int v = s2.world;
            int d_v = ts[static_cast<std::size_t>(v)][static_cast<std::size_t>(gamma_v)];
            int value;
            if (!is_case) {
              const auto& tup =
                  std::get<TupleElem>(sd->table(v)[static_cast<std::size_t>(d_v)]);
              value = tup.parts[ai];
            } else {
              const auto& tup =
                  std::get<TupleElem>(sd->table(v)[static_cast<std::size_t>(d_v)]);
              int alpha_v = tup.parts[ai];
              DenotPtr sdp = sd->children()[ai];
              DenotPtr se1 = sdp->children()[0];
              DenotPtr se2 = sdp->children()[1];
              DenotPtr se1b = se2->children()[0];
              int f1_v = mu_cur(cp, lcp, tl, chi, se1, e1, e1b, s1, s2, v, gamma_v,
                                static_cast<int>(ai));
              int f2_v = mu_cur(cp, rcp, tr, chi, se1b, e1, e1b, s1, s2, v, gamma_v,
                                static_cast<int>(ai));
              int beta_v = sdp->exp_apply(v, alpha_v, frag_.identity(v), f1_v);
              value = se2->exp_apply(v, beta_v, frag_.identity(v), f2_v);
            }
            beta.values.push_back(value);
          }
          alpha.values.push_back(must_index(*e2, s1.world, Element{beta}));
        }
        parts.parts.push_back(must_index(*dp, w, Element{alpha}));
      }
      return must_index(*target, w, Element{parts});
    });
  }

  // mu^branch curried at v: (z, k: z -> v, a) |-> branch value at p applied
  // to the transported F1, F2
  int mu_cur(const DenotPtr& cp, const DenotPtr& ecp,
             const std::vector<std::vector<int>>& branch_at_chi, const Formula& chi,
             const DenotPtr& exp_d, const DenotPtr& e1_outer, const DenotPtr& e1b_outer,
             const Denot::ExpSlot& s1, const Denot::ExpSlot& s2, int v, int gamma_v,
             int ai) {
    DenotPtr target = in_.interp(chi);
    DenotPtr dp = target->children()[static_cast<std::size_t>(ai)];
    DenotPtr e2 = dp->children()[1];
    ExpElem fe;
    for (const auto& s3 : exp_d->exp_slots(v)) {
      // s3: (z, k: z -> v, a in branch-domain(z))
      int z = s3.world;
      int gamma_z = cp->action(s3.morphism, gamma_v);
      TupleElem ext = std::get<TupleElem>(cp->table(z)[static_cast<std::size_t>(gamma_z)]);
      ext.parts.push_back(s3.elem);
      int eg = must_index(*ecp, z, Element{ext});
      int chi_val = branch_at_chi[static_cast<std::size_t>(z)][static_cast<std::size_t>(eg)];
      // project at atom ai and apply the transported F1, F2
      const auto& tup = std::get<TupleElem>(
          target->table(z)[static_cast<std::size_t>(chi_val)]);
      int alpha_z = tup.parts[static_cast<std::size_t>(ai)];
      // transports: F1 lives at s1.world along s2.morphism then s3.morphism;
      // F2 lives at v along s3.morphism
      int path_zu = frag_.compose(s3.morphism, s2.morphism);  // z -> u
      int f1_z = e1_outer->action(path_zu, s1.elem);
      int f2_z = e1b_outer->action(s3.morphism, s2.elem);
      int beta_z = dp->exp_apply(z, alpha_z, frag_.identity(z), f1_z);
      fe.values.push_back(e2->exp_apply(z, beta_z, frag_.identity(z), f2_z));
    }
    return must_index(*exp_d, v, Element{fe});
  }

  std::string fresh_ctx_var(const NJContext& ctx, const NJTermPtr& t) {
    std::set<std::string> used;
    for (const auto& [n, f] : ctx) used.insert(n);
    auto fv = nj_free_vars(*t);
    used.insert(fv.begin(), fv.end());
    for (int k = 1;; k++) {
      std::string cand = "$z" + std::to_string(k);
      if (!used.count(cand)) return cand;
    }
  }

  Interpreter& in_;
  const Fragment& frag_;
};

}  // namespace

NatTrans transcribe_nj(Interpreter& in, const NJContext& ctx, const NJTermPtr& term,
                       const Formula& phi) {
  Transcriber tr(in);
  NatTrans nt;
  nt.source = tr.ctx_prod(ctx);
  nt.target = in.interp(phi);
  nt.components = tr.go(ctx, term, phi);
  return nt;
}

// ---- the disjunction experiment ------------------------------------------

namespace {

// replace premise-free applications of `rule` by a marker variable
DerivTermPtr tag_rule_apps(const DerivTermPtr& t, const AtomicRule& rule,
                           const std::string& marker) {
  if (t->is_var()) return t;
  if (t->rule() == rule) return DerivTerm::var(marker);
  std::vector<DerivTerm::Arg> args;
  for (const auto& a : t->args()) {
    args.push_back({a.binders, tag_rule_apps(a.body, rule, marker)});
  }
  return DerivTerm::app(t->rule(), std::move(args));
}

}  // namespace

DisjunctionExperimentReport strong_disjunction_experiment(const Universe& universe,
                                                          const EnumerationBounds& bounds,
                                                          const InterpCaps& caps) {
  DisjunctionExperimentReport report;
  if (universe.size() == 0) {
    throw ConfigError("experiment needs at least one atom");
  }
  const Atom p = universe.at(0);
  const Atom q = universe.at(universe.size() > 1 ? 1 : 0);
  const Atom r = universe.at(universe.size() > 2 ? 2 : (universe.size() > 1 ? 1 : 0));
  report.degenerate = universe.size() < 3;

  Formula src_f = Formula::impl(Formula::atom(p),
                                Formula::disj(Formula::atom(q), Formula::atom(r)));
  Formula tgt_f = Formula::disj(Formula::impl(Formula::atom(p), Formula::atom(q)),
                                Formula::impl(Formula::atom(p), Formula::atom(r)));

  AtomicRule p_implies_q({RulePremise{AtomSet{}, p}}, q);
  AtomicRule axiom_p = AtomicRule::axiom(p);
  Base b0({p_implies_q});
  Base b1 = b0.extended_with(axiom_p);

  std::vector<World> worlds = {
      World{b0, {}},
      World{b1, {}},
      World{b0, {{"x1", p}}},
      World{b1, {{"x1", p}}},
  };
  FragmentConfig fcfg;
  fcfg.universe = universe;
  fcfg.bounds = bounds;
  fcfg.depth = 2;
  fcfg.ctx_cap = 1;
  Fragment frag = fragment_from_worlds(std::move(worlds), fcfg);
  report.fragment_worlds = static_cast<int>(frag.worlds().size());

  Interpreter cop(frag, DisjStyle::Coproduct, caps);
  DenotPtr src = cop.interp(src_f);
  DenotPtr tgt = cop.interp(tgt_f);
  DenotPtr p_d = src->children()[0];
  DenotPtr qr = src->children()[1];

  DerivTermPtr phi_term = DerivTerm::app(axiom_p, {});
  NatTrans nt;
  nt.source = src;
  nt.target = tgt;
  nt.components.resize(frag.worlds().size());
  bool constructed = true;
  std::string note;

  for (int w = 0; w < static_cast<int>(frag.worlds().size()) && constructed; w++) {
    const World& world = frag.worlds()[static_cast<std::size_t>(w)];
    auto& comp = nt.components[static_cast<std::size_t>(w)];
    World cworld{world.base.extended_with(axiom_p), world.ctx};
    int cw = frag.find_world(cworld);
    if (cw < 0 && !src->table(w).empty()) {
      constructed = false;
      note = "extension world missing from the fragment";
      break;
    }
    int iota = -1, phi_idx = -1;
    if (cw >= 0) {
      std::vector<DerivTermPtr> vars;
      for (const auto& [n, a] : world.ctx) vars.push_back(DerivTerm::var(n));
      iota = frag.find_morphism(cw, w, vars);
      phi_idx = p_d->index_of(cw, Element{phi_term});
    }
    for (int fi = 0; fi < static_cast<int>(src->table(w).size()); fi++) {
      if (iota < 0 || phi_idx < 0) {
        constructed = false;
        note = "reverse inclusion or axiom derivation missing";
        break;
      }
      int d = src->exp_apply(w, fi, iota, phi_idx);
      const auto& te = std::get<TagElem>(qr->table(cw)[static_cast<std::size_t>(d)]);
      DenotPtr branch_atom = qr->children()[static_cast<std::size_t>(te.tag)];
      DenotPtr target_exp = tgt->children()[static_cast<std::size_t>(te.tag)];
      DerivTermPtr base_term =
          std::get<DerivTermPtr>(branch_atom->table(cw)[static_cast<std::size_t>(te.value)]);
      DerivTermPtr tagged = tag_rule_apps(base_term, axiom_p, "$psi");

      ExpElem fe;
      bool ok = true;
      for (const auto& s : target_exp->exp_slots(w)) {
        const World& uw = frag.worlds()[static_cast<std::size_t>(s.world)];
        const WMorphism& gm = frag.morphisms()[static_cast<std::size_t>(s.morphism)];
        DerivTermPtr psi =
            std::get<DerivTermPtr>(p_d->table(s.world)[static_cast<std::size_t>(s.elem)]);
        std::map<std::string, DerivTermPtr> subst;
        for (std::size_t i = 0; i < world.ctx.size(); i++) {
          subst[world.ctx[i].first] = gm.terms[i];
        }
        subst["$psi"] = psi;
        DerivTermPtr moved =
            canonicalize_binders(substitute(tagged, subst), ctx_names(uw.ctx));
        int idx = branch_atom->index_of(s.world, Element{moved});
        if (idx < 0) {
          ok = false;
          break;
        }
        fe.values.push_back(idx);
      }
      if (!ok) {
        constructed = false;
        note = "transformed derivation missing from the table";
        break;
      }
      int gi = target_exp->index_of(w, Element{fe});
      if (gi < 0) {
        constructed = false;
        note = "constructed component is not in the exponential table";
        break;
      }
      int ti = tgt->index_of(w, Element{TagElem{te.tag, gi}});
      if (ti < 0) {
        constructed = false;
        note = "tagged element missing from the coproduct table";
        break;
      }
      comp.push_back(ti);
    }
  }

  report.coproduct_constructed = constructed;
  report.note = note;
  if (constructed) {
    report.coproduct_natural = check_naturality(nt, frag);
  }

  try {
    Interpreter fa(frag, DisjStyle::Forall, caps);
    report.forall_nat_count =
        count_nat_trans(fa.interp(src_f), fa.interp(tgt_f), frag, caps);
  } catch (const CapError& e) {
    report.note += std::string(report.note.empty() ? "" : "; ") +
                   "forall-style search refused: " + e.what();
  }
  return report;
}

}  // namespace ibes
