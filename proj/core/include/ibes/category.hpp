#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "ibes/derivation.hpp"
#include "ibes/extensions.hpp"
#include "ibes/formula.hpp"
#include "ibes/nj.hpp"
#include "ibes/rules.hpp"

namespace ibes {

// Object of the category W: a base paired with an atomic context.
struct World {
  Base base;
  VarContext ctx;
};
std::string render_world(const World& w);

// Morphism (B,(X:P)) -> (C,(Y:Q)): needs C subseteq B and carries one
// derivation X:P |-_B term_i : q_i per target context entry.
struct WMorphism {
  int source = -1;
  int target = -1;
  std::vector<DerivTermPtr> terms;
};

struct FragmentConfig {
  Universe universe;
  EnumerationBounds bounds;
  int depth = 1;    // derivation-depth bound for generated morphisms
  int ctx_cap = 1;  // max context size for generated worlds
  std::uint64_t max_worlds = 512;
  std::uint64_t max_morphisms = 20000;
};

// Finite closed collection of worlds and morphisms: identities present,
// composites of listed morphisms listed (recorded explicitly when they
// exceed the generation depth).
class Fragment {
 public:
  const std::vector<World>& worlds() const { return worlds_; }
  const std::vector<WMorphism>& morphisms() const { return morphisms_; }
  const Universe& universe() const { return universe_; }
  int depth() const { return depth_; }

  const std::vector<int>& hom(int source, int target) const;
  int identity(int world) const { return identities_.at(static_cast<std::size_t>(world)); }
  // composite id of f: a->b then g: b->c
  int compose(int f, int g) const;
  int find_world(const World& w) const;  // -1 when absent
  int find_morphism(int source, int target, const std::vector<DerivTermPtr>& terms) const;

 private:
  friend Fragment build_fragment(const Base& base, const FragmentConfig& cfg);
  friend Fragment fragment_from_worlds(std::vector<World> worlds,
                                       const FragmentConfig& cfg);
  void close_and_index(const FragmentConfig& cfg);

  Universe universe_;
  int depth_ = 1;
  std::vector<World> worlds_;
  std::vector<WMorphism> morphisms_;
  std::vector<std::vector<std::vector<int>>> hom_;
  std::vector<int> identities_;
  std::map<std::pair<int, int>, int> comp_;
};

// Worlds are every (C, ctx) with base subseteq C within the bounds and
// |ctx| <= ctx_cap; morphisms every derivation tuple up to the depth.
Fragment build_fragment(const Base& base, const FragmentConfig& cfg);

// Same closure over a hand-picked world collection.
Fragment fragment_from_worlds(std::vector<World> worlds, const FragmentConfig& cfg);

// Substitution composite; throws ConfigError on mismatched endpoints.
WMorphism compose_morphisms(const Fragment& frag, const WMorphism& f, const WMorphism& g);

// ---- denotations -------------------------------------------------------

struct TupleElem {
  std::vector<int> parts;
  bool operator==(const TupleElem&) const = default;
};
struct TagElem {
  int tag = 0;
  int value = 0;
  bool operator==(const TagElem&) const = default;
};
// Value table of a natural family, flattened over the world's slot layout.
struct ExpElem {
  std::vector<int> values;
  bool operator==(const ExpElem&) const = default;
};
using Element = std::variant<DerivTermPtr, TupleElem, TagElem, ExpElem>;
bool element_eq(const Element& a, const Element& b);

enum class DenotKind { Atom, Product, Exponential, Family, Coproduct };

class Denot;
using DenotPtr = std::shared_ptr<const Denot>;

// Set-valued presheaf on a fragment, tabulated: one element list per world
// plus the (contravariant) action of every fragment morphism.
class Denot {
 public:
  struct ExpSlot {
    int world;     // u
    int morphism;  // g : u -> w
    int elem;      // index into domain table at u
    auto operator<=>(const ExpSlot&) const = default;
  };

  DenotKind kind() const { return kind_; }
  const std::optional<Formula>& formula() const { return formula_; }
  const std::vector<DenotPtr>& children() const { return children_; }

  const std::vector<Element>& table(int world) const {
    return tables_.at(static_cast<std::size_t>(world));
  }
  // index (into table(source(m))) of the image of table(target(m))[elem]
  int action(int morphism, int elem) const;
  int index_of(int world, const Element& e) const;  // -1 when absent

  // Exponential layout at a world (kind Exponential only).
  const std::vector<ExpSlot>& exp_slots(int world) const;
  int exp_slot_index(int world, int morphism, int elem) const;
  // Apply an exponential element: value at (morphism g : u -> w, arg at u).
  int exp_apply(int world, int elem, int morphism, int arg) const;

  std::size_t total_elements() const;

 private:
  friend class Interpreter;
  DenotKind kind_ = DenotKind::Atom;
  std::optional<Formula> formula_;
  std::vector<DenotPtr> children_;
  std::vector<std::vector<Element>> tables_;
  std::vector<std::vector<int>> actions_;              // per morphism
  std::vector<std::vector<ExpSlot>> exp_slots_;        // per world
  std::vector<std::map<std::pair<int, int>, int>> exp_index_;  // (morphism, elem) -> slot
};

struct InterpCaps {
  std::uint64_t max_table = 4096;            // elements per world per denotation
  std::uint64_t max_search_steps = 1000000;  // candidate assignments per enumeration
};

enum class DisjStyle { Forall, Coproduct };

// Builds and memoizes denotations over one fragment. Forall interprets
// disjunction through the quantification over atoms and bot as the family of
// all atom denotations; Coproduct uses tagged pointwise unions for
// disjunction instead.
class Interpreter {
 public:
  Interpreter(const Fragment& frag, DisjStyle style, InterpCaps caps = {});

  DenotPtr interp(const Formula& phi);

  DenotPtr atom_denot(const Atom& a);
  DenotPtr unit();
  DenotPtr product(std::vector<DenotPtr> children);
  DenotPtr exponential(DenotPtr dom, DenotPtr cod);
  DenotPtr family(std::vector<DenotPtr> per_atom);
  DenotPtr coproduct(DenotPtr l, DenotPtr r);
  // sigma(A, B) = family over atoms p of (A -> [[p]]) -> ((B -> [[p]]) -> [[p]])
  DenotPtr sigma(DenotPtr a, DenotPtr b);

  const Fragment& fragment() const { return frag_; }
  DisjStyle style() const { return style_; }
  const InterpCaps& caps() const { return caps_; }

 private:
  DenotPtr finish_atom(const Atom& a);
  void build_tuple_tables(Denot& d);
  const Fragment& frag_;
  DisjStyle style_;
  InterpCaps caps_;
  std::map<std::string, DenotPtr> formula_memo_;
  std::map<std::string, DenotPtr> atom_memo_;
};

DenotPtr interp(const Formula& phi, const Fragment& frag, DisjStyle style,
                const InterpCaps& caps = {});
// Coproduct reading of a disjunction (the whole tree is interpreted with
// coproduct disjunctions).
DenotPtr interp_coproduct(const Formula& disj, const Fragment& frag,
                          const InterpCaps& caps = {});

// action(id) = id and action(g after f) = action(f) after action(g), checked
// exhaustively; deep recurses into children.
bool check_functoriality(const Denot& d, const Fragment& frag);
bool check_functoriality_deep(const Denot& d, const Fragment& frag);

struct NatTrans {
  DenotPtr source;
  DenotPtr target;
  std::vector<std::vector<int>> components;  // per world: source idx -> target idx
};

bool check_naturality(const NatTrans& nt, const Fragment& frag);

std::optional<NatTrans> find_nat_trans(const DenotPtr& source, const DenotPtr& target,
                                       const Fragment& frag, const InterpCaps& caps = {});
std::uint64_t count_nat_trans(const DenotPtr& source, const DenotPtr& target,
                              const Fragment& frag, const InterpCaps& caps = {});

// Whether sigma supports disjunction elimination for c: some natural
// transformation sigma(a,b) x [a -> c] x [b -> c] -> c on the fragment.
bool supports_disjunction_check(Interpreter& interp, const DenotPtr& a,
                                const DenotPtr& b, const DenotPtr& c);

// Transcription of an NJ proof into a natural transformation from the
// context product to the conclusion denotation, following the soundness
// construction (Cur for the implication and disjunction cases).
NatTrans transcribe_nj(Interpreter& interp, const NJContext& ctx, const NJTermPtr& term,
                       const Formula& phi);

struct DisjunctionExperimentReport {
  int fragment_worlds = 0;
  bool degenerate = false;
  bool coproduct_constructed = false;
  bool coproduct_natural = false;
  std::optional<std::uint64_t> forall_nat_count;
  std::string note;
};

// Theorem-style experiment: under coproduct disjunction, build the natural
// transformation from [[p -> (q | r)]] to [[(p -> q) | (p -> r)]] by
// extending each base with "=> p" and case-splitting on the tag, then verify
// naturality; under the forall-style disjunction, exhaustively count natural
// transformations between the same denotations.
DisjunctionExperimentReport strong_disjunction_experiment(const Universe& universe,
                                                          const EnumerationBounds& bounds,
                                                          const InterpCaps& caps = {});

}  // namespace ibes
