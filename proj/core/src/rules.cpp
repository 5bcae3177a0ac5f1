#include "ibes/rules.hpp"

#include <algorithm>

#include "ibes/errors.hpp"

namespace ibes {

AtomSet::AtomSet(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  std::sort(atoms_.begin(), atoms_.end());
  atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
}

void AtomSet::insert(const Atom& a) {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), a);
  if (it != atoms_.end() && *it == a) return;
  atoms_.insert(it, a);
}

bool AtomSet::contains(const Atom& a) const {
  return std::binary_search(atoms_.begin(), atoms_.end(), a);
}

bool AtomSet::subset_of(const AtomSet& other) const {
  return std::includes(other.atoms_.begin(), other.atoms_.end(), atoms_.begin(),
                       atoms_.end());
}

AtomSet AtomSet::unioned(const AtomSet& other) const {
  AtomSet out = *this;
  for (const auto& a : other) out.insert(a);
  return out;
}

AtomicRule::AtomicRule(std::vector<RulePremise> premises, Atom conclusion)
    : conclusion_(std::move(conclusion)) {
  for (auto& p : premises) {
    if (p.hyps.contains(p.concl)) continue;  // derivable by Ref; drop
    premises_.push_back(std::move(p));
  }
  std::sort(premises_.begin(), premises_.end());
  premises_.erase(std::unique(premises_.begin(), premises_.end()), premises_.end());
}

AtomicRule AtomicRule::axiom(Atom conclusion) {
  return AtomicRule({}, std::move(conclusion));
}

std::vector<Atom> AtomicRule::mentioned_atoms() const {
  std::vector<Atom> out;
  out.push_back(conclusion_);
  for (const auto& p : premises_) {
    out.push_back(p.concl);
    for (const auto& a : p.hyps) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string render_rule(const AtomicRule& r) {
  std::string out = "(";
  bool first = true;
  for (const auto& p : r.premises()) {
    if (!first) out += ", ";
    first = false;
    out += "(";
    bool fa = true;
    for (const auto& a : p.hyps) {
      if (!fa) out += ",";
      fa = false;
      out += a.name;
    }
    out += " => " + p.concl.name + ")";
  }
  out += ") => " + r.conclusion().name;
  return out;
}

Base::Base(std::vector<AtomicRule> rules, std::string name)
    : rules_(std::move(rules)), name_(std::move(name)) {
  std::sort(rules_.begin(), rules_.end());
  rules_.erase(std::unique(rules_.begin(), rules_.end()), rules_.end());
}

bool Base::contains(const AtomicRule& r) const {
  return std::binary_search(rules_.begin(), rules_.end(), r);
}

bool Base::subset_of(const Base& other) const {
  return std::includes(other.rules_.begin(), other.rules_.end(), rules_.begin(),
                       rules_.end());
}

Base Base::extended_with(const AtomicRule& r) const {
  if (contains(r)) return *this;
  auto rules = rules_;
  rules.push_back(r);
  return Base(std::move(rules), name_);
}

std::string render_base(const Base& b) {
  std::string out = "{";
  bool first = true;
  for (const auto& r : b.rules()) {
    if (!first) out += "; ";
    first = false;
    out += render_rule(r);
  }
  out += "}";
  return out;
}

Universe::Universe(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  std::sort(atoms_.begin(), atoms_.end());
  atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
}

int Universe::index_of(const Atom& a) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), a);
  if (it == atoms_.end() || !(*it == a)) return -1;
  return static_cast<int>(it - atoms_.begin());
}

bool Universe::contains(const Atom& a) const { return index_of(a) >= 0; }

Universe universe_of(const Base& b) {
  std::vector<Atom> atoms;
  for (const auto& r : b.rules()) {
    auto m = r.mentioned_atoms();
    atoms.insert(atoms.end(), m.begin(), m.end());
  }
  return Universe(std::move(atoms));
}

std::uint32_t atomset_mask(const AtomSet& s, const Universe& u) {
  std::uint32_t mask = 0;
  for (const auto& a : s) {
    int i = u.index_of(a);
    if (i < 0) throw UniverseError("atom '" + a.name + "' outside the declared universe");
    mask |= (1u << i);
  }
  return mask;
}

AtomSet mask_atomset(std::uint32_t mask, const Universe& u) {
  std::vector<Atom> atoms;
  for (int i = 0; i < u.size(); i++) {
    if (mask & (1u << i)) atoms.push_back(u.at(i));
  }
  return AtomSet(std::move(atoms));
}

void require_in_universe(const Base& b, const Universe& u) {
  for (const auto& r : b.rules()) {
    for (const auto& a : r.mentioned_atoms()) {
      if (!u.contains(a)) {
        throw UniverseError("rule " + render_rule(r) + " mentions atom '" + a.name +
                            "' outside the declared universe");
      }
    }
  }
}

}  // namespace ibes
