#include "ibes/formula.hpp"

#include <algorithm>
#include <cctype>

namespace ibes {

bool is_valid_atom_name(std::string_view name) {
  if (name.empty() || name == "bot") return false;
  if (name[0] < 'a' || name[0] > 'z') return false;
  for (char c : name.substr(1)) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

Atom::Atom(std::string n) : name(std::move(n)) {
  if (!is_valid_atom_name(name)) {
    throw std::invalid_argument("invalid atom name: '" + name + "'");
  }
}

struct Formula::Node {
  Kind kind;
  Atom atom;
  std::shared_ptr<const Node> l, r;
  std::size_t hash;
};

namespace {

std::size_t mix(std::size_t a, std::size_t b) {
  return a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
}

std::shared_ptr<const Formula::Node> make_node(Formula::Kind k, Atom a,
                                               std::shared_ptr<const Formula::Node> l,
                                               std::shared_ptr<const Formula::Node> r) {
  std::size_t h = static_cast<std::size_t>(k) * 1000003u;
  if (k == Formula::Kind::Atom) h = mix(h, std::hash<std::string>{}(a.name));
  if (l) h = mix(h, l->hash);
  if (r) h = mix(h, r->hash);
  auto n = std::make_shared<Formula::Node>();
  n->kind = k;
  n->atom = std::move(a);
  n->l = std::move(l);
  n->r = std::move(r);
  n->hash = h;
  return n;
}

const std::shared_ptr<const Formula::Node>& bot_node() {
  static const std::shared_ptr<const Formula::Node> n =
      make_node(Formula::Kind::Bot, Atom{}, nullptr, nullptr);
  return n;
}

}  // namespace

Formula::Formula() : node_(bot_node()) {}

Formula Formula::atom(Atom a) {
  return Formula(make_node(Kind::Atom, std::move(a), nullptr, nullptr));
}
Formula Formula::atom(std::string name) { return atom(Atom(std::move(name))); }
Formula Formula::conj(Formula l, Formula r) {
  return Formula(make_node(Kind::Conj, Atom{}, std::move(l.node_), std::move(r.node_)));
}
Formula Formula::impl(Formula l, Formula r) {
  return Formula(make_node(Kind::Impl, Atom{}, std::move(l.node_), std::move(r.node_)));
}
Formula Formula::disj(Formula l, Formula r) {
  return Formula(make_node(Kind::Disj, Atom{}, std::move(l.node_), std::move(r.node_)));
}
Formula Formula::bot() { return Formula(bot_node()); }
Formula Formula::neg(Formula f) { return impl(std::move(f), bot()); }

Formula::Kind Formula::kind() const { return node_->kind; }

const Atom& Formula::atom_ref() const {
  if (kind() != Kind::Atom) throw std::logic_error("atom_ref on non-atom");
  return node_->atom;
}
Formula Formula::left() const {
  if (!node_->l) throw std::logic_error("left on leaf formula");
  return Formula(node_->l);
}
Formula Formula::right() const {
  if (!node_->r) throw std::logic_error("right on leaf formula");
  return Formula(node_->r);
}

std::size_t Formula::hash() const { return node_->hash; }

namespace {

bool node_eq(const Formula::Node* a, const Formula::Node* b) {
  if (a == b) return true;
  if (a->hash != b->hash || a->kind != b->kind) return false;
  switch (a->kind) {
    case Formula::Kind::Atom:
      return a->atom == b->atom;
    case Formula::Kind::Bot:
      return true;
    default:
      return node_eq(a->l.get(), b->l.get()) && node_eq(a->r.get(), b->r.get());
  }
}

// Precedence: -> binds loosest (1, right assoc), then | (2), then & (3).
int prec(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::Impl: return 1;
    case Formula::Kind::Disj: return 2;
    case Formula::Kind::Conj: return 3;
    default: return 4;
  }
}

void render_into(const Formula& f, int min_prec, std::string& out) {
  int p = prec(f.kind());
  bool parens = p < min_prec;
  if (parens) out += '(';
  switch (f.kind()) {
    case Formula::Kind::Atom:
      out += f.atom_ref().name;
      break;
    case Formula::Kind::Bot:
      out += "bot";
      break;
    case Formula::Kind::Impl:
      render_into(f.left(), 2, out);
      out += " -> ";
      render_into(f.right(), 1, out);
      break;
    case Formula::Kind::Disj:
      render_into(f.left(), 2, out);
      out += " | ";
      render_into(f.right(), 3, out);
      break;
    case Formula::Kind::Conj:
      render_into(f.left(), 3, out);
      out += " & ";
      render_into(f.right(), 4, out);
      break;
  }
  if (parens) out += ')';
}

}  // namespace

bool Formula::operator==(const Formula& o) const {
  return node_eq(node_.get(), o.node_.get());
}

std::string render_formula(const Formula& f) {
  std::string out;
  render_into(f, 0, out);
  return out;
}

bool formula_lt(const Formula& a, const Formula& b) {
  return render_formula(a) < render_formula(b);
}

namespace {

struct Token {
  enum class Kind { Ident, Bot, And, Or, Arrow, LParen, RParen, Tilde, End };
  Kind kind;
  std::string text;
  std::size_t pos;
};

class Lexer {
 public:
  Lexer(std::string_view text, bool allow_tilde)
      : text_(text), allow_tilde_(allow_tilde) {
    advance();
  }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) i_++;
    std::size_t start = i_;
    if (i_ >= text_.size()) {
      tok_ = {Token::Kind::End, "", start};
      return;
    }
    char c = text_[i_];
    if (c == '(') { i_++; tok_ = {Token::Kind::LParen, "(", start}; return; }
    if (c == ')') { i_++; tok_ = {Token::Kind::RParen, ")", start}; return; }
    if (c == '&') { i_++; tok_ = {Token::Kind::And, "&", start}; return; }
    if (c == '|') { i_++; tok_ = {Token::Kind::Or, "|", start}; return; }
    if (c == '~' && allow_tilde_) { i_++; tok_ = {Token::Kind::Tilde, "~", start}; return; }
    if (c == '-') {
      if (i_ + 1 < text_.size() && text_[i_ + 1] == '>') {
        i_ += 2;
        tok_ = {Token::Kind::Arrow, "->", start};
        return;
      }
      throw ParseError("expected '->' ", start);
    }
    if (c >= 'a' && c <= 'z') {
      std::size_t j = i_ + 1;
      while (j < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_')) {
        j++;
      }
      std::string word(text_.substr(i_, j - i_));
      i_ = j;
      if (word == "bot") {
        tok_ = {Token::Kind::Bot, word, start};
      } else {
        tok_ = {Token::Kind::Ident, word, start};
      }
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", start);
  }

  std::string_view text_;
  bool allow_tilde_;
  std::size_t i_ = 0;
  Token tok_;
};

class Parser {
 public:
  Parser(std::string_view text, const ParseOptions& opts)
      : lex_(text, opts.allow_negation) {}

  Formula parse() {
    Formula f = impl();
    if (lex_.peek().kind != Token::Kind::End) {
      throw ParseError("trailing input after formula", lex_.peek().pos);
    }
    return f;
  }

 private:
  Formula impl() {
    Formula lhs = disj();
    if (lex_.peek().kind == Token::Kind::Arrow) {
      lex_.take();
      return Formula::impl(lhs, impl());  // right associative
    }
    return lhs;
  }

  Formula disj() {
    Formula f = conj();
    while (lex_.peek().kind == Token::Kind::Or) {
      lex_.take();
      f = Formula::disj(f, conj());
    }
    return f;
  }

  Formula conj() {
    Formula f = unit();
    while (lex_.peek().kind == Token::Kind::And) {
      lex_.take();
      f = Formula::conj(f, unit());
    }
    return f;
  }

  Formula unit() {
    Token t = lex_.take();
    switch (t.kind) {
      case Token::Kind::Ident:
        return Formula::atom(t.text);
      case Token::Kind::Bot:
        return Formula::bot();
      case Token::Kind::Tilde:
        return Formula::neg(unit());
      case Token::Kind::LParen: {
        Formula f = impl();
        Token close = lex_.take();
        if (close.kind != Token::Kind::RParen) {
          throw ParseError("expected ')'", close.pos);
        }
        return f;
      }
      case Token::Kind::End:
        throw ParseError("unexpected end of input", t.pos);
      default:
        throw ParseError("unexpected token '" + t.text + "'", t.pos);
    }
  }

  Lexer lex_;
};

}  // namespace

Formula parse_formula(std::string_view text, const ParseOptions& opts) {
  return Parser(text, opts).parse();
}

FormulaSet::FormulaSet(std::vector<Formula> fs) {
  for (auto& f : fs) insert(f);
}

void FormulaSet::insert(const Formula& f) {
  auto it = std::lower_bound(items_.begin(), items_.end(), f, formula_lt);
  if (it != items_.end() && *it == f) return;
  items_.insert(it, f);
}

bool FormulaSet::contains(const Formula& f) const {
  auto it = std::lower_bound(items_.begin(), items_.end(), f, formula_lt);
  return it != items_.end() && *it == f;
}

FormulaSet FormulaSet::unioned(const FormulaSet& other) const {
  FormulaSet out = *this;
  for (const auto& f : other) out.insert(f);
  return out;
}

bool FormulaSet::subset_of(const FormulaSet& other) const {
  return std::all_of(begin(), end(), [&](const Formula& f) { return other.contains(f); });
}

bool FormulaSet::operator==(const FormulaSet& other) const {
  return items_ == other.items_;
}

namespace {
void add_subformulas(const Formula& f, FormulaSet& out) {
  if (out.contains(f)) return;
  out.insert(f);
  switch (f.kind()) {
    case Formula::Kind::Conj:
    case Formula::Kind::Impl:
    case Formula::Kind::Disj:
      add_subformulas(f.left(), out);
      add_subformulas(f.right(), out);
      break;
    default:
      break;
  }
}
}  // namespace

FormulaSet subformulas(const FormulaSet& fs) {
  FormulaSet out;
  for (const auto& f : fs) add_subformulas(f, out);
  return out;
}

FormulaSet subformulas(const Formula& f) {
  FormulaSet out;
  add_subformulas(f, out);
  return out;
}

bool is_subformula_closed(const FormulaSet& fs) {
  return subformulas(fs) == fs;
}

namespace {
void add_atoms(const Formula& f, std::vector<Atom>& out) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      out.push_back(f.atom_ref());
      break;
    case Formula::Kind::Bot:
      break;
    default:
      add_atoms(f.left(), out);
      add_atoms(f.right(), out);
  }
}
}  // namespace

std::vector<Atom> atoms_of(const Formula& f) {
  std::vector<Atom> out;
  add_atoms(f, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Atom> atoms_of(const FormulaSet& fs) {
  std::vector<Atom> out;
  for (const auto& f : fs) add_atoms(f, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Sequent parse_sequent(std::string_view text, const ParseOptions& opts) {
  auto turnstile = text.find("|-");
  if (turnstile == std::string_view::npos) {
    return Sequent{FormulaSet{}, parse_formula(text, opts)};
  }
  std::string_view lhs = text.substr(0, turnstile);
  std::string_view rhs = text.substr(turnstile + 2);
  FormulaSet gamma;
  // split on commas at depth 0 (commas cannot occur inside formulas)
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    std::string_view piece = lhs.substr(start, end - start);
    std::size_t a = piece.find_first_not_of(" \t");
    if (a == std::string_view::npos) return;  // empty segment
    gamma.insert(parse_formula(piece, opts));
  };
  for (std::size_t i = 0; i < lhs.size(); i++) {
    if (lhs[i] == ',') {
      flush(i);
      start = i + 1;
    }
  }
  flush(lhs.size());
  return Sequent{std::move(gamma), parse_formula(rhs, opts)};
}

std::string render_sequent(const Sequent& s) {
  std::string out;
  bool first = true;
  for (const auto& f : s.antecedent) {
    if (!first) out += ", ";
    out += render_formula(f);
    first = false;
  }
  if (!s.antecedent.empty()) out += " ";
  out += "|- ";
  out += render_formula(s.consequent);
  return out;
}

}  // namespace ibes
