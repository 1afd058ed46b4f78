#include "mimpl/formula.hpp"

#include <cctype>
#include <deque>
#include <mutex>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace mimpl {

struct FormulaNode {
  const FormulaNode* lhs = nullptr;  // null for atoms
  const FormulaNode* rhs = nullptr;
  std::string name;  // atoms only
  std::uint64_t atom_occurrences = 0;
  std::uint64_t arrow_count = 0;
  std::uint32_t depth = 0;
};

namespace {

struct PtrPairHash {
  std::size_t operator()(const std::pair<const FormulaNode*, const FormulaNode*>& p) const {
    std::size_t h = std::hash<const void*>()(p.first);
    h ^= std::hash<const void*>()(p.second) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

// Process-wide intern table. std::deque keeps node addresses stable.
struct Arena {
  std::mutex mu;
  std::deque<FormulaNode> nodes;
  std::unordered_map<std::string, const FormulaNode*> atom_index;
  std::unordered_map<std::pair<const FormulaNode*, const FormulaNode*>, const FormulaNode*,
                     PtrPairHash>
      impl_index;

  static Arena& get() {
    static Arena arena;
    return arena;
  }
};

bool valid_atom_name(std::string_view name) {
  if (name.empty()) return false;
  unsigned char c0 = static_cast<unsigned char>(name[0]);
  if (!std::isalpha(c0)) return false;
  for (char ch : name.substr(1)) {
    unsigned char c = static_cast<unsigned char>(ch);
    if (!std::isalnum(c) && c != '_') return false;
  }
  return true;
}

}  // namespace

Formula Formula::atom(std::string_view name) {
  if (!valid_atom_name(name))
    throw std::invalid_argument("invalid atom name: '" + std::string(name) + "'");
  Arena& a = Arena::get();
  std::lock_guard<std::mutex> lock(a.mu);
  auto it = a.atom_index.find(std::string(name));
  if (it != a.atom_index.end()) return Formula(it->second);
  FormulaNode& n = a.nodes.emplace_back();
  n.name = std::string(name);
  n.atom_occurrences = 1;
  n.arrow_count = 0;
  n.depth = 1;
  a.atom_index.emplace(n.name, &n);
  return Formula(&n);
}

Formula Formula::implies(Formula antecedent, Formula consequent) {
  Arena& a = Arena::get();
  std::lock_guard<std::mutex> lock(a.mu);
  auto key = std::make_pair(antecedent.node_, consequent.node_);
  auto it = a.impl_index.find(key);
  if (it != a.impl_index.end()) return Formula(it->second);
  FormulaNode& n = a.nodes.emplace_back();
  n.lhs = antecedent.node_;
  n.rhs = consequent.node_;
  n.atom_occurrences = antecedent.node_->atom_occurrences + consequent.node_->atom_occurrences;
  n.arrow_count = antecedent.node_->arrow_count + consequent.node_->arrow_count + 1;
  n.depth = 1 + std::max(antecedent.node_->depth, consequent.node_->depth);
  a.impl_index.emplace(key, &n);
  return Formula(&n);
}

bool Formula::is_atom() const { return node_->lhs == nullptr; }
bool Formula::is_implication() const { return node_->lhs != nullptr; }

const std::string& Formula::atom_name() const {
  if (!is_atom()) throw std::logic_error("atom_name() on an implication");
  return node_->name;
}

Formula Formula::antecedent() const {
  if (!is_implication()) throw std::logic_error("antecedent() on an atom");
  return Formula(node_->lhs);
}

Formula Formula::consequent() const {
  if (!is_implication()) throw std::logic_error("consequent() on an atom");
  return Formula(node_->rhs);
}

std::uint64_t Formula::atom_occurrences() const { return node_->atom_occurrences; }
std::uint64_t Formula::arrow_count() const { return node_->arrow_count; }
std::uint32_t Formula::depth() const { return node_->depth; }

namespace {

// Right spines are walked iteratively; recursion depth is bounded by the
// deepest antecedent nesting, not by formula length.
void print_into(const FormulaNode* n, std::string& out) {
  while (n->lhs != nullptr) {
    if (n->lhs->lhs != nullptr) {
      out.push_back('(');
      print_into(n->lhs, out);
      out.push_back(')');
    } else {
      out += n->lhs->name;
    }
    out += "->";
    n = n->rhs;
  }
  out += n->name;
}

}  // namespace

std::string Formula::str() const {
  std::string out;
  out.reserve(node_->atom_occurrences * 2 + node_->arrow_count * 2);
  print_into(node_, out);
  return out;
}

bool FormulaOrder::operator()(Formula a, Formula b) const {
  if (a == b) return false;
  if (a.is_atom() != b.is_atom()) return a.is_atom();
  if (a.is_atom()) return a.atom_name() < b.atom_name();
  if (FormulaOrder()(a.antecedent(), b.antecedent())) return true;
  if (FormulaOrder()(b.antecedent(), a.antecedent())) return false;
  return FormulaOrder()(a.consequent(), b.consequent());
}

std::size_t FormulaHash::operator()(Formula f) const {
  return std::hash<const void*>()(f.raw());
}

ParseError::ParseError(const std::string& message, std::size_t position)
    : std::runtime_error(message + " at position " + std::to_string(position)),
      position_(position) {}

namespace {

struct Lexer {
  std::string_view text;
  std::size_t pos = 0;

  enum class Tok { lparen, rparen, arrow, ident, end };
  Tok tok = Tok::end;
  std::string ident;
  std::size_t tok_pos = 0;

  void advance() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    tok_pos = pos;
    if (pos >= text.size()) {
      tok = Tok::end;
      return;
    }
    char c = text[pos];
    if (c == '(') {
      tok = Tok::lparen;
      ++pos;
      return;
    }
    if (c == ')') {
      tok = Tok::rparen;
      ++pos;
      return;
    }
    if (c == '-') {
      if (pos + 1 < text.size() && text[pos + 1] == '>') {
        tok = Tok::arrow;
        pos += 2;
        return;
      }
      throw ParseError("stray '-' (expected \"->\")", pos);
    }
    // U+2192 RIGHTWARDS ARROW, UTF-8 e2 86 92.
    if (static_cast<unsigned char>(c) == 0xe2) {
      if (pos + 2 < text.size() && static_cast<unsigned char>(text[pos + 1]) == 0x86 &&
          static_cast<unsigned char>(text[pos + 2]) == 0x92) {
        tok = Tok::arrow;
        pos += 3;
        return;
      }
      throw ParseError("unexpected byte sequence", pos);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos;
      ++pos;
      while (pos < text.size()) {
        unsigned char u = static_cast<unsigned char>(text[pos]);
        if (std::isalnum(u) || u == '_')
          ++pos;
        else
          break;
      }
      tok = Tok::ident;
      ident = std::string(text.substr(start, pos - start));
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos);
  }
};

struct Parser {
  Lexer lex;

  explicit Parser(std::string_view text) {
    lex.text = text;
    lex.advance();
  }

  Formula parse_primary() {
    if (lex.tok == Lexer::Tok::ident) {
      Formula f = Formula::atom(lex.ident);
      lex.advance();
      return f;
    }
    if (lex.tok == Lexer::Tok::lparen) {
      std::size_t open_pos = lex.tok_pos;
      lex.advance();
      Formula f = parse_formula();
      if (lex.tok != Lexer::Tok::rparen)
        throw ParseError("unbalanced parenthesis (opened here)", open_pos);
      lex.advance();
      return f;
    }
    if (lex.tok == Lexer::Tok::end) throw ParseError("unexpected end of input", lex.tok_pos);
    throw ParseError("expected an atom or '('", lex.tok_pos);
  }

  // Collect "->"-separated primaries, then fold right. Keeps long right
  // spines iterative.
  Formula parse_formula() {
    std::vector<Formula> parts;
    parts.push_back(parse_primary());
    while (lex.tok == Lexer::Tok::arrow) {
      lex.advance();
      parts.push_back(parse_primary());
    }
    Formula result = parts.back();
    for (std::size_t i = parts.size() - 1; i-- > 0;)
      result = Formula::implies(parts[i], result);
    return result;
  }
};

}  // namespace

Formula parse_formula(std::string_view text) {
  Parser p(text);
  Formula f = p.parse_formula();
  if (p.lex.tok != Lexer::Tok::end)
    throw ParseError("trailing input after formula", p.lex.tok_pos);
  return f;
}

Formula substitute(Formula f, const Substitution& s) {
  std::unordered_map<const FormulaNode*, Formula> memo;
  // Memoised over physical nodes: shared subterms are rewritten once, and the
  // substitution is simultaneous by construction.
  auto rec = [&](auto&& self, Formula g) -> Formula {
    auto it = memo.find(g.raw());
    if (it != memo.end()) return it->second;
    Formula result = g;
    if (g.is_atom()) {
      auto b = s.bindings.find(g.atom_name());
      if (b != s.bindings.end()) result = b->second;
    } else {
      Formula a = self(self, g.antecedent());
      Formula c = self(self, g.consequent());
      if (a != g.antecedent() || c != g.consequent()) result = Formula::implies(a, c);
    }
    memo.emplace(g.raw(), result);
    return result;
  };
  return rec(rec, f);
}

Formula chi(Formula x, Formula y) {
  Formula xy = Formula::implies(x, y);
  Formula peirce_x = Formula::implies(Formula::implies(xy, x), x);
  return Formula::implies(peirce_x, y);
}

namespace {

Formula d_atom(int k) { return Formula::atom("D" + std::to_string(k)); }

}  // namespace

Formula xi(int i) {
  if (i < 1) throw std::invalid_argument("xi(i) requires i >= 1");
  Formula f = chi(d_atom(1), Formula::atom("C"));
  for (int k = 2; k <= i; ++k) f = chi(d_atom(k), f);
  return f;
}

Formula phi(int n) {
  if (n < 1) throw std::invalid_argument("phi(n) requires n >= 1");
  return Formula::implies(xi(n), Formula::atom("C"));
}

Substitution xi_shift(int i) {
  if (i < 1) throw std::invalid_argument("xi_shift(i) requires i >= 1");
  Substitution s;
  s.bindings.emplace("C", xi(1));
  for (int k = 1; k <= i; ++k) s.bindings.emplace("D" + std::to_string(k), d_atom(k + 1));
  return s;
}

SizeInfo size_of(Formula f) {
  return SizeInfo{f.atom_occurrences(), f.arrow_count(), f.depth()};
}

std::set<std::string> atoms_of(Formula f) {
  std::set<std::string> result;
  std::unordered_set<const FormulaNode*> seen;
  auto rec = [&](auto&& self, const FormulaNode* n) -> void {
    if (!seen.insert(n).second) return;
    if (n->lhs == nullptr) {
      result.insert(n->name);
      return;
    }
    self(self, n->lhs);
    self(self, n->rhs);
  };
  rec(rec, f.raw());
  return result;
}

bool contains_atom(Formula f, std::string_view name) {
  std::unordered_set<const FormulaNode*> seen;
  auto rec = [&](auto&& self, const FormulaNode* n) -> bool {
    if (!seen.insert(n).second) return false;
    if (n->lhs == nullptr) return n->name == name;
    return self(self, n->lhs) || self(self, n->rhs);
  };
  return rec(rec, f.raw());
}

bool contains_subformula(Formula f, Formula sub) {
  std::unordered_set<const FormulaNode*> seen;
  auto rec = [&](auto&& self, const FormulaNode* n) -> bool {
    if (n == sub.raw()) return true;
    if (!seen.insert(n).second) return false;
    if (n->lhs == nullptr) return false;
    return self(self, n->lhs) || self(self, n->rhs);
  };
  return rec(rec, f.raw());
}

}  // namespace mimpl
