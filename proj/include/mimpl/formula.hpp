#pragma once
// Purely implicational formulas, hash-consed.
//
// Structurally equal formulas share a single immutable node, so equality is
// pointer equality, hashing is pointer hashing, and the size metrics are
// precomputed per node. The intern table lives for the process; building the
// same formula twice returns the same node.

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mimpl {

struct FormulaNode;

class Formula {
public:
  // Atom names match [A-Za-z][A-Za-z0-9_]*; anything else throws.
  static Formula atom(std::string_view name);
  static Formula implies(Formula antecedent, Formula consequent);

  bool is_atom() const;
  bool is_implication() const;

  const std::string& atom_name() const;  // atoms only
  Formula antecedent() const;            // implications only
  Formula consequent() const;            // implications only

  std::uint64_t atom_occurrences() const;
  std::uint64_t arrow_count() const;
  std::uint32_t depth() const;  // atoms have depth 1

  // Minimal parenthesisation: "->" is right-associative, so only antecedents
  // that are themselves implications get parentheses. No spaces.
  std::string str() const;

  friend bool operator==(Formula a, Formula b) { return a.node_ == b.node_; }
  friend bool operator!=(Formula a, Formula b) { return a.node_ != b.node_; }

  const FormulaNode* raw() const { return node_; }

private:
  explicit Formula(const FormulaNode* node) : node_(node) {}
  const FormulaNode* node_;
};

// Deterministic structural order: atoms before implications, atoms by name,
// implications lexicographically by (antecedent, consequent). Independent of
// intern order, identical across runs. Shortcuts on pointer equality.
struct FormulaOrder {
  bool operator()(Formula a, Formula b) const;
};

struct FormulaHash {
  std::size_t operator()(Formula f) const;
};

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& message, std::size_t position);
  // Byte offset into the input at which the problem was detected.
  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

// Grammar: formula := primary ("->" formula)? ; primary := ATOM | "(" formula ")".
// The Unicode arrow U+2192 is accepted as a synonym for "->".
Formula parse_formula(std::string_view text);

// Simultaneous substitution of formulas for atoms.
struct Substitution {
  std::map<std::string, Formula> bindings;
};

Formula substitute(Formula f, const Substitution& s);

// chi[X, Y] = (((X->Y)->X)->X)->Y, the Peirce-shaped composition step.
Formula chi(Formula x, Formula y);

// xi(1) = chi[D1, C]; xi(i+1) = chi[D_{i+1}, xi(i)]. Rejects i < 1.
Formula xi(int i);

// phi(n) = xi(n) -> C. Rejects n < 1.
Formula phi(int n);

// C -> xi(1) and D_k -> D_{k+1} for 1 <= k <= i. Applying it to xi(i) yields
// the inner part of xi(i+1): substitute(xi(i), xi_shift(i)) == chi(D_{i+1}, xi(i)).
Substitution xi_shift(int i);

struct SizeInfo {
  std::uint64_t atom_occurrences;
  std::uint64_t arrow_count;
  std::uint32_t depth;
};
SizeInfo size_of(Formula f);

std::set<std::string> atoms_of(Formula f);
bool contains_atom(Formula f, std::string_view name);
bool contains_subformula(Formula f, Formula sub);

}  // namespace mimpl
