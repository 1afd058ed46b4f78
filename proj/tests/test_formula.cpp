#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "mimpl/formula.hpp"

using namespace mimpl;

namespace {

// Independent arrow oracle: count "->" in the printed form.
std::uint64_t printed_arrows(Formula f) {
  std::string s = f.str();
  std::uint64_t n = 0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    if (s[i] == '-' && s[i + 1] == '>') ++n;
  return n;
}

}  // namespace

TEST_CASE("interning gives pointer identity for structural equality") {
  Formula a1 = Formula::atom("A");
  Formula a2 = Formula::atom("A");
  CHECK(a1.raw() == a2.raw());
  Formula f1 = Formula::implies(a1, Formula::atom("B"));
  Formula f2 = parse_formula("A->B");
  CHECK(f1 == f2);
  CHECK(f1.raw() == f2.raw());
  CHECK(f1 != Formula::implies(f1, a1));
}

TEST_CASE("arrow is right-associative and printing is minimal") {
  Formula f = parse_formula("A->B->C");
  REQUIRE(f.is_implication());
  CHECK(f.antecedent() == Formula::atom("A"));
  CHECK(f.consequent() == parse_formula("B->C"));
  CHECK(f.str() == "A->B->C");

  Formula g = parse_formula("(A->B)->C");
  CHECK(g != f);
  CHECK(g.str() == "(A->B)->C");

  CHECK(parse_formula("((A))").str() == "A");
  CHECK(parse_formula(" A -> ( B -> C ) ").str() == "A->B->C");
}

TEST_CASE("unicode arrow is a synonym") {
  CHECK(parse_formula("A→B") == parse_formula("A->B"));
  CHECK(parse_formula("(A→B)->C") == parse_formula("(A->B)->C"));
}

TEST_CASE("parse errors carry positions") {
  auto position_of = [](const std::string& text) -> std::size_t {
    try {
      parse_formula(text);
    } catch (const ParseError& e) {
      return e.position();
    }
    return std::size_t(-1);
  };
  CHECK(position_of("") == 0);
  CHECK(position_of("A->") == 3);
  CHECK(position_of("(A->B") == 0);   // reported at the unmatched '('
  CHECK(position_of("A B") == 2);     // trailing input
  CHECK(position_of(")A") == 0);
  CHECK(position_of("A-B") == 1);     // stray '-'
  CHECK(position_of("A->->B") == 3);
  CHECK_THROWS_AS(parse_formula("?"), ParseError);
}

TEST_CASE("atom names are validated") {
  CHECK(Formula::atom("Foo_1").atom_name() == "Foo_1");
  CHECK_THROWS_AS(Formula::atom(""), std::invalid_argument);
  CHECK_THROWS_AS(Formula::atom("1A"), std::invalid_argument);
  CHECK_THROWS_AS(Formula::atom("A B"), std::invalid_argument);
  CHECK_THROWS_AS(Formula::atom("_A"), std::invalid_argument);
}

TEST_CASE("round trip parse(str()) is the identity") {
  const char* samples[] = {
      "A", "A->B", "A->B->C", "(A->B)->C", "((A->B)->A)->A",
      "(((D1->C)->D1)->D1)->C", "((((D1->C)->D1)->D1)->C)->C",
  };
  for (const char* s : samples) {
    Formula f = parse_formula(s);
    CHECK(f.str() == s);
    CHECK(parse_formula(f.str()) == f);
  }
}

TEST_CASE("chi has the Peirce-composition shape") {
  Formula f = chi(Formula::atom("A"), Formula::atom("B"));
  CHECK(f.str() == "(((A->B)->A)->A)->B");
}

TEST_CASE("phi(1) prints exactly as the fixed target string") {
  CHECK(phi(1).str() == "((((D1->C)->D1)->D1)->C)->C");
  CHECK(xi(1).str() == "(((D1->C)->D1)->D1)->C");
  CHECK(phi(1) == Formula::implies(xi(1), Formula::atom("C")));
}

TEST_CASE("family generators reject out-of-range indices") {
  CHECK_THROWS_AS(xi(0), std::invalid_argument);
  CHECK_THROWS_AS(phi(0), std::invalid_argument);
  CHECK_THROWS_AS(phi(-3), std::invalid_argument);
  CHECK_THROWS_AS(xi_shift(0), std::invalid_argument);
}

TEST_CASE("size metrics match the printed-form oracle") {
  // Frozen: arrows(phi(n)) = 4*2^n - 3 -> 5, 13, 29; depth(phi(n)) = 4n + 2.
  CHECK(size_of(phi(1)).atom_occurrences == 6);
  CHECK(size_of(phi(1)).arrow_count == 5);
  CHECK(size_of(phi(1)).depth == 6);
  CHECK(size_of(phi(2)).arrow_count == 13);
  CHECK(size_of(phi(3)).arrow_count == 29);
  for (int n = 1; n <= 10; ++n) {
    Formula f = phi(n);
    CHECK(f.arrow_count() == (std::uint64_t(4) << n) - 3);
    CHECK(f.arrow_count() == printed_arrows(f));
    CHECK(f.atom_occurrences() == f.arrow_count() + 1);  // binary tree leaves
    CHECK(f.depth() == std::uint32_t(4 * n + 2));
  }
}

TEST_CASE("atoms of xi(n) are C and D1..Dn") {
  auto atoms = atoms_of(xi(3));
  CHECK(atoms == std::set<std::string>{"C", "D1", "D2", "D3"});
  CHECK(contains_atom(xi(3), "D2"));
  CHECK_FALSE(contains_atom(xi(3), "D4"));
}

TEST_CASE("substitution is simultaneous") {
  Substitution swap;
  swap.bindings.emplace("A", Formula::atom("B"));
  swap.bindings.emplace("B", Formula::atom("A"));
  CHECK(substitute(parse_formula("A->B"), swap).str() == "B->A");
  CHECK(substitute(parse_formula("A->A->B"), swap).str() == "B->B->A");

  Substitution none;
  CHECK(substitute(xi(4), none) == xi(4));
}

TEST_CASE("xi_shift lifts xi(i) to xi(i+1)") {
  for (int i = 1; i <= 8; ++i) {
    Formula lifted = substitute(xi(i), xi_shift(i));
    CHECK(lifted == xi(i + 1));
    CHECK(lifted == chi(Formula::atom("D" + std::to_string(i + 1)), xi(i)));
  }
}

TEST_CASE("xi(i+1) contains xi(i) as a subformula") {
  for (int i = 1; i <= 6; ++i) {
    CHECK(contains_subformula(xi(i + 1), xi(i)));
    CHECK(contains_subformula(phi(i), xi(i)));
    CHECK_FALSE(contains_subformula(xi(i), xi(i + 1)));
  }
}

TEST_CASE("structural order is total and consistent") {
  FormulaOrder lt;
  Formula a = Formula::atom("A");
  Formula b = Formula::atom("B");
  Formula ab = Formula::implies(a, b);
  CHECK(lt(a, b));
  CHECK_FALSE(lt(b, a));
  CHECK(lt(a, ab));      // atoms before implications
  CHECK_FALSE(lt(ab, a));
  CHECK_FALSE(lt(a, a));
  CHECK(lt(ab, Formula::implies(b, a)));
}
