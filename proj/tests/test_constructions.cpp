#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mimpl/constructions.hpp"
#include "mimpl/nd.hpp"

using namespace mimpl;

TEST_CASE("sigma proves x from two copies of the scheme instance") {
  Formula a = Formula::atom("A");
  Formula x = Formula::atom("X");
  Proof s = build_sigma(a, x);
  Judgement j = check(s, LogicMode::minimal);
  CHECK(j.conclusion == x);
  REQUIRE(j.open.size() == 1);
  CHECK(j.open.at(chi(a, x)) == 2);
  CHECK(is_normal(s));
  DagStats st = dag_stats(s);
  CHECK(st.tree_nodes == 10);
  CHECK(st.distinct_subproofs == 9);  // the scheme leaf is shared

  CHECK_THROWS_AS(build_sigma(Formula::implies(a, x), x), std::invalid_argument);
  CHECK_THROWS_AS(build_sigma(a, Formula::implies(a, x)), std::invalid_argument);
}

TEST_CASE("normal proofs of the family: closed, normal, exponential census") {
  for (int n = 1; n <= 10; ++n) {
    Proof p = build_phi_proof(n);
    Judgement j = check(p, LogicMode::minimal);
    CHECK(j.conclusion == phi(n));
    CHECK(j.open.empty());
    CHECK(is_normal(p));

    // Nothing stays open, and one label discharges all the xi(n) leaves.
    auto census = assumption_census(p);
    for (const auto& [f, e] : census) CHECK(e.open_count == 0);
    const CensusEntry& entry = census.at(xi(n));
    REQUIRE(entry.discharged_by.size() == 1);
    auto [label, count] = *entry.discharged_by.begin();
    CHECK(count == (std::uint64_t(1) << n));
    CHECK(label == 3 * n + 1);  // labels are allocated in construction order
  }
}

TEST_CASE("normal proofs of the family: tree doubles, dag grows linearly") {
  for (int n = 1; n <= 10; ++n) {
    DagStats st = dag_stats(build_phi_proof(n));
    CHECK(st.tree_nodes == 18 * (std::uint64_t(1) << (n - 1)) - 7);
    CHECK(st.distinct_subproofs == std::uint64_t(8) * n + 2);
  }
}

TEST_CASE("Peirce block proves its instance in five nodes") {
  Formula c = Formula::atom("C");
  Formula d = Formula::atom("D");
  Proof pe = build_peirce_proof(c, d);
  Judgement j = check(pe, LogicMode::classical);
  CHECK(j.conclusion == parse_formula("((C->D)->C)->C"));
  CHECK(j.open.empty());
  DagStats st = dag_stats(pe);
  CHECK(st.tree_nodes == 5);
  CHECK(st.distinct_subproofs == 5);
  CHECK_THROWS_AS(check(pe, LogicMode::minimal), CheckError);
}

TEST_CASE("classical proofs of the family: one assumption, linear size") {
  for (int n = 1; n <= 10; ++n) {
    Proof p = build_phi_classical(n);
    Judgement j = check(p, LogicMode::classical);
    CHECK(j.conclusion == phi(n));
    CHECK(j.open.empty());
    CHECK_THROWS_AS(check(p, LogicMode::minimal), CheckError);

    auto census = assumption_census(p);
    const CensusEntry& entry = census.at(xi(n));
    CHECK(entry.open_count == 0);
    std::uint64_t discharged = 0;
    for (const auto& [l, c] : entry.discharged_by) discharged += c;
    CHECK(discharged == 1);

    DagStats st = dag_stats(p);
    CHECK(st.tree_nodes == std::uint64_t(6) * n + 2);
    CHECK(st.distinct_subproofs == st.tree_nodes);  // a chain, nothing repeats
  }
}

TEST_CASE("argument bounds are enforced") {
  CHECK_THROWS_AS(build_phi_proof(0), std::invalid_argument);
  CHECK_THROWS_AS(build_phi_classical(0), std::invalid_argument);
}
