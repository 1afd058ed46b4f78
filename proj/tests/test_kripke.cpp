#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "mimpl/kripke.hpp"

using namespace mimpl;

namespace {

KripkeModel two_chain_A() {
  // world 0 (nothing) below world 1 ({A})
  return KripkeModel(2, {{0, 1}}, {{0, {}}, {1, {"A"}}});
}

Formula peirce_formula() { return parse_formula("((A->B)->A)->A"); }

// Deterministic pool of sample formulas with <= `max_arrows` arrows over pool
// atoms, built from a seeded generator.
Formula random_formula(std::mt19937_64& rng, int arrows, const std::vector<std::string>& pool) {
  if (arrows == 0) return Formula::atom(pool[rng() % pool.size()]);
  int left = int(rng() % std::uint64_t(arrows));
  return Formula::implies(random_formula(rng, left, pool),
                          random_formula(rng, arrows - 1 - left, pool));
}

}  // namespace

TEST_CASE("constructor closes the order and validates") {
  // 0 -> 1 -> 2 given as generators; closure must add 0 -> 2.
  KripkeModel m(3, {{0, 1}, {1, 2}}, {});
  CHECK(m.leq(0, 2));
  CHECK(m.leq(0, 0));
  CHECK_FALSE(m.leq(2, 0));

  CHECK_THROWS_AS(KripkeModel(2, {{0, 1}, {1, 0}}, {}), ModelError);          // cycle
  CHECK_THROWS_AS(KripkeModel(2, {{0, 2}}, {}), ModelError);                  // bad index
  CHECK_THROWS_AS(KripkeModel(0, {}, {}), ModelError);                        // no worlds
  CHECK_THROWS_AS(KripkeModel(65, {}, {}), ModelError);                       // too many
  CHECK_THROWS_AS(KripkeModel(2, {{0, 1}}, {{0, {"A"}}, {1, {}}}), ModelError);  // not monotone
  CHECK_THROWS_AS(KripkeModel(1, {}, {{3, {"A"}}}), ModelError);              // valuation index
}

TEST_CASE("two-world chain falsifies Peirce's formula at the root") {
  KripkeModel m = two_chain_A();
  Formula p = peirce_formula();
  CHECK_FALSE(satisfies(m, 0, p));
  CHECK(satisfies(m, 1, p));  // A holds there
  CHECK_FALSE(valid_in(m, p));

  // The same, from the naive reference evaluator.
  CHECK_FALSE(satisfies_reference(m, 0, p));
  CHECK(satisfies_reference(m, 1, p));
}

TEST_CASE("no one-world or discrete model falsifies Peirce's formula") {
  Formula p = peirce_formula();
  // One world: classical truth tables; Peirce is a classical tautology.
  for (int bits = 0; bits < 4; ++bits) {
    std::set<std::string> v;
    if (bits & 1) v.insert("A");
    if (bits & 2) v.insert("B");
    KripkeModel m(1, {}, {{0, v}});
    CHECK(valid_in(m, p));
  }
  // Two incomparable worlds: still pointwise classical.
  KripkeModel m(2, {}, {{0, {}}, {1, {"A"}}});
  CHECK(valid_in(m, p));
}

TEST_CASE("mask evaluator agrees with the reference evaluator") {
  std::mt19937_64 rng(20211);
  std::vector<std::string> pool{"A", "B", "C"};
  for (int trial = 0; trial < 300; ++trial) {
    KripkeModel m = random_model(rng(), 1 + int(rng() % 5), pool);
    Formula f = random_formula(rng, int(rng() % 7), pool);
    for (int w = 0; w < m.world_count(); ++w)
      CHECK(satisfies(m, w, f) == satisfies_reference(m, w, f));
  }
}

TEST_CASE("persistence: satisfaction is monotone along the order") {
  std::mt19937_64 rng(777);
  std::vector<std::string> pool{"A", "B", "C"};
  for (int trial = 0; trial < 200; ++trial) {
    KripkeModel m = random_model(rng(), 1 + int(rng() % 5), pool);
    Formula f = random_formula(rng, int(rng() % 7), pool);
    for (int i = 0; i < m.world_count(); ++i)
      for (int j = 0; j < m.world_count(); ++j)
        if (m.leq(i, j) && satisfies(m, i, f)) CHECK(satisfies(m, j, f));
  }
}

TEST_CASE("valid_in_each: parallel kernel equals the serial loop") {
  std::mt19937_64 rng(5150);
  std::vector<std::string> pool{"A", "B", "C"};
  std::vector<KripkeModel> models;
  for (int i = 0; i < 64; ++i) models.push_back(random_model(rng(), 1 + int(rng() % 6), pool));
  for (int trial = 0; trial < 20; ++trial) {
    Formula f = random_formula(rng, int(rng() % 8), pool);
    auto serial = valid_in_each(models, f, Exec::serial);
    auto parallel = valid_in_each(models, f, Exec::parallel);
    CHECK(serial == parallel);
  }
}

TEST_CASE("find_countermodel returns the canonical two-chain for Peirce") {
  auto m = find_countermodel(peirce_formula(), 4);
  REQUIRE(m.has_value());
  CHECK(m->world_count() == 2);
  CHECK(m->leq(0, 1));
  CHECK(m->valuation(0).empty());
  CHECK(m->valuation(1) == std::set<std::string>{"A"});
  CHECK_FALSE(valid_in(*m, peirce_formula()));
}

TEST_CASE("find_countermodel is exhaustive on small bounds") {
  // Provable formulas have no counter-model at any size.
  CHECK_FALSE(find_countermodel(parse_formula("A->A"), 4).has_value());
  CHECK_FALSE(find_countermodel(parse_formula("A->B->A"), 4).has_value());
  CHECK_FALSE(find_countermodel(phi(1), 3).has_value());
  // A->B is falsified already by one world.
  auto m = find_countermodel(parse_formula("A->B"), 4);
  REQUIRE(m.has_value());
  CHECK(m->world_count() == 1);
  CHECK(m->valuation(0) == std::set<std::string>{"A"});
}

TEST_CASE("find_countermodel: parallel agrees with serial") {
  const char* samples[] = {"((A->B)->A)->A", "A->B", "(A->B)->B",
                           "((A->B)->B)->((B->A)->A)", "A->A"};
  for (const char* s : samples) {
    Formula f = parse_formula(s);
    auto serial = find_countermodel(f, 3, Exec::serial);
    auto parallel = find_countermodel(f, 3, Exec::parallel);
    REQUIRE(serial.has_value() == parallel.has_value());
    if (serial) {
      CHECK(serial->world_count() == parallel->world_count());
      for (int i = 0; i < serial->world_count(); ++i) {
        CHECK(serial->valuation(i) == parallel->valuation(i));
        for (int j = 0; j < serial->world_count(); ++j)
          CHECK(serial->leq(i, j) == parallel->leq(i, j));
      }
    }
  }
}

TEST_CASE("random_model is deterministic per seed") {
  std::vector<std::string> pool{"A", "B"};
  KripkeModel a = random_model(42, 5, pool);
  KripkeModel b = random_model(42, 5, pool);
  REQUIRE(a.world_count() == b.world_count());
  for (int i = 0; i < a.world_count(); ++i) {
    CHECK(a.valuation(i) == b.valuation(i));
    for (int j = 0; j < a.world_count(); ++j) CHECK(a.leq(i, j) == b.leq(i, j));
  }
}

TEST_CASE("model JSON round trip") {
  KripkeModel m = two_chain_A();
  KripkeModel back = load_model(save_model(m));
  CHECK(back.world_count() == 2);
  CHECK(back.leq(0, 1));
  CHECK(back.valuation(1) == std::set<std::string>{"A"});

  CHECK_THROWS_AS(load_model("not json"), ModelError);
  CHECK_THROWS_AS(load_model("{}"), ModelError);
  CHECK_THROWS_AS(load_model(R"({"worlds": 2, "order": [[0,1],[1,0]]})"), ModelError);
  CHECK_THROWS_AS(load_model(R"({"worlds": 1, "valuation": {"zero": []}})"), ModelError);
  CHECK_THROWS_AS(
      load_model(R"({"worlds": 2, "order": [[0,1]], "valuation": {"0": ["A"], "1": []}})"),
      ModelError);
}
