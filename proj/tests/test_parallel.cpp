#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "mimpl/constructions.hpp"
#include "mimpl/kripke.hpp"

using namespace mimpl;

namespace {

Formula random_formula(std::mt19937_64& rng, int arrows, const std::vector<std::string>& pool) {
  if (arrows == 0) return Formula::atom(pool[rng() % pool.size()]);
  int left = int(rng() % std::uint64_t(arrows));
  return Formula::implies(random_formula(rng, left, pool),
                          random_formula(rng, arrows - 1 - left, pool));
}

}  // namespace

TEST_CASE("batch validity: parallel kernel is bit-identical to the serial one") {
  std::mt19937_64 rng(90125);
  std::vector<std::string> pool{"A", "B", "C", "D"};
  std::vector<KripkeModel> models;
  for (int i = 0; i < 128; ++i) models.push_back(random_model(rng(), 1 + int(rng() % 8), pool));

  for (int trial = 0; trial < 40; ++trial) {
    Formula f = random_formula(rng, int(rng() % 10), pool);
    CHECK(valid_in_each(models, f, Exec::serial) == valid_in_each(models, f, Exec::parallel));
  }
  // The family formulas, including a large one.
  for (int n : {1, 2, 5}) {
    CHECK(valid_in_each(models, phi(n), Exec::serial) ==
          valid_in_each(models, phi(n), Exec::parallel));
  }
}

TEST_CASE("counter-model search: parallel returns the serial answer") {
  std::mt19937_64 rng(3553);
  std::vector<std::string> pool{"A", "B"};
  int falsified = 0;
  for (int trial = 0; trial < 60; ++trial) {
    Formula f = random_formula(rng, 1 + int(rng() % 5), pool);
    auto s = find_countermodel(f, 3, Exec::serial);
    auto p = find_countermodel(f, 3, Exec::parallel);
    REQUIRE(s.has_value() == p.has_value());
    if (s) {
      ++falsified;
      REQUIRE(s->world_count() == p->world_count());
      for (int i = 0; i < s->world_count(); ++i) {
        CHECK(s->valuation(i) == p->valuation(i));
        for (int j = 0; j < s->world_count(); ++j) CHECK(s->leq(i, j) == p->leq(i, j));
      }
      CHECK_FALSE(valid_in(*s, f));
    }
  }
  CHECK(falsified > 10);  // the sample is not vacuous
}

TEST_CASE("mask evaluator matches the reference evaluator at scale") {
  std::mt19937_64 rng(1471);
  std::vector<std::string> pool{"A", "B", "C"};
  for (int trial = 0; trial < 500; ++trial) {
    KripkeModel m = random_model(rng(), 1 + int(rng() % 10), pool);
    Formula f = random_formula(rng, int(rng() % 9), pool);
    for (int w = 0; w < m.world_count(); ++w)
      CHECK(satisfies(m, w, f) == satisfies_reference(m, w, f));
  }
}
