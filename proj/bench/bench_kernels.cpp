// Benchmark: OpenMP kernels against the serial reference loops.
//
// Two kernels are measured: batch validity (valid_in_each) and exhaustive
// counter-model enumeration (find_countermodel). Each run checks that both
// execution modes produce identical results before any timing is reported;
// a mismatch exits nonzero. Timings are the minimum of --trials runs after
// one warmup.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "mimpl/formula.hpp"
#include "mimpl/kripke.hpp"

using namespace mimpl;

namespace {

double seconds_of(std::chrono::steady_clock::duration d) {
  return std::chrono::duration<double>(d).count();
}

template <typename F>
double time_best(int trials, F&& body) {
  body();  // warmup
  double best = 1e300;
  for (int t = 0; t < trials; ++t) {
    auto start = std::chrono::steady_clock::now();
    body();
    best = std::min(best, seconds_of(std::chrono::steady_clock::now() - start));
  }
  return best;
}

Formula random_formula(std::mt19937_64& rng, int arrows, const std::vector<std::string>& pool) {
  if (arrows == 0) return Formula::atom(pool[rng() % pool.size()]);
  int left = int(rng() % std::uint64_t(arrows));
  return Formula::implies(random_formula(rng, left, pool),
                          random_formula(rng, arrows - 1 - left, pool));
}

}  // namespace

int main(int argc, char** argv) {
  int model_count = 30000;
  int trials = 3;
  std::uint64_t seed = 0;
  if (const char* s = std::getenv("MIMPL_SEED")) seed = std::strtoull(s, nullptr, 10);

  CLI::App app{"Serial reference vs OpenMP kernels"};
  app.add_option("--models", model_count, "random models in the validity batch");
  app.add_option("--trials", trials, "timed repetitions (minimum is reported)");
  app.add_option("--seed", seed, "random seed (default: MIMPL_SEED or 0)");
  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
  std::printf("openmp threads: 1 (compiled without OpenMP)\n");
#endif
  std::printf("trials: %d, seed: %llu\n\n", trials, (unsigned long long)seed);

  std::mt19937_64 rng(seed);
  std::vector<std::string> pool{"A", "B", "C", "D1", "D2"};

  std::vector<KripkeModel> models;
  models.reserve(model_count);
  for (int i = 0; i < model_count; ++i)
    models.push_back(random_model(rng(), 1 + int(rng() % 6), pool));

  std::vector<Formula> formulas;
  for (int n = 1; n <= 12; ++n) formulas.push_back(phi(n));
  for (int i = 0; i < 8; ++i) formulas.push_back(random_formula(rng, 14, pool));

  std::printf("batch validity: %d models x %zu formulas\n", model_count, formulas.size());
  std::vector<char> serial_out, parallel_out;
  double t_serial = time_best(trials, [&] {
    for (Formula f : formulas) serial_out = valid_in_each(models, f, Exec::serial);
  });
  double t_parallel = time_best(trials, [&] {
    for (Formula f : formulas) parallel_out = valid_in_each(models, f, Exec::parallel);
  });
  for (Formula f : formulas) {
    if (valid_in_each(models, f, Exec::serial) != valid_in_each(models, f, Exec::parallel)) {
      std::fprintf(stderr, "MISMATCH on %s\n", f.str().c_str());
      return 1;
    }
  }
  std::printf("  serial   %.4fs\n  parallel %.4fs\n  speedup  %.2fx (results identical)\n\n",
              t_serial, t_parallel, t_serial / t_parallel);

  struct Case {
    const char* name;
    Formula f;
    int max_worlds;
  } cases[] = {
      {"peirce, <=5 worlds", parse_formula("((A->B)->A)->A"), 5},
      {"phi(1), <=5 worlds", phi(1), 5},
      {"phi(2), <=5 worlds", phi(2), 5},
  };
  for (const Case& c : cases) {
    std::printf("counter-model enumeration: %s\n", c.name);
    auto serial_model = find_countermodel(c.f, c.max_worlds, Exec::serial);
    auto parallel_model = find_countermodel(c.f, c.max_worlds, Exec::parallel);
    bool same = serial_model.has_value() == parallel_model.has_value() &&
                (!serial_model || save_model(*serial_model) == save_model(*parallel_model));
    if (!same) {
      std::fprintf(stderr, "MISMATCH on %s\n", c.name);
      return 1;
    }
    double s = time_best(trials, [&] { (void)find_countermodel(c.f, c.max_worlds, Exec::serial); });
    double p =
        time_best(trials, [&] { (void)find_countermodel(c.f, c.max_worlds, Exec::parallel); });
    std::printf("  outcome: %s\n", serial_model ? "falsified" : "no model in bound");
    std::printf("  serial   %.4fs\n  parallel %.4fs\n  speedup  %.2fx (results identical)\n\n", s,
                p, s / p);
  }
  return 0;
}
