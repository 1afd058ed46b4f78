// Acceptance suite: one line per criterion, PASS/FAIL plus measured detail.
// Exit status is the number of failed criteria.
//
// Budget knob: MIMPL_STRETCH_SECONDS caps the long exhaustive searches
// (default 600). A search that hits the budget reports itself truncated and
// the criterion stays honest about what was certified; a truncated
// refutation is inconclusive, not a failure. Finding a proof below the
// claimed assumption floor is a failure no budget can excuse.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "mimpl/constructions.hpp"
#include "mimpl/kripke.hpp"
#include "mimpl/nd.hpp"
#include "mimpl/nd_search.hpp"
#include "mimpl/sequent.hpp"

using namespace mimpl;

namespace {

int failures = 0;

void report(const char* name, bool ok, const std::string& detail) {
  std::printf("%s  %-28s %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::chrono::seconds stretch_budget() {
  if (const char* s = std::getenv("MIMPL_STRETCH_SECONDS")) {
    long v = std::atol(s);
    if (v > 0) return std::chrono::seconds(v);
  }
  return std::chrono::seconds(600);
}

std::uint64_t census_total(const CensusEntry& e) {
  std::uint64_t total = e.open_count;
  for (const auto& [l, c] : e.discharged_by) {
    (void)l;
    total += c;
  }
  return total;
}

Formula random_formula(std::mt19937_64& rng, int arrows, const std::vector<std::string>& pool) {
  if (arrows == 0) return Formula::atom(pool[rng() % pool.size()]);
  int left = int(rng() % std::uint64_t(arrows));
  return Formula::implies(random_formula(rng, left, pool),
                          random_formula(rng, arrows - 1 - left, pool));
}

// Arbitrary checkable proof of `goal` (leaves may stay open).
Proof random_proof(std::mt19937_64& rng, Formula goal, int depth, int* label_counter) {
  int pick = int(rng() % 4);
  if (depth <= 0 || pick == 0) return Proof::assume(goal);
  if (pick == 1 && goal.is_implication())
    return Proof::intro(++*label_counter, goal.antecedent(),
                        random_proof(rng, goal.consequent(), depth - 1, label_counter));
  std::vector<std::string> pool{"A", "B", "C"};
  Formula alpha = random_formula(rng, int(rng() % 3), pool);
  return Proof::elim(random_proof(rng, alpha, depth - 1, label_counter),
                     random_proof(rng, Formula::implies(alpha, goal), depth - 1, label_counter));
}

// 1. The constructed normal proofs: closed, normal, and the assumption
//    census of the scheme instance is exactly 2^n under one discharge.
void criterion_census() {
  const int kMaxN = 10;
  bool ok = true;
  std::string detail;
  for (int n = 1; n <= kMaxN && ok; ++n) {
    Proof p = build_phi_proof(n);
    Judgement j = check(p, LogicMode::minimal);
    auto census = assumption_census(p);
    const CensusEntry& entry = census.at(xi(n));
    std::uint64_t expect = std::uint64_t(1) << n;
    if (j.conclusion != phi(n) || !j.open.empty() || !is_normal(p) ||
        census_total(entry) != expect || entry.discharged_by.size() != 1) {
      ok = false;
      detail = "n=" + std::to_string(n) + " census " + std::to_string(census_total(entry)) +
               " != " + std::to_string(expect);
    }
  }
  if (ok) {
    std::uint64_t leaves = census_total(assumption_census(build_phi_proof(10)).at(xi(10)));
    ok = leaves >= 1024;
    detail = "n=1..10 closed+normal, census 2^n, n=10 scheme leaves " + std::to_string(leaves);
  }
  report("exponential-normal-proofs", ok, detail);
}

// 2. Assumption floor by exhaustive search: phi(1) refuted at cap 1 and
//    proved at cap 2; phi(2) refuted at caps up to 3 and proved at cap 4.
//    A truncated refutation is reported, not failed; a proof below the
//    floor fails outright.
void criterion_floor() {
  SearchBudget per_run;
  per_run.assumption_cap = 1;
  per_run.node_cap = std::uint64_t(1) << 28;
  per_run.time_cap = stretch_budget();

  MinAssumptions m1 = min_assumption_count(phi(1), 4, per_run);
  bool ok = m1.count == 2 && m1.certified;
  std::string detail = "phi(1) floor " + (m1.count ? std::to_string(*m1.count) : "none") +
                       (m1.certified ? " certified" : " uncertified");

  MinAssumptions m2 = min_assumption_count(phi(2), 6, per_run);
  if (m2.count && *m2.count < 4) {
    ok = false;
    detail += "; phi(2) proof below floor at cap " + std::to_string(*m2.count);
  } else if (m2.count == 4 && m2.certified) {
    detail += "; phi(2) floor 4 certified";
  } else if (m2.truncated) {
    detail += "; phi(2) truncated within budget, floor unconfirmed";
  } else {
    ok = false;
    detail += "; phi(2) floor missed";
  }
  report("assumption-floor-search", ok, detail);
}

// 3. The classical proofs: one scheme assumption and affine node growth.
//    The affine coefficients are taken from n=1,2 and must fit n=3..10.
void criterion_classical() {
  bool ok = true;
  std::string detail;
  std::uint64_t size1 = dag_stats(build_phi_classical(1)).tree_nodes;
  std::uint64_t size2 = dag_stats(build_phi_classical(2)).tree_nodes;
  std::uint64_t slope = size2 - size1;
  std::uint64_t base = size1 - slope;
  for (int n = 1; n <= 10 && ok; ++n) {
    Proof p = build_phi_classical(n);
    Judgement j = check(p, LogicMode::classical);
    std::uint64_t size = dag_stats(p).tree_nodes;
    std::uint64_t expect = base + slope * std::uint64_t(n);
    std::uint64_t census = census_total(assumption_census(p).at(xi(n)));
    if (j.conclusion != phi(n) || !j.open.empty() || census != 1 || size != expect) {
      ok = false;
      detail = "n=" + std::to_string(n) + " size " + std::to_string(size) + " expected " +
               std::to_string(expect) + ", census " + std::to_string(census);
    }
  }
  if (ok)
    detail = "n=1..10 closed, census 1, size " + std::to_string(slope) + "n+" +
             std::to_string(base);
  report("linear-classical-proofs", ok, detail);
}

// 4. The two sequent variants separate on the family: the weak one refutes
//    phi(1) and phi(2) exhaustively, the strong one proves both.
void criterion_variants() {
  SequentLimits lim;
  lim.node_cap = std::uint64_t(1) << 26;
  lim.time_cap = stretch_budget();
  bool ok = true;
  std::string detail;
  for (int n = 1; n <= 2 && ok; ++n) {
    SequentProveResult weak = prove(Sequent::make({}, phi(n)), SeqVariant::weak, lim);
    SequentProveResult strong = prove(Sequent::make({}, phi(n)), SeqVariant::strong, lim);
    if (weak.proof || !weak.exhausted) {
      ok = false;
      detail = "weak search did not exhaust on phi(" + std::to_string(n) + ")";
    } else if (!strong.proof || !check_sequent_proof(*strong.proof).ok) {
      ok = false;
      detail = "strong search missed phi(" + std::to_string(n) + ")";
    } else {
      detail += (n > 1 ? "; " : "") + std::string("phi(") + std::to_string(n) + ") weak " +
                std::to_string(weak.nodes) + "n/strong " + std::to_string(strong.nodes) + "n";
    }
  }
  report("variant-separation", ok, detail);
}

// 5. Prove-or-refute on a seeded random sample, cross-checked semantically:
//    proved formulas hold in every sampled model, certified counter-models
//    falsify, and Peirce's formula gets its two-world chain.
void criterion_prove_or_refute() {
  const int kFormulas = 200;
  const int kModels = 100;
  const int kMaxArrows = 8;
  std::vector<std::string> pool{"A", "B", "C"};

  std::mt19937_64 rng(6021023);
  std::vector<KripkeModel> models;
  for (int i = 0; i < kModels; ++i) models.push_back(random_model(rng(), 1 + int(rng() % 6), pool));

  SequentLimits lim;
  lim.node_cap = std::uint64_t(1) << 22;
  lim.time_cap = std::chrono::seconds(10);

  int proved = 0, refuted = 0, uncertified = 0, truncated = 0;
  bool ok = true;
  std::string detail;
  for (int i = 0; i < kFormulas && ok; ++i) {
    Formula f = random_formula(rng, 1 + int(rng() % kMaxArrows), pool);
    SequentProveResult r = prove(Sequent::make({}, f), SeqVariant::strong, lim);
    if (r.proof) {
      ++proved;
      if (!check_sequent_proof(*r.proof).ok) {
        ok = false;
        detail = "invalid proof for " + f.str();
        break;
      }
      for (const KripkeModel& m : models) {
        if (!valid_in(m, f)) {
          ok = false;
          detail = "proved formula falsified: " + f.str();
          break;
        }
      }
    } else if (r.exhausted) {
      ExtractionResult ex = extract_countermodel(*r.trace);
      if (ex.model) {
        ++refuted;
        if (valid_in(*ex.model, f)) {
          ok = false;
          detail = "certified model does not falsify " + f.str();
        }
      } else {
        ++uncertified;
      }
    } else {
      ++truncated;
    }
  }

  if (ok) {
    SequentProveResult pr =
        prove(Sequent::make({}, parse_formula("((A->B)->A)->A")), SeqVariant::strong, lim);
    ExtractionResult ex = extract_countermodel(*pr.trace);
    if (!ex.model || ex.model->world_count() != 2 || !ex.model->valuation(0).empty() ||
        ex.model->valuation(1) != std::set<std::string>{"A"} ||
        valid_in(*ex.model, parse_formula("((A->B)->A)->A"))) {
      ok = false;
      detail = "Peirce counter-model not the two-world chain";
    } else {
      detail = std::to_string(proved) + " proved, " + std::to_string(refuted) + " refuted, " +
               std::to_string(uncertified) + " uncertified, " + std::to_string(truncated) +
               " truncated; no contradictions";
    }
  }
  report("random-prove-or-refute", ok, detail);
}

// 6. Substitution stability: the scheme shift maps each family stage to the
//    next, and substitution preserves judgement shape and normality on the
//    construction proofs and on random proofs.
void criterion_substitution() {
  bool ok = true;
  std::string detail;
  for (int i = 1; i <= 8 && ok; ++i) {
    if (!(substitute(xi(i), xi_shift(i)) == xi(i + 1))) {
      ok = false;
      detail = "shift failed at stage " + std::to_string(i);
    }
  }

  for (int n = 1; n <= 8 && ok; ++n) {
    Proof p = build_phi_proof(n);
    Substitution s = xi_shift(n);
    Proof q = substitute_proof(p, s);
    Judgement jp = check(p, LogicMode::minimal);
    Judgement jq = check(q, LogicMode::minimal);
    if (!(jq.conclusion == substitute(jp.conclusion, s)) || !jq.open.empty() ||
        !is_normal(q) || dag_stats(p).tree_nodes != dag_stats(q).tree_nodes) {
      ok = false;
      detail = "substitution broke the stage-" + std::to_string(n) + " construction";
    }
  }

  const int kProofs = 500;
  std::mt19937_64 rng(40351);
  std::vector<std::string> pool{"A", "B", "C"};
  int labels = 0;
  for (int t = 0; t < kProofs && ok; ++t) {
    Formula goal = random_formula(rng, 1 + int(rng() % 4), pool);
    Proof p = random_proof(rng, goal, 4, &labels);
    Substitution s;
    s.bindings.emplace("A", random_formula(rng, int(rng() % 3), pool));
    s.bindings.emplace("B", random_formula(rng, int(rng() % 3), pool));
    Proof q = substitute_proof(p, s);
    Judgement jp = check(p, LogicMode::minimal);
    Judgement jq = check(q, LogicMode::minimal);
    if (!(jq.conclusion == substitute(jp.conclusion, s)) ||
        jq.open.size() > jp.open.size() ||  // substitution may merge open entries
        is_normal(p) != is_normal(q) ||
        dag_stats(p).tree_nodes != dag_stats(q).tree_nodes) {
      ok = false;
      detail = "substitution broke proof " + std::to_string(t);
    }
  }
  if (ok)
    detail = "shift exact for stages 1..8, construction proofs and " + std::to_string(kProofs) +
             " random proofs stable";
  report("substitution-stability", ok, detail);
}

// 7. Semantics invariants: along the order, satisfaction never decays, and
//    every sampled formula holds in the one-world model where every atom is
//    true (the language has no way to state falsity).
void criterion_persistence() {
  const int kSamples = 10000;
  std::mt19937_64 rng(271828);
  std::vector<std::string> pool{"A", "B", "C"};
  KripkeModel top(1, {}, {{0, {"A", "B", "C"}}});
  int checked = 0;
  bool ok = true;
  std::string detail;
  for (int t = 0; t < kSamples && ok; ++t) {
    KripkeModel m = random_model(rng(), 1 + int(rng() % 6), pool);
    Formula f = random_formula(rng, int(rng() % 8), pool);
    if (!satisfies(top, 0, f)) {
      ok = false;
      detail = "all-atoms-true world rejects " + f.str();
      break;
    }
    for (int i = 0; i < m.world_count() && ok; ++i) {
      for (int j = 0; j < m.world_count(); ++j) {
        if (m.leq(i, j) && satisfies(m, i, f) && !satisfies(m, j, f)) {
          ok = false;
          detail = "persistence broken on sample " + std::to_string(t);
          break;
        }
        ++checked;
      }
    }
  }
  if (ok)
    detail = std::to_string(kSamples) +
             " samples persistent and satisfiable at the all-true world, " +
             std::to_string(checked) + " pairs";
  report("persistence", ok, detail);
}

// 8. Sharing: the unfolded proof tree doubles with n while the number of
//    distinct subproofs stays quadratically bounded, with the constant
//    measured on n<=3.
void criterion_sharing() {
  std::uint64_t c = 0;
  for (int n = 1; n <= 3; ++n) {
    DagStats st = dag_stats(build_phi_proof(n));
    std::uint64_t bound = (st.distinct_subproofs + std::uint64_t(n) * n - 1) / (std::uint64_t(n) * n);
    c = std::max(c, bound);
  }
  bool ok = true;
  std::string detail;
  for (int n = 1; n <= 10 && ok; ++n) {
    DagStats st = dag_stats(build_phi_proof(n));
    if (st.tree_nodes < (std::uint64_t(1) << n) || st.distinct_subproofs > c * n * n) {
      ok = false;
      detail = "n=" + std::to_string(n) + " tree " + std::to_string(st.tree_nodes) + " distinct " +
               std::to_string(st.distinct_subproofs);
    }
  }
  if (ok) {
    DagStats st = dag_stats(build_phi_proof(10));
    detail = "constant " + std::to_string(c) + ", n=10 tree " + std::to_string(st.tree_nodes) +
             " vs distinct " + std::to_string(st.distinct_subproofs);
  }
  report("dag-compression", ok, detail);
}

}  // namespace

int main() {
  criterion_census();
  criterion_floor();
  criterion_classical();
  criterion_variants();
  criterion_prove_or_refute();
  criterion_substitution();
  criterion_persistence();
  criterion_sharing();
  return failures;
}
