// mimpl: command-line front end for the implicational-logic toolkit.
//
// Exit codes: 0 proved / success, 1 not proved or counter-model found,
// 2 usage or I/O error, 3 limits hit without a conclusive answer.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mimpl/constructions.hpp"
#include "mimpl/export.hpp"
#include "mimpl/formula.hpp"
#include "mimpl/kripke.hpp"
#include "mimpl/nd.hpp"
#include "mimpl/nd_search.hpp"
#include "mimpl/sequent.hpp"

namespace {

constexpr int kExitProved = 0;
constexpr int kExitRefuted = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInconclusive = 3;

// Family stages past this point print and serialise in the megabytes; the
// formula and proof objects themselves stay small, so only the text surface
// is capped.
constexpr int kGenLimit = 20;
constexpr int kProofJsonLimit = 8;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

// Accepts either a formula in the grammar or @path to read one from a file.
mimpl::Formula formula_arg(const std::string& arg) {
  if (!arg.empty() && arg[0] == '@') return mimpl::parse_formula(read_file(arg.substr(1)));
  return mimpl::parse_formula(arg);
}

// Family stages print as their short names; everything else prints raw.
std::string display_name(mimpl::Formula f) {
  for (int i = 1; i <= 16; ++i) {
    if (f == mimpl::xi(i)) return "xi(" + std::to_string(i) + ")";
    if (f == mimpl::phi(i)) return "phi(" + std::to_string(i) + ")";
  }
  return f.str();
}

std::uint64_t census_total(const mimpl::CensusEntry& e) {
  std::uint64_t total = e.open_count;
  for (const auto& [label, count] : e.discharged_by) {
    (void)label;
    total += count;
  }
  return total;
}

int recognize_phi(mimpl::Formula f, int limit) {
  for (int n = 1; n <= limit; ++n)
    if (f == mimpl::phi(n)) return n;
  return 0;
}

const char* outcome_tag(mimpl::TraceOutcome o) {
  switch (o) {
    case mimpl::TraceOutcome::failed: return "failed";
    case mimpl::TraceOutcome::pruned: return "pruned";
    case mimpl::TraceOutcome::truncated: return "truncated";
  }
  return "?";
}

const char* rule_tag(mimpl::SeqRule r) {
  switch (r) {
    case mimpl::SeqRule::axiom: return "axiom";
    case mimpl::SeqRule::right_intro: return "right-intro";
    case mimpl::SeqRule::left_weak: return "left-weak";
    case mimpl::SeqRule::left_strong: return "left-strong";
  }
  return "?";
}

void print_trace(const mimpl::TraceNode* t, int depth, int& budget) {
  if (!t || budget <= 0) return;
  if (--budget == 0) {
    std::cout << std::string(2 * depth, ' ') << "... (display budget reached)\n";
    return;
  }
  std::cout << std::string(2 * depth, ' ') << t->sequent.str() << "  [" << outcome_tag(t->outcome)
            << "]\n";
  for (const mimpl::TraceAttempt& a : t->attempts) {
    std::cout << std::string(2 * depth + 2, ' ') << "tried " << rule_tag(a.rule);
    if (a.principal) std::cout << " on " << a.principal->str();
    std::cout << "\n";
    for (std::size_t i = 0; i < a.premises.size(); ++i) {
      if (a.premises[i])
        print_trace(a.premises[i].get(), depth + 2, budget);
      else
        std::cout << std::string(2 * depth + 4, ' ') << "premise " << i + 1 << " proved\n";
    }
  }
}

struct ProveNdArgs {
  std::string goal;
  std::string mode = "minimal";
  std::uint32_t cap = 4;
  std::optional<std::uint64_t> nodes;
  std::optional<std::uint64_t> time_ms;
  std::string out;
  int phi_limit = 12;
};

int run_prove_nd(const ProveNdArgs& a) {
  mimpl::Formula goal = formula_arg(a.goal);
  bool minimal = a.mode == "minimal";

  if (int n = recognize_phi(goal, a.phi_limit); n > 0) {
    mimpl::Proof p = minimal ? mimpl::build_phi_proof(n) : mimpl::build_phi_classical(n);
    mimpl::DagStats st = mimpl::dag_stats(p);
    std::uint64_t census = census_total(mimpl::assumption_census(p).at(mimpl::xi(n)));
    std::cout << "proved (construction)\n"
              << "goal: phi(" << n << ")\n"
              << "scheme assumption census: " << census << "\n"
              << "tree nodes: " << st.tree_nodes << ", distinct subproofs: "
              << st.distinct_subproofs << "\n";
    if (!a.out.empty()) {
      if (n > kProofJsonLimit)
        throw std::runtime_error("proof JSON unfolds the tree; stage capped at " +
                                 std::to_string(kProofJsonLimit) + " for --out");
      write_output(a.out, mimpl::proof_to_json(p));
    }
    return kExitProved;
  }

  if (!minimal) {
    std::cerr << "error: classical proofs are constructed for the recognized family only; "
                 "search targets minimal normal proofs\n";
    return kExitUsage;
  }

  mimpl::SearchBudget budget;
  budget.assumption_cap = a.cap;
  if (a.nodes) budget.node_cap = *a.nodes;
  if (a.time_ms) budget.time_cap = std::chrono::milliseconds(*a.time_ms);
  mimpl::SearchResult r = mimpl::search_normal(goal, budget);

  if (r.proof) {
    std::cout << "proved (search)\n"
              << "goal: " << goal.str() << "\n"
              << "census cap: " << a.cap << ", nodes expanded: " << r.nodes_expanded
              << ", elapsed: " << r.elapsed.count() << "ms\n";
    if (!a.out.empty()) write_output(a.out, mimpl::proof_to_json(*r.proof));
    return kExitProved;
  }
  if (r.exhausted) {
    std::cout << "not proved (exhausted at census cap " << a.cap << ")\n"
              << "nodes expanded: " << r.nodes_expanded << ", elapsed: " << r.elapsed.count()
              << "ms\n";
    return kExitRefuted;
  }
  std::cout << "not proved (limits hit, inconclusive)\n"
            << "nodes expanded: " << r.nodes_expanded << ", elapsed: " << r.elapsed.count()
            << "ms\n";
  return kExitInconclusive;
}

int run_check_nd(const std::string& path, const std::string& mode) {
  mimpl::Proof p = mimpl::proof_from_json(read_file(path));
  bool minimal = mode == "minimal";
  std::optional<mimpl::Judgement> j;
  try {
    j = mimpl::check(p, minimal ? mimpl::LogicMode::minimal : mimpl::LogicMode::classical);
  } catch (const mimpl::CheckError& e) {
    std::cout << "invalid proof: " << e.what() << "\n";
    return kExitRefuted;
  }
  std::cout << "conclusion: " << j->conclusion.str() << "\n";
  if (j->open.empty()) {
    std::cout << "open assumptions: none\n";
  } else {
    std::cout << "open assumptions:\n";
    for (const auto& [f, count] : j->open)
      std::cout << "  " << display_name(f) << " x " << count << "\n";
  }
  if (minimal) std::cout << "normal: " << (mimpl::is_normal(p) ? "yes" : "no") << "\n";
  std::cout << "census:\n";
  for (const auto& [f, entry] : mimpl::assumption_census(p)) {
    std::cout << "  " << display_name(f) << ":";
    bool first = true;
    if (entry.open_count) {
      std::cout << " open " << entry.open_count;
      first = false;
    }
    for (const auto& [label, count] : entry.discharged_by) {
      std::cout << (first ? " " : ", ") << count << " @ label " << label;
      first = false;
    }
    std::cout << "\n";
  }
  return kExitProved;
}

struct ProveSeqArgs {
  std::string goal;
  std::string variant = "strong";
  bool countermodel = false;
  bool trace = false;
  std::optional<std::uint64_t> nodes;
  std::optional<std::uint64_t> time_ms;
  std::string out;
};

int run_prove_seq(const ProveSeqArgs& a) {
  mimpl::Sequent s = mimpl::Sequent::make({}, mimpl::parse_formula(a.goal));
  mimpl::SequentLimits limits;
  if (a.nodes) limits.node_cap = *a.nodes;
  if (a.time_ms) limits.time_cap = std::chrono::milliseconds(*a.time_ms);
  mimpl::SeqVariant v =
      a.variant == "weak" ? mimpl::SeqVariant::weak : mimpl::SeqVariant::strong;
  mimpl::SequentProveResult r = mimpl::prove(s, v, limits);

  if (r.proof) {
    std::cout << "proved\n"
              << "sequent: " << s.str() << "\n"
              << "variant: " << a.variant << ", nodes: " << r.nodes << ", elapsed: "
              << r.elapsed.count() << "ms\n";
    if (!a.out.empty()) write_output(a.out, mimpl::sequent_proof_to_json(*r.proof));
    return kExitProved;
  }

  if (!r.exhausted) {
    std::cout << "not proved (limits hit, inconclusive)\n"
              << "nodes: " << r.nodes << ", elapsed: " << r.elapsed.count() << "ms\n";
    if (a.countermodel)
      std::cout << "counter-model extraction needs an exhaustive trace; raise the limits\n";
    return kExitInconclusive;
  }

  std::cout << "not proved (search exhausted)\n"
            << "variant: " << a.variant << ", nodes: " << r.nodes << ", elapsed: "
            << r.elapsed.count() << "ms\n";
  if (a.trace) {
    int budget = 400;
    print_trace(r.trace->root.get(), 0, budget);
  }
  if (a.countermodel) {
    mimpl::ExtractionResult ex = mimpl::extract_countermodel(*r.trace);
    if (ex.model)
      std::cout << "counter-model certified, worlds: " << ex.model->world_count() << "\n"
                << mimpl::save_model(*ex.model) << "\n";
    else
      std::cout << ex.verdict << "\n";
  }
  return kExitRefuted;
}

int run_countermodel(const std::string& goal_text, int max_worlds) {
  mimpl::Formula goal = mimpl::parse_formula(goal_text);
  std::optional<mimpl::KripkeModel> m =
      mimpl::find_countermodel(goal, max_worlds, mimpl::Exec::serial);
  if (m) {
    std::cout << "counter-model found, worlds: " << m->world_count() << "\n"
              << mimpl::save_model(*m) << "\n";
    return kExitRefuted;
  }
  std::cout << "no counter-model with at most " << max_worlds << " worlds\n";
  return kExitProved;
}

int run_bench_lower(int n, std::uint32_t cap, std::uint64_t nodes, std::uint64_t time_ms,
                    std::uint64_t seed) {
  for (std::uint32_t c = 1; c <= cap; ++c) {
    mimpl::SearchBudget budget;
    budget.assumption_cap = c;
    budget.node_cap = nodes;
    budget.time_cap = std::chrono::milliseconds(time_ms);
    mimpl::SearchResult r = mimpl::search_normal(mimpl::phi(n), budget);
    nlohmann::json line = {
        {"formula", "phi(" + std::to_string(n) + ")"},
        {"cap", c},
        {"found", bool(r.proof)},
        {"exhausted", r.exhausted},
        {"nodes", r.nodes_expanded},
        {"elapsed_ms", r.elapsed.count()},
        {"seed", seed},
    };
    std::cout << line.dump() << "\n";
    if (r.proof) break;
  }
  return kExitProved;
}

int run_bench_growth(int n_max) {
  for (int n = 1; n <= n_max; ++n) {
    mimpl::Proof p = mimpl::build_phi_proof(n);
    mimpl::DagStats st = mimpl::dag_stats(p);
    std::uint64_t census = census_total(mimpl::assumption_census(p).at(mimpl::xi(n)));
    std::uint64_t classical = mimpl::dag_stats(mimpl::build_phi_classical(n)).tree_nodes;
    nlohmann::json line = {
        {"n", n},
        {"census", census},
        {"tree_nodes", st.tree_nodes},
        {"distinct_subproofs", st.distinct_subproofs},
        {"classical_nodes", classical},
    };
    std::cout << line.dump() << "\n";
  }
  return kExitProved;
}

int run_export(const std::string& path, const std::string& format, bool shared,
               const std::string& out) {
  if (shared && format == "latex") {
    std::cerr << "error: --shared applies to dot output only\n";
    return kExitUsage;
  }
  std::string text = read_file(path);
  nlohmann::json j = nlohmann::json::parse(text);
  std::string rendered;
  if (j.is_object() && j.contains("kind")) {
    mimpl::Proof p = mimpl::proof_from_json(text);
    rendered = format == "latex" ? mimpl::nd_to_latex(p) : mimpl::nd_to_dot(p, shared);
  } else if (j.is_object() && j.contains("rule")) {
    mimpl::SequentProof p = mimpl::sequent_proof_from_json(text);
    rendered = format == "latex" ? mimpl::sequent_to_latex(p) : mimpl::sequent_to_dot(p, shared);
  } else {
    std::cerr << "error: " << path << " is neither a deduction nor a sequent proof\n";
    return kExitUsage;
  }
  write_output(out, rendered);
  return kExitProved;
}

std::uint64_t default_seed() {
  if (const char* s = std::getenv("MIMPL_SEED")) return std::strtoull(s, nullptr, 10);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Toolkit for purely implicational minimal logic"};
  app.require_subcommand(1);

  std::uint64_t seed = default_seed();
  app.add_option("--seed", seed, "Random seed (default: MIMPL_SEED or 0)");

  int rc = kExitProved;

  auto* gen = app.add_subcommand("gen", "Print a formula of the family");
  gen->require_subcommand(1);
  int gen_n = 1;
  auto* gen_phi = gen->add_subcommand("phi", "phi(n) = xi(n) -> C");
  gen_phi->add_option("n", gen_n, "stage")->required()->check(CLI::Range(1, kGenLimit));
  gen_phi->callback([&] { std::cout << mimpl::phi(gen_n).str() << "\n"; });
  int gen_i = 1;
  auto* gen_xi = gen->add_subcommand("xi", "xi(i), the nested Peirce-shaped scheme");
  gen_xi->add_option("i", gen_i, "stage")->required()->check(CLI::Range(1, kGenLimit));
  gen_xi->callback([&] { std::cout << mimpl::xi(gen_i).str() << "\n"; });

  auto* prove = app.add_subcommand("prove", "Prove a formula");
  prove->require_subcommand(1);

  ProveNdArgs nd_args;
  std::uint64_t nd_nodes = 0, nd_time = 0;
  auto* prove_nd = prove->add_subcommand("nd", "Natural deduction: construction or search");
  prove_nd->add_option("formula", nd_args.goal, "formula text or @file")->required();
  prove_nd->add_option("--mode", nd_args.mode, "minimal|classical")
      ->check(CLI::IsMember({"minimal", "classical"}));
  prove_nd->add_option("--cap", nd_args.cap, "per-formula assumption census cap");
  auto* nd_nodes_opt = prove_nd->add_option("--nodes", nd_nodes, "search node cap");
  auto* nd_time_opt = prove_nd->add_option("--time", nd_time, "search time cap, ms");
  prove_nd->add_option("--out", nd_args.out, "write the proof JSON here");
  prove_nd->add_option("--phi-limit", nd_args.phi_limit,
                       "recognize family stages up to this bound (0 disables)")
      ->check(CLI::Range(0, kGenLimit));
  prove_nd->callback([&] {
    if (*nd_nodes_opt) nd_args.nodes = nd_nodes;
    if (*nd_time_opt) nd_args.time_ms = nd_time;
    rc = run_prove_nd(nd_args);
  });

  ProveSeqArgs seq_args;
  std::uint64_t seq_nodes = 0, seq_time = 0;
  auto* prove_seq = prove->add_subcommand("seq", "Sequent-calculus backward search");
  prove_seq->add_option("formula", seq_args.goal, "formula text")->required();
  prove_seq->add_option("--variant", seq_args.variant, "weak|strong")
      ->check(CLI::IsMember({"weak", "strong"}));
  prove_seq->add_flag("--countermodel", seq_args.countermodel,
                      "on exhaustive failure, extract and verify a counter-model");
  prove_seq->add_flag("--trace", seq_args.trace, "print the failure trace");
  auto* seq_nodes_opt = prove_seq->add_option("--nodes", seq_nodes, "search node cap");
  auto* seq_time_opt = prove_seq->add_option("--time", seq_time, "search time cap, ms");
  prove_seq->add_option("--out", seq_args.out, "write the sequent proof JSON here");
  prove_seq->callback([&] {
    if (*seq_nodes_opt) seq_args.nodes = seq_nodes;
    if (*seq_time_opt) seq_args.time_ms = seq_time;
    rc = run_prove_seq(seq_args);
  });

  auto* check = app.add_subcommand("check", "Check a stored proof");
  check->require_subcommand(1);
  std::string check_path, check_mode = "minimal";
  auto* check_nd = check->add_subcommand("nd", "judgement, normality, census");
  check_nd->add_option("proof", check_path, "proof JSON file")->required();
  check_nd->add_option("--mode", check_mode, "minimal|classical")
      ->check(CLI::IsMember({"minimal", "classical"}));
  check_nd->callback([&] { rc = run_check_nd(check_path, check_mode); });

  std::string cm_formula;
  int cm_worlds = 4;
  auto* cm = app.add_subcommand("countermodel", "Exhaustive bounded counter-model search");
  cm->add_option("formula", cm_formula, "formula text")->required();
  cm->add_option("--max-worlds", cm_worlds, "largest model size to try")
      ->check(CLI::Range(1, 6));
  cm->callback([&] { rc = run_countermodel(cm_formula, cm_worlds); });

  auto* bench = app.add_subcommand("bench", "JSON-lines experiment reports");
  bench->require_subcommand(1);
  int bl_n = 1;
  std::uint32_t bl_cap = 0;
  std::uint64_t bl_nodes = std::uint64_t(1) << 24, bl_time = 60000;
  auto* bench_lower = bench->add_subcommand("lower", "census-cap sweep of the proof search");
  bench_lower->add_option("n", bl_n, "family stage")->required()->check(CLI::Range(1, 8));
  bench_lower->add_option("--cap", bl_cap, "sweep caps 1..cap")->required();
  bench_lower->add_option("--nodes", bl_nodes, "node cap per run");
  bench_lower->add_option("--time", bl_time, "time cap per run, ms");
  bench_lower->callback([&] { rc = run_bench_lower(bl_n, bl_cap, bl_nodes, bl_time, seed); });
  int bg_n = 1;
  auto* bench_growth = bench->add_subcommand("growth", "proof sizes per family stage");
  bench_growth->add_option("n_max", bg_n, "largest stage")->required()->check(CLI::Range(1, 40));
  bench_growth->callback([&] { rc = run_bench_growth(bg_n); });

  std::string ex_path, ex_format, ex_out;
  bool ex_shared = false;
  auto* ex = app.add_subcommand("export", "Render a stored proof");
  ex->add_option("proof", ex_path, "proof JSON file")->required();
  ex->add_option("--format", ex_format, "latex|dot")
      ->required()
      ->check(CLI::IsMember({"latex", "dot"}));
  ex->add_flag("--shared", ex_shared, "dot only: one node per distinct subproof");
  ex->add_option("--out", ex_out, "write here instead of stdout");
  ex->callback([&] { rc = run_export(ex_path, ex_format, ex_shared, ex_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const mimpl::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return rc;
}
