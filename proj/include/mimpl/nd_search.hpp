#pragma once
// Exhaustive goal-directed search for normal proofs under a census cap.
//
// The search space is exactly the normal proofs: a goal alpha->beta is
// answered by Intro (always tried first), and any goal by an elimination
// chain that starts at an available assumption whose right spine passes
// through the goal, with the chain's minor premises searched left to right.
// Every assumption leaf of a produced proof is the head of one chain, so
// counting chain heads per formula IS the assumption census, and capping it
// caps the census.
//
// Soundness of the exhausted flag: states repeat only via the loop check
// (identical goal and identical remaining allowances on one path), which can
// only prune derivations that have a shorter witness; and a state whose
// subtree was explored without any such prune is refuted independently of
// the path, so it is memoised globally. With neither cap hit, exhausted
// means: no normal proof with census within the cap exists.
//
// Found proofs are re-validated (check + is_normal + census <= cap) before
// being returned.

#include <chrono>
#include <cstdint>
#include <optional>

#include "mimpl/nd.hpp"

namespace mimpl {

struct SearchBudget {
  std::uint32_t assumption_cap = 1;  // max census count per assumption formula
  std::optional<std::uint64_t> node_cap;
  std::optional<std::chrono::milliseconds> time_cap;
};

struct SearchResult {
  std::optional<Proof> proof;
  bool exhausted = false;  // full exploration, trustworthy refutation
  std::uint64_t nodes_expanded = 0;
  std::chrono::milliseconds elapsed{0};
};

SearchResult search_normal(Formula goal, const SearchBudget& budget);

struct MinAssumptions {
  std::optional<std::uint32_t> count;  // least cap at which a proof appears
  bool certified = false;              // all caps below `count` were refuted exhaustively
  bool truncated = false;              // some run hit a cap
  std::uint64_t nodes_expanded = 0;
};

// Sweeps caps 1..cap_limit with the given node/time budget per run.
MinAssumptions min_assumption_count(Formula goal, std::uint32_t cap_limit,
                                    const SearchBudget& per_run);

}  // namespace mimpl
