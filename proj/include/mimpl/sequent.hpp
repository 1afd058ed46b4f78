#pragma once
// Sequents Gamma |- gamma [Delta] and backward proof search, in two variants
// differing only in whether a left rule keeps its principal formula.
//
// Rules (gamma1, gamma2, alpha, beta formulas; p an atom; Xi the left
// multiset; Delta the bracket, pure bookkeeping that never gates a rule):
//
//   Axiom        Xi, p |- p [Delta]
//   RightIntro   Xi, gamma1 |- gamma2 [Delta]   =>   Xi |- gamma1->gamma2 [Delta]
//   LeftWeak     Xi |- alpha [gamma, Delta]   and   Xi, beta |- gamma []
//                =>   Xi, alpha->beta |- gamma [Delta]      (principal removed)
//   LeftStrong   the same two premises but with alpha->beta kept in both
//                =>   Xi, alpha->beta |- gamma [Delta]
//
// The weak system's rules strictly shrink the total formula size, so its
// search terminates bare; it is incomplete (phi(n) has no weak proof). The
// strong searcher adds a per-branch repeat check on (left set, focus).
//
// Search is deterministic: axiom first, then RightIntro, then left rules on
// distinct principals in printed order; first success wins; on failure every
// alternative is explored, which is what the exhausted flag certifies.

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "mimpl/formula.hpp"
#include "mimpl/kripke.hpp"

namespace mimpl {

struct Sequent {
  std::vector<Formula> left;     // multiset, kept sorted in structural order
  Formula focus;                 // the single right-side formula
  std::vector<Formula> bracket;  // newest first

  static Sequent make(std::vector<Formula> left, Formula focus,
                      std::vector<Formula> bracket = {});
  bool operator==(const Sequent& other) const;
  std::string str() const;  // "A, B |- C [D]"
};

// Text form: 'left1, left2 |- focus [d1, d2]'; left and bracket may be empty
// ("|- A" / no bracket or "[]"). Throws ParseError.
Sequent parse_sequent(const std::string& text);

enum class SeqRule { axiom, right_intro, left_weak, left_strong };
enum class SeqVariant { weak, strong };

struct SequentProofNode;
using SequentProof = std::shared_ptr<const SequentProofNode>;

struct SequentProofNode {
  SeqRule rule;
  Sequent sequent;
  std::optional<Formula> principal;    // left rules
  std::vector<SequentProof> premises;  // right_intro: 1; left rules: 2
};

// Bit-for-bit schema check of every node, brackets included.
struct SequentCheck {
  bool ok = false;
  std::string error;  // first offending node, when !ok
  explicit operator bool() const { return ok; }
};
SequentCheck check_sequent_proof(const SequentProof& p);

std::string sequent_proof_to_json(const SequentProof& p);
SequentProof sequent_proof_from_json(const std::string& json_text);

// Failure traces: what was tried at each failed sequent, for counter-model
// extraction and inspection.
enum class TraceOutcome { failed, pruned, truncated };

struct TraceNode;
using TracePtr = std::shared_ptr<const TraceNode>;

struct TraceAttempt {
  SeqRule rule;
  std::optional<Formula> principal;
  // Premises explored before the attempt failed, in rule order. For left
  // rules the first premise's trace is always present; the second's only if
  // the first succeeded.
  std::vector<TracePtr> premises;       // failed premise traces (nullptr = proved)
  std::vector<SequentProof> subproofs;  // proved premises, same indexing
};

struct TraceNode {
  Sequent sequent;
  TraceOutcome outcome;
  std::vector<TraceAttempt> attempts;  // empty = stuck (no rule applicable)
};

struct SequentLimits {
  std::optional<std::uint64_t> node_cap;
  std::optional<std::chrono::milliseconds> time_cap;
};

struct FailureTrace {
  TracePtr root;
  bool exhaustive = false;
};

struct SequentProveResult {
  std::optional<SequentProof> proof;
  std::optional<FailureTrace> trace;  // present when no proof
  bool exhausted = false;
  std::uint64_t nodes = 0;
  std::chrono::milliseconds elapsed{0};
};

SequentProveResult prove(const Sequent& goal, SeqVariant variant,
                         const SequentLimits& limits = {});

// Counter-model from an exhaustive failure trace: one world per RightIntro
// on a failed branch (the root world first), valuations the atoms of the
// accumulated left contexts, consecutive equal-valuation worlds merged.
// Branch choice prefers the second premise of a failed left rule (its
// failure propagates soundly) and every candidate is verified semantically
// before being certified; when nothing verifies, `model` is empty and
// verdict says "failed search, no counter-model certified".
struct ExtractionResult {
  std::optional<KripkeModel> model;
  std::string verdict;
};
ExtractionResult extract_countermodel(const FailureTrace& trace);

}  // namespace mimpl
