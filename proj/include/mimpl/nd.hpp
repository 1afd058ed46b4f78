#pragma once
// Natural deduction for the implicational fragment, Prawitz style.
//
// Proof objects are immutable DAGs: a node can be referenced from several
// parent positions, and the proof it denotes is the unfolded tree. All
// checking and counting below is memoised per physical node, so a proof
// whose tree is exponential costs linear work when it shares structure.
//
// Rules:
//   Assume   [alpha], optionally labelled for later discharge
//   Intro    from a proof of beta, infer alpha->beta discharging every open
//            leaf labelled l (which must all assume alpha); vacuous discharge
//            (no such leaf) is allowed, which is why the node carries alpha
//   Elim     from proofs of alpha (minor) and alpha->beta (major), infer beta
//   Peirce   classical mode only: from a proof of gamma whose label-l leaves
//            assume gamma->delta, infer gamma discharging them
//
// A proof is normal when no Elim has an Intro conclusion as its major
// premise. Normality is defined for minimal mode only.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>

#include "mimpl/formula.hpp"

namespace mimpl {

enum class ProofKind { assume, intro, elim, peirce };
enum class LogicMode { minimal, classical };

struct ProofNode;
using ProofPtr = std::shared_ptr<const ProofNode>;

struct ProofNode {
  ProofKind kind;
  std::optional<Formula> formula;  // assume: the assumption; intro: the discharged antecedent
  std::optional<int> label;        // assume: optional; intro/peirce: required
  ProofPtr minor;                  // elim
  ProofPtr major;                  // elim
  ProofPtr body;                   // intro, peirce
};

class Proof {
public:
  static Proof assume(Formula f, std::optional<int> label = std::nullopt);
  static Proof intro(int label, Formula antecedent, Proof body);
  static Proof elim(Proof minor, Proof major);
  static Proof peirce(int label, Proof body);

  ProofKind kind() const { return node_->kind; }
  Formula formula() const { return *node_->formula; }
  std::optional<int> label() const { return node_->label; }
  Proof minor() const { return Proof(node_->minor); }
  Proof major() const { return Proof(node_->major); }
  Proof body() const { return Proof(node_->body); }

  const ProofNode* raw() const { return node_.get(); }
  const ProofPtr& ptr() const { return node_; }
  friend bool operator==(const Proof& a, const Proof& b) { return a.node_ == b.node_; }

  explicit Proof(ProofPtr node) : node_(std::move(node)) {}

private:
  ProofPtr node_;
};

class CheckError : public std::runtime_error {
public:
  explicit CheckError(const std::string& message) : std::runtime_error(message) {}
};

struct Judgement {
  Formula conclusion;
  // Open (unlabelled) assumptions with tree multiplicities.
  std::map<Formula, std::uint64_t, FormulaOrder> open;
};

// Validates the whole proof and returns conclusion plus open assumptions.
// Throws CheckError on: Elim premise mismatch, a label used with two
// different assumption formulas, an Intro antecedent that contradicts its
// leaves, a label discharged twice on one root-to-leaf path, a labelled leaf
// no ancestor discharges, or a Peirce node in minimal mode.
Judgement check(const Proof& p, LogicMode mode);

// Defined for proofs that check in minimal mode; throws for classical ones.
bool is_normal(const Proof& p);

struct CensusEntry {
  std::uint64_t open_count = 0;
  std::map<int, std::uint64_t> discharged_by;  // label -> leaf count (tree multiplicity)
};

// Tree-multiplicity census of assumption leaves, keyed by assumed formula.
// The proof must check (in classical mode, the permissive one).
std::map<Formula, CensusEntry, FormulaOrder> assumption_census(const Proof& p);

// Applies an atom substitution to every assumption and discharged antecedent.
// Labels and shape are preserved; sharing is preserved (memoised rebuild).
Proof substitute_proof(const Proof& p, const Substitution& s);

// Labels every open (unlabelled) leaf assuming f. Used to close a
// construction with one final discharge.
Proof label_open_assumptions(const Proof& p, Formula f, int label);

struct DagStats {
  std::uint64_t tree_nodes = 0;         // nodes of the unfolded tree
  std::uint64_t distinct_subproofs = 0; // structurally distinct subtrees
};
DagStats dag_stats(const Proof& p);

// Structural identity class of each physical node: two nodes get the same id
// exactly when their subtrees unfold identically. Ids are dense from 0;
// their count equals dag_stats().distinct_subproofs.
std::map<const ProofNode*, std::uint64_t> canonical_classes(const Proof& p);

// JSON round-trip. Serialisation unfolds the tree (exponential for heavily
// shared proofs; the caller picks the sizes it asks for). kinds: "assume"
// {formula, label?}, "intro" {label, formula, body}, "elim" {minor, major},
// "peirce" {label, body}. Formulas are grammar strings. The loader accepts
// an intro without "formula" only when a labelled leaf pins it down.
std::string proof_to_json(const Proof& p);
Proof proof_from_json(const std::string& json_text);

}  // namespace mimpl
