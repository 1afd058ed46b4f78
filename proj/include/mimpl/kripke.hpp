#pragma once
// Finite intuitionistic Kripke models over the implicational language.
//
// Worlds are 0..k-1 with k <= 64: the partial order is kept as one uint64_t
// up-set mask per world, and formula evaluation computes one mask per
// distinct subformula (satisfies/valid_in cost O(dag size * worlds)).
//
// satisfies_reference is the naive recursive textbook evaluator, kept as the
// differential-testing oracle for the mask evaluator. find_countermodel and
// valid_in_each take an Exec switch selecting the serial reference loop or
// the OpenMP kernel; both orderings return bit-identical results.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mimpl/formula.hpp"

namespace mimpl {

inline constexpr int kMaxWorlds = 64;

class ModelError : public std::runtime_error {
public:
  explicit ModelError(const std::string& message) : std::runtime_error(message) {}
};

class KripkeModel {
public:
  // order_pairs generates the order: the constructor adds reflexive pairs,
  // closes transitively, and rejects antisymmetry violations. The valuation
  // must be monotone along the closed order (rejected otherwise).
  KripkeModel(int world_count, const std::vector<std::pair<int, int>>& order_pairs,
              const std::map<int, std::set<std::string>>& valuation);

  int world_count() const { return k_; }
  bool leq(int i, int j) const;
  const std::set<std::string>& valuation(int w) const;
  std::uint64_t up_mask(int w) const;
  bool atom_true_at(int w, const std::string& atom) const;

private:
  int k_;
  std::vector<std::uint64_t> up_;
  std::vector<std::set<std::string>> val_;
};

// World w forces f. Monotone in w by construction of the semantics.
bool satisfies(const KripkeModel& m, int world, Formula f);

// Direct recursion over the formula tree, no sharing, no masks.
bool satisfies_reference(const KripkeModel& m, int world, Formula f);

// True at every world.
bool valid_in(const KripkeModel& m, Formula f);

enum class Exec { serial, parallel };

// Evaluates f against each model. The parallel kernel splits across models.
std::vector<char> valid_in_each(std::span<const KripkeModel> models, Formula f,
                                Exec exec = Exec::serial);

// Exhaustive search for a model falsifying f, smallest first: world counts
// 1..max_worlds; for each count, candidate orders are the transitively closed
// subsets of {(i,j) : i < j} enumerated in a fixed lexicographic sequence
// (every finite poset relabels into this family, so the search is exhaustive
// up to order-isomorphism); for each order, monotone valuations over the
// atoms of f in lexicographic mask order. The first falsifying candidate is
// returned, identically for both Exec variants. max_worlds is capped at 6.
std::optional<KripkeModel> find_countermodel(Formula f, int max_worlds,
                                             Exec exec = Exec::serial);

// Seeded pseudo-random model: a random DAG order on world_count worlds, a
// random upward-closed valuation over atom_pool. Deterministic per seed,
// platform-independent (raw mt19937_64 draws, no distribution objects).
KripkeModel random_model(std::uint64_t seed, int world_count,
                         const std::vector<std::string>& atom_pool);

// JSON form: {"worlds": k, "order": [[i,j],...], "valuation": {"0": ["A"],...}}.
// save_model emits the generating pairs of the closed order (minus reflexive
// pairs); load_model revalidates everything.
std::string save_model(const KripkeModel& m);
KripkeModel load_model(const std::string& json_text);

}  // namespace mimpl
