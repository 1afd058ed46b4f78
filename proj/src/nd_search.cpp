#include "mimpl/nd_search.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace mimpl {

namespace {

using Clock = std::chrono::steady_clock;

// Search state key: goal, the set of available assumption formulas, and the
// whole consumption map. The consumption entries are global, not restricted
// to the available set: a formula consumed in a sibling branch still
// constrains future binders of the same formula here, so two states that
// differ only in such an entry have different futures. Interned formula
// pointers are sound key material; both sections are sorted structurally so
// the key is run-deterministic in content, and a zero separates them.
using StateKey = std::vector<std::uintptr_t>;

struct StateKeyHash {
  std::size_t operator()(const StateKey& key) const {
    std::size_t h = 1469598103934665603ULL;
    for (std::uintptr_t x : key) {
      h ^= x;
      h *= 1099511628211ULL;
    }
    return h;
  }
};

constexpr int kNoEscape = INT_MAX;

struct Searcher {
  std::uint32_t cap;
  std::optional<std::uint64_t> node_cap;
  std::optional<Clock::time_point> deadline;

  std::uint64_t nodes = 0;
  bool truncated = false;
  int next_label = 1;

  std::vector<std::pair<Formula, int>> env;  // (assumed formula, binder label)
  std::map<Formula, std::uint32_t, FormulaOrder> used;
  std::map<Formula, std::string, FormulaOrder> str_cache;

  std::unordered_map<StateKey, int, StateKeyHash> path_depth;
  std::vector<StateKey> path_stack;  // same entries, in push order
  std::unordered_set<StateKey, StateKeyHash> refuted;

  using Yield = std::function<bool(Proof)>;

  explicit Searcher(const SearchBudget& b) : cap(b.assumption_cap), node_cap(b.node_cap) {
    if (b.time_cap) deadline = Clock::now() + *b.time_cap;
  }

  bool budget_hit() {
    if (truncated) return true;
    if (node_cap && nodes >= *node_cap) {
      truncated = true;
      return true;
    }
    if (deadline && (nodes & 4095) == 0 && Clock::now() >= *deadline) {
      truncated = true;
      return true;
    }
    return false;
  }

  const std::string& printed(Formula f) {
    auto it = str_cache.find(f);
    if (it != str_cache.end()) return it->second;
    return str_cache.emplace(f, f.str()).first->second;
  }

  StateKey make_key(Formula goal) {
    std::set<Formula, FormulaOrder> avail;
    for (const auto& [f, label] : env) {
      (void)label;
      avail.insert(f);
    }
    StateKey key;
    key.reserve(2 + avail.size() + 2 * used.size());
    key.push_back(reinterpret_cast<std::uintptr_t>(goal.raw()));
    for (Formula f : avail) key.push_back(reinterpret_cast<std::uintptr_t>(f.raw()));
    key.push_back(0);
    for (const auto& [f, u] : used) {
      if (u == 0) continue;
      key.push_back(reinterpret_cast<std::uintptr_t>(f.raw()));
      key.push_back(u);
    }
    return key;
  }

  // Chain segments if goal is a (necessarily unique: suffixes strictly
  // shrink) right-spine suffix of delta.
  std::optional<std::vector<Formula>> suffix_segments(Formula delta, Formula goal) {
    std::vector<Formula> segs;
    Formula cur = delta;
    while (cur != goal) {
      if (!cur.is_implication()) return std::nullopt;
      segs.push_back(cur.antecedent());
      cur = cur.consequent();
    }
    return segs;
  }

  // Enumerates proofs of goal; yield returns true to accept and stop.
  // Returns true when stopped early. On a false return, `used` is restored
  // to its entry state and escape_acc has absorbed the minimum path depth of
  // any loop-prune that matched an ancestor strictly above this node.
  bool solve(Formula goal, const Yield& yield, int& escape_acc) {
    if (budget_hit()) return false;
    ++nodes;

    StateKey key = make_key(goal);
    if (refuted.count(key)) return false;
    auto pit = path_depth.find(key);
    if (pit != path_depth.end()) {
      escape_acc = std::min(escape_acc, pit->second);
      return false;
    }
    int d = int(path_stack.size());
    path_depth.emplace(key, d);
    path_stack.push_back(key);
    int local_escape = kNoEscape;
    bool stopped = false;

    // Fires whenever a complete proof of this goal is assembled, whether or
    // not the caller accepts it. A state that produced a candidate is
    // provable, so a later rejection by the caller must not refute it.
    bool yielded = false;
    Yield observed = [&](Proof p) {
      yielded = true;
      return yield(p);
    };

    if (goal.is_implication()) {
      Formula alpha = goal.antecedent();
      int label = next_label++;
      env.emplace_back(alpha, label);
      stopped = solve(
          goal.consequent(),
          [&](Proof body) { return observed(Proof::intro(label, alpha, body)); }, local_escape);
      env.pop_back();
    }

    if (!stopped) {
      // Distinct available formulas, innermost binder label, printed order.
      std::map<Formula, int, FormulaOrder> innermost;
      for (auto it = env.rbegin(); it != env.rend(); ++it) innermost.emplace(it->first, it->second);
      std::vector<std::pair<Formula, int>> cands(innermost.begin(), innermost.end());
      std::sort(cands.begin(), cands.end(), [&](const auto& a, const auto& b) {
        return printed(a.first) < printed(b.first);
      });

      for (const auto& [delta, label] : cands) {
        if (stopped || truncated) break;
        if (used[delta] >= cap) continue;
        auto segs = suffix_segments(delta, goal);
        if (!segs) continue;
        ++used[delta];
        Proof head = Proof::assume(delta, label);
        stopped = solve_chain(*segs, 0, head, observed, local_escape);
        if (!stopped) --used[delta];
      }
    }

    path_depth.erase(key);
    path_stack.pop_back();
    if (!stopped) {
      if (!truncated && !yielded && local_escape >= d) refuted.insert(std::move(key));
      if (local_escape < d) escape_acc = std::min(escape_acc, local_escape);
    }
    return stopped;
  }

  // Minor premises left to right; enumeration backtracks into earlier minors
  // when a later one fails, so allowance splits are explored exhaustively.
  //
  // A minor's yield fires while its own solve frames are still live, so the
  // continuation that proves the next minor runs inside the previous one's
  // dynamic extent. The next minor is a sibling in the proof being built,
  // not a descendant: it must see the chain frame's binders and path, or a
  // leaf could cite a binder that ends up in another branch. `used` is the
  // exception and deliberately stays: the minors split one assumption cap.
  bool solve_chain(const std::vector<Formula>& segs, std::size_t idx, Proof acc,
                   const Yield& yield, int& escape_acc) {
    if (idx == segs.size()) return yield(acc);
    std::size_t env_base = env.size();
    std::size_t path_base = path_stack.size();
    return solve(
        segs[idx],
        [&](Proof minor) {
          std::vector<std::pair<Formula, int>> env_tail(env.begin() + env_base, env.end());
          env.erase(env.begin() + env_base, env.end());
          std::vector<StateKey> path_tail(path_stack.begin() + path_base, path_stack.end());
          path_stack.resize(path_base);
          for (const StateKey& k : path_tail) path_depth.erase(k);

          bool stopped = solve_chain(segs, idx + 1, Proof::elim(minor, acc), yield, escape_acc);

          for (std::size_t i = 0; i < path_tail.size(); ++i)
            path_depth.emplace(path_tail[i], int(path_base + i));
          path_stack.insert(path_stack.end(), path_tail.begin(), path_tail.end());
          env.insert(env.end(), env_tail.begin(), env_tail.end());
          return stopped;
        },
        escape_acc);
  }
};

}  // namespace

SearchResult search_normal(Formula goal, const SearchBudget& budget) {
  auto start = Clock::now();
  Searcher s(budget);
  std::optional<Proof> found;
  int escape = kNoEscape;
  s.solve(
      goal,
      [&](Proof p) {
        found = p;
        return true;
      },
      escape);

  SearchResult result;
  result.nodes_expanded = s.nodes;
  result.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);
  result.exhausted = !found && !s.truncated;
  if (found) {
    // Never trust the searcher's own bookkeeping.
    Judgement j = check(*found, LogicMode::minimal);
    if (j.conclusion != goal || !j.open.empty() || !is_normal(*found))
      throw std::logic_error("search produced an invalid proof");
    for (const auto& [f, entry] : assumption_census(*found)) {
      (void)f;
      std::uint64_t total = entry.open_count;
      for (const auto& [l, c] : entry.discharged_by) {
        (void)l;
        total += c;
      }
      if (total > budget.assumption_cap)
        throw std::logic_error("search exceeded its assumption cap");
    }
    result.proof = std::move(found);
  }
  return result;
}

MinAssumptions min_assumption_count(Formula goal, std::uint32_t cap_limit,
                                    const SearchBudget& per_run) {
  MinAssumptions out;
  bool all_lower_exhausted = true;
  for (std::uint32_t b = 1; b <= cap_limit; ++b) {
    SearchBudget budget = per_run;
    budget.assumption_cap = b;
    SearchResult r = search_normal(goal, budget);
    out.nodes_expanded += r.nodes_expanded;
    if (r.proof) {
      out.count = b;
      out.certified = all_lower_exhausted;
      return out;
    }
    if (!r.exhausted) {
      out.truncated = true;
      all_lower_exhausted = false;
    }
  }
  return out;
}

}  // namespace mimpl
