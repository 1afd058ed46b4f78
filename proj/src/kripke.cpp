#include "mimpl/kripke.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <random>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace mimpl {

namespace {

// Reflexive-transitive closure of the generating pairs as up-set masks.
// Throws on out-of-range worlds or antisymmetry violations.
std::vector<std::uint64_t> close_order(int k, const std::vector<std::pair<int, int>>& pairs) {
  if (k < 1 || k > kMaxWorlds)
    throw ModelError("world count must be between 1 and " + std::to_string(kMaxWorlds));
  std::vector<std::uint64_t> up(k);
  for (int i = 0; i < k; ++i) up[i] = 1ULL << i;
  for (auto [i, j] : pairs) {
    if (i < 0 || i >= k || j < 0 || j >= k)
      throw ModelError("order pair (" + std::to_string(i) + "," + std::to_string(j) +
                       ") out of range");
    up[i] |= 1ULL << j;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < k; ++i) {
      std::uint64_t m = up[i];
      std::uint64_t rest = m;
      while (rest) {
        int j = std::countr_zero(rest);
        rest &= rest - 1;
        m |= up[j];
      }
      if (m != up[i]) {
        up[i] = m;
        changed = true;
      }
    }
  }
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if ((up[i] >> j & 1) && (up[j] >> i & 1))
        throw ModelError("order is not antisymmetric: " + std::to_string(i) + " and " +
                         std::to_string(j) + " are mutually related");
  return up;
}

// Formula DAG flattened to a topologically ordered op list, so per-candidate
// evaluation in the enumerative search is a tight loop over an array.
struct FlatFormula {
  struct Op {
    int lhs = -1;  // indices into ops; -1 marks an atom
    int rhs = -1;
    int atom = -1;  // index into atoms
  };
  std::vector<Op> ops;
  std::vector<std::string> atoms;  // sorted
  int root = -1;
};

FlatFormula flatten(Formula f) {
  FlatFormula flat;
  std::set<std::string> names = atoms_of(f);
  flat.atoms.assign(names.begin(), names.end());
  std::unordered_map<std::string, int> atom_index;
  for (std::size_t t = 0; t < flat.atoms.size(); ++t) atom_index[flat.atoms[t]] = int(t);

  std::unordered_map<const FormulaNode*, int> memo;
  auto rec = [&](auto&& self, Formula g) -> int {
    auto it = memo.find(g.raw());
    if (it != memo.end()) return it->second;
    FlatFormula::Op op;
    if (g.is_atom()) {
      op.atom = atom_index.at(g.atom_name());
    } else {
      op.lhs = self(self, g.antecedent());
      op.rhs = self(self, g.consequent());
    }
    flat.ops.push_back(op);
    int idx = int(flat.ops.size()) - 1;
    memo.emplace(g.raw(), idx);
    return idx;
  };
  flat.root = rec(rec, f);
  return flat;
}

// atom_masks[t] = bitmask of worlds where atom t holds. Returns the mask of
// worlds forcing the root. scratch must have flat.ops.size() entries.
std::uint64_t eval_flat(const FlatFormula& flat, const std::uint64_t* atom_masks,
                        const std::uint64_t* up, int k, std::uint64_t* scratch) {
  for (std::size_t n = 0; n < flat.ops.size(); ++n) {
    const auto& op = flat.ops[n];
    if (op.atom >= 0) {
      scratch[n] = atom_masks[op.atom];
      continue;
    }
    std::uint64_t bad = scratch[op.lhs] & ~scratch[op.rhs];
    std::uint64_t m = 0;
    for (int w = 0; w < k; ++w)
      if ((up[w] & bad) == 0) m |= 1ULL << w;
    scratch[n] = m;
  }
  return scratch[flat.root];
}

std::vector<std::uint64_t> model_atom_masks(const KripkeModel& m, const FlatFormula& flat) {
  std::vector<std::uint64_t> masks(flat.atoms.size(), 0);
  for (std::size_t t = 0; t < flat.atoms.size(); ++t)
    for (int w = 0; w < m.world_count(); ++w)
      if (m.atom_true_at(w, flat.atoms[t])) masks[t] |= 1ULL << w;
  return masks;
}

std::uint64_t eval_model_mask(const KripkeModel& m, Formula f) {
  FlatFormula flat = flatten(f);
  std::vector<std::uint64_t> atom_masks = model_atom_masks(m, flat);
  std::vector<std::uint64_t> up(m.world_count());
  for (int w = 0; w < m.world_count(); ++w) up[w] = m.up_mask(w);
  std::vector<std::uint64_t> scratch(flat.ops.size());
  return eval_flat(flat, atom_masks.data(), up.data(), m.world_count(), scratch.data());
}

std::uint64_t full_mask(int k) { return k == 64 ? ~0ULL : (1ULL << k) - 1; }

}  // namespace

KripkeModel::KripkeModel(int world_count, const std::vector<std::pair<int, int>>& order_pairs,
                         const std::map<int, std::set<std::string>>& valuation)
    : k_(world_count), up_(close_order(world_count, order_pairs)), val_(world_count) {
  for (const auto& [w, atoms] : valuation) {
    if (w < 0 || w >= k_) throw ModelError("valuation world " + std::to_string(w) + " out of range");
    val_[w] = atoms;
  }
  for (int i = 0; i < k_; ++i)
    for (int j = 0; j < k_; ++j) {
      if (i == j || !(up_[i] >> j & 1)) continue;
      for (const std::string& a : val_[i])
        if (!val_[j].count(a))
          throw ModelError("valuation is not monotone: atom " + a + " holds at world " +
                           std::to_string(i) + " but not above it at world " + std::to_string(j));
    }
}

bool KripkeModel::leq(int i, int j) const {
  if (i < 0 || i >= k_ || j < 0 || j >= k_) throw ModelError("world index out of range");
  return up_[i] >> j & 1;
}

const std::set<std::string>& KripkeModel::valuation(int w) const {
  if (w < 0 || w >= k_) throw ModelError("world index out of range");
  return val_[w];
}

std::uint64_t KripkeModel::up_mask(int w) const {
  if (w < 0 || w >= k_) throw ModelError("world index out of range");
  return up_[w];
}

bool KripkeModel::atom_true_at(int w, const std::string& atom) const {
  return valuation(w).count(atom) != 0;
}

bool satisfies(const KripkeModel& m, int world, Formula f) {
  if (world < 0 || world >= m.world_count()) throw ModelError("world index out of range");
  return eval_model_mask(m, f) >> world & 1;
}

bool satisfies_reference(const KripkeModel& m, int world, Formula f) {
  if (world < 0 || world >= m.world_count()) throw ModelError("world index out of range");
  if (f.is_atom()) return m.atom_true_at(world, f.atom_name());
  for (int v = 0; v < m.world_count(); ++v) {
    if (!m.leq(world, v)) continue;
    if (satisfies_reference(m, v, f.antecedent()) && !satisfies_reference(m, v, f.consequent()))
      return false;
  }
  return true;
}

bool valid_in(const KripkeModel& m, Formula f) {
  return eval_model_mask(m, f) == full_mask(m.world_count());
}

std::vector<char> valid_in_each(std::span<const KripkeModel> models, Formula f, Exec exec) {
  FlatFormula flat = flatten(f);
  std::vector<char> result(models.size());
  auto one = [&](std::size_t i) {
    const KripkeModel& m = models[i];
    std::vector<std::uint64_t> atom_masks = model_atom_masks(m, flat);
    std::vector<std::uint64_t> up(m.world_count());
    for (int w = 0; w < m.world_count(); ++w) up[w] = m.up_mask(w);
    std::vector<std::uint64_t> scratch(flat.ops.size());
    std::uint64_t mask =
        eval_flat(flat, atom_masks.data(), up.data(), m.world_count(), scratch.data());
    result[i] = mask == full_mask(m.world_count()) ? 1 : 0;
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < (long long)models.size(); ++i) one(std::size_t(i));
  } else {
    for (std::size_t i = 0; i < models.size(); ++i) one(i);
  }
  return result;
}

namespace {

struct CandidateOrder {
  std::vector<std::uint64_t> up;
};

// Transitively closed up-mask family for subset index `bits` over the strict
// pairs (i<j) of k worlds, or nullopt if the subset is not closed. Checking
// instead of closing means each closed order is visited exactly once.
std::optional<CandidateOrder> order_from_bits(int k, const std::vector<std::pair<int, int>>& pairs,
                                              std::uint64_t bits) {
  CandidateOrder cand;
  cand.up.assign(k, 0);
  for (int i = 0; i < k; ++i) cand.up[i] = 1ULL << i;
  for (std::size_t b = 0; b < pairs.size(); ++b)
    if (bits >> b & 1) cand.up[pairs[b].first] |= 1ULL << pairs[b].second;
  for (int i = 0; i < k; ++i) {
    std::uint64_t rest = cand.up[i] & ~(1ULL << i);
    while (rest) {
      int j = std::countr_zero(rest);
      rest &= rest - 1;
      if ((cand.up[i] | cand.up[j]) != cand.up[i]) return std::nullopt;
    }
  }
  return cand;
}

// First (lexicographically smallest) monotone valuation falsifying f on the
// given order, as one atom mask per world, or nullopt.
std::optional<std::vector<std::uint64_t>> first_falsifying_valuation(const FlatFormula& flat,
                                                                     const CandidateOrder& cand,
                                                                     int k) {
  int a = int(flat.atoms.size());
  std::uint64_t atom_limit = 1ULL << a;
  std::vector<std::uint64_t> v(k, 0);
  std::vector<std::uint64_t> atom_masks(std::max<std::size_t>(flat.atoms.size(), 1), 0);
  std::vector<std::uint64_t> scratch(flat.ops.size());
  std::uint64_t full = full_mask(k);

  auto rec = [&](auto&& self, int w) -> bool {
    if (w == k) {
      for (int t = 0; t < a; ++t) {
        std::uint64_t m = 0;
        for (int i = 0; i < k; ++i)
          if (v[i] >> t & 1) m |= 1ULL << i;
        atom_masks[t] = m;
      }
      return eval_flat(flat, atom_masks.data(), cand.up.data(), k, scratch.data()) != full;
    }
    std::uint64_t lower = 0;
    for (int i = 0; i < w; ++i)
      if (cand.up[i] >> w & 1) lower |= v[i];
    for (std::uint64_t mask = 0; mask < atom_limit; ++mask) {
      if ((mask & lower) != lower) continue;
      v[w] = mask;
      if (self(self, w + 1)) return true;
    }
    return false;
  };
  if (!rec(rec, 0)) return std::nullopt;
  return v;
}

KripkeModel build_model(const FlatFormula& flat, const CandidateOrder& cand, int k,
                        const std::vector<std::uint64_t>& v) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (i != j && (cand.up[i] >> j & 1)) pairs.emplace_back(i, j);
  std::map<int, std::set<std::string>> val;
  for (int w = 0; w < k; ++w) {
    std::set<std::string> atoms;
    for (std::size_t t = 0; t < flat.atoms.size(); ++t)
      if (v[w] >> t & 1) atoms.insert(flat.atoms[t]);
    val[w] = atoms;
  }
  return KripkeModel(k, pairs, val);
}

}  // namespace

std::optional<KripkeModel> find_countermodel(Formula f, int max_worlds, Exec exec) {
  if (max_worlds < 1) throw std::invalid_argument("max_worlds must be >= 1");
  max_worlds = std::min(max_worlds, 6);
  FlatFormula flat = flatten(f);

  for (int k = 1; k <= max_worlds; ++k) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) pairs.emplace_back(i, j);
    std::uint64_t order_count = 1ULL << pairs.size();

    if (exec == Exec::serial) {
      for (std::uint64_t bits = 0; bits < order_count; ++bits) {
        auto cand = order_from_bits(k, pairs, bits);
        if (!cand) continue;
        auto v = first_falsifying_valuation(flat, *cand, k);
        if (v) return build_model(flat, *cand, k, *v);
      }
    } else {
      // Each order's valuation scan is self-contained, so orders are farmed
      // out and the smallest hit index wins: same answer as the serial loop.
      std::vector<std::optional<std::vector<std::uint64_t>>> hits(order_count);
      std::atomic<std::uint64_t> best{order_count};
#pragma omp parallel for schedule(dynamic, 16)
      for (long long bits = 0; bits < (long long)order_count; ++bits) {
        if ((std::uint64_t)bits > best.load(std::memory_order_relaxed)) continue;
        auto cand = order_from_bits(k, pairs, (std::uint64_t)bits);
        if (!cand) continue;
        auto v = first_falsifying_valuation(flat, *cand, k);
        if (v) {
          hits[bits] = std::move(v);
          std::uint64_t cur = best.load(std::memory_order_relaxed);
          while ((std::uint64_t)bits < cur &&
                 !best.compare_exchange_weak(cur, (std::uint64_t)bits)) {
          }
        }
      }
      for (std::uint64_t bits = 0; bits < order_count; ++bits) {
        if (!hits[bits]) continue;
        auto cand = order_from_bits(k, pairs, bits);
        return build_model(flat, *cand, k, *hits[bits]);
      }
    }
  }
  return std::nullopt;
}

KripkeModel random_model(std::uint64_t seed, int world_count,
                         const std::vector<std::string>& atom_pool) {
  if (world_count < 1 || world_count > kMaxWorlds)
    throw std::invalid_argument("world_count out of range");
  std::mt19937_64 rng(seed);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < world_count; ++i)
    for (int j = i + 1; j < world_count; ++j)
      if (rng() % 100 < 35) pairs.emplace_back(i, j);
  std::vector<std::uint64_t> up = close_order(world_count, pairs);

  std::vector<std::set<std::string>> val(world_count);
  for (int w = 0; w < world_count; ++w)
    for (const std::string& atom : atom_pool)
      if (rng() % 100 < 30) val[w].insert(atom);
  // Upward closure makes the valuation monotone.
  for (int i = 0; i < world_count; ++i)
    for (int j = 0; j < world_count; ++j)
      if (i != j && (up[i] >> j & 1)) val[j].insert(val[i].begin(), val[i].end());

  std::map<int, std::set<std::string>> valuation;
  for (int w = 0; w < world_count; ++w) valuation[w] = val[w];
  return KripkeModel(world_count, pairs, valuation);
}

std::string save_model(const KripkeModel& m) {
  nlohmann::json j;
  j["worlds"] = m.world_count();
  nlohmann::json order = nlohmann::json::array();
  for (int i = 0; i < m.world_count(); ++i)
    for (int jw = 0; jw < m.world_count(); ++jw)
      if (i != jw && m.leq(i, jw)) order.push_back({i, jw});
  j["order"] = order;
  nlohmann::json val = nlohmann::json::object();
  for (int w = 0; w < m.world_count(); ++w) {
    nlohmann::json atoms = nlohmann::json::array();
    for (const std::string& a : m.valuation(w)) atoms.push_back(a);
    val[std::to_string(w)] = atoms;
  }
  j["valuation"] = val;
  return j.dump(2);
}

KripkeModel load_model(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("invalid model JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("worlds") || !j["worlds"].is_number_integer())
    throw ModelError("model JSON needs an integer \"worlds\" field");
  int k = j["worlds"].get<int>();
  std::vector<std::pair<int, int>> pairs;
  if (j.contains("order")) {
    if (!j["order"].is_array()) throw ModelError("\"order\" must be an array of pairs");
    for (const auto& p : j["order"]) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer())
        throw ModelError("\"order\" entries must be pairs of world indices");
      pairs.emplace_back(p[0].get<int>(), p[1].get<int>());
    }
  }
  std::map<int, std::set<std::string>> valuation;
  if (j.contains("valuation")) {
    if (!j["valuation"].is_object()) throw ModelError("\"valuation\" must be an object");
    for (const auto& [key, atoms] : j["valuation"].items()) {
      int w;
      try {
        std::size_t used = 0;
        w = std::stoi(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        throw ModelError("valuation key '" + key + "' is not a world index");
      }
      if (!atoms.is_array()) throw ModelError("valuation for world " + key + " must be an array");
      std::set<std::string> set;
      for (const auto& a : atoms) {
        if (!a.is_string()) throw ModelError("valuation atoms must be strings");
        set.insert(a.get<std::string>());
      }
      valuation[w] = set;
    }
  }
  return KripkeModel(k, pairs, valuation);
}

}  // namespace mimpl
