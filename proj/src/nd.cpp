#include "mimpl/nd.hpp"

#include <array>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace mimpl {

Proof Proof::assume(Formula f, std::optional<int> label) {
  if (label && *label < 1) throw std::invalid_argument("discharge labels are positive integers");
  auto n = std::make_shared<ProofNode>();
  n->kind = ProofKind::assume;
  n->formula = f;
  n->label = label;
  return Proof(std::move(n));
}

Proof Proof::intro(int label, Formula antecedent, Proof body) {
  if (label < 1) throw std::invalid_argument("discharge labels are positive integers");
  auto n = std::make_shared<ProofNode>();
  n->kind = ProofKind::intro;
  n->formula = antecedent;
  n->label = label;
  n->body = body.node_;
  return Proof(std::move(n));
}

Proof Proof::elim(Proof minor, Proof major) {
  auto n = std::make_shared<ProofNode>();
  n->kind = ProofKind::elim;
  n->minor = minor.node_;
  n->major = major.node_;
  return Proof(std::move(n));
}

Proof Proof::peirce(int label, Proof body) {
  if (label < 1) throw std::invalid_argument("discharge labels are positive integers");
  auto n = std::make_shared<ProofNode>();
  n->kind = ProofKind::peirce;
  n->label = label;
  n->body = body.node_;
  return Proof(std::move(n));
}

namespace {

// Everything check needs to know about a subproof, synthesised bottom-up.
// Context-free, hence sound to memoise per physical node: a shared subtree
// is analysed once no matter how many tree positions reference it.
struct NodeFacts {
  Formula conclusion;
  std::map<Formula, std::uint64_t, FormulaOrder> open;
  std::map<int, std::pair<Formula, std::uint64_t>> pending;  // labelled, undischarged
  std::set<int> discharged;
  std::map<Formula, std::map<int, std::uint64_t>, FormulaOrder> census;

  explicit NodeFacts(Formula c) : conclusion(c) {}
};

using FactsMemo = std::unordered_map<const ProofNode*, NodeFacts>;

const NodeFacts& check_node(const ProofNode* n, LogicMode mode, FactsMemo& memo) {
  auto hit = memo.find(n);
  if (hit != memo.end()) return hit->second;

  switch (n->kind) {
    case ProofKind::assume: {
      NodeFacts facts(*n->formula);
      if (n->label)
        facts.pending.emplace(*n->label, std::make_pair(*n->formula, std::uint64_t{1}));
      else
        facts.open.emplace(*n->formula, 1);
      return memo.emplace(n, std::move(facts)).first->second;
    }

    case ProofKind::intro: {
      const NodeFacts& b = check_node(n->body.get(), mode, memo);
      int l = *n->label;
      Formula alpha = *n->formula;
      if (b.discharged.count(l))
        throw CheckError("label " + std::to_string(l) + " discharged twice on one path");
      NodeFacts facts(Formula::implies(alpha, b.conclusion));
      facts.open = b.open;
      facts.pending = b.pending;
      facts.discharged = b.discharged;
      facts.census = b.census;
      auto pit = facts.pending.find(l);
      if (pit != facts.pending.end()) {
        if (pit->second.first != alpha)
          throw CheckError("label " + std::to_string(l) + " assumes " +
                           pit->second.first.str() + " but the intro introduces " + alpha.str());
        facts.census[alpha][l] += pit->second.second;
        facts.pending.erase(pit);
      }
      facts.discharged.insert(l);
      return memo.emplace(n, std::move(facts)).first->second;
    }

    case ProofKind::elim: {
      const NodeFacts& mn = check_node(n->minor.get(), mode, memo);
      const NodeFacts& mj = check_node(n->major.get(), mode, memo);
      if (!mj.conclusion.is_implication())
        throw CheckError("elim major concludes " + mj.conclusion.str() +
                         ", which is not an implication");
      if (mj.conclusion.antecedent() != mn.conclusion)
        throw CheckError("elim mismatch: major expects " + mj.conclusion.antecedent().str() +
                         ", minor concludes " + mn.conclusion.str());
      NodeFacts facts(mj.conclusion.consequent());
      facts.open = mn.open;
      for (const auto& [f, c] : mj.open) facts.open[f] += c;
      facts.pending = mn.pending;
      for (const auto& [l, fc] : mj.pending) {
        auto [it, fresh] = facts.pending.emplace(l, fc);
        if (!fresh) {
          if (it->second.first != fc.first)
            throw CheckError("label " + std::to_string(l) + " assumes both " +
                             it->second.first.str() + " and " + fc.first.str());
          it->second.second += fc.second;
        }
      }
      facts.discharged = mn.discharged;
      facts.discharged.insert(mj.discharged.begin(), mj.discharged.end());
      facts.census = mn.census;
      for (const auto& [f, labels] : mj.census)
        for (const auto& [l, c] : labels) facts.census[f][l] += c;
      return memo.emplace(n, std::move(facts)).first->second;
    }

    case ProofKind::peirce: {
      if (mode != LogicMode::classical)
        throw CheckError("Peirce rule used outside classical mode");
      const NodeFacts& b = check_node(n->body.get(), mode, memo);
      int l = *n->label;
      if (b.discharged.count(l))
        throw CheckError("label " + std::to_string(l) + " discharged twice on one path");
      NodeFacts facts(b.conclusion);
      facts.open = b.open;
      facts.pending = b.pending;
      facts.discharged = b.discharged;
      facts.census = b.census;
      auto pit = facts.pending.find(l);
      if (pit != facts.pending.end()) {
        Formula assumed = pit->second.first;
        if (!assumed.is_implication() || assumed.antecedent() != b.conclusion)
          throw CheckError("Peirce discharge at label " + std::to_string(l) + " must assume " +
                           b.conclusion.str() + "->delta; leaf assumes " + assumed.str());
        facts.census[assumed][l] += pit->second.second;
        facts.pending.erase(pit);
      }
      facts.discharged.insert(l);
      return memo.emplace(n, std::move(facts)).first->second;
    }
  }
  throw std::logic_error("unreachable proof kind");
}

const NodeFacts& check_root(const Proof& p, LogicMode mode, FactsMemo& memo) {
  const NodeFacts& facts = check_node(p.raw(), mode, memo);
  if (!facts.pending.empty()) {
    const auto& [l, fc] = *facts.pending.begin();
    throw CheckError("labelled assumption (label " + std::to_string(l) + ", formula " +
                     fc.first.str() + ") has no discharging ancestor");
  }
  return facts;
}

}  // namespace

Judgement check(const Proof& p, LogicMode mode) {
  FactsMemo memo;
  const NodeFacts& facts = check_root(p, mode, memo);
  return Judgement{facts.conclusion, facts.open};
}

bool is_normal(const Proof& p) {
  check(p, LogicMode::minimal);
  std::unordered_map<const ProofNode*, bool> memo;
  auto rec = [&](auto&& self, const ProofNode* n) -> bool {
    auto hit = memo.find(n);
    if (hit != memo.end()) return hit->second;
    bool result = true;
    switch (n->kind) {
      case ProofKind::assume:
        break;
      case ProofKind::intro:
        result = self(self, n->body.get());
        break;
      case ProofKind::elim:
        result = n->major->kind != ProofKind::intro && self(self, n->minor.get()) &&
                 self(self, n->major.get());
        break;
      case ProofKind::peirce:
        result = self(self, n->body.get());
        break;
    }
    memo.emplace(n, result);
    return result;
  };
  return rec(rec, p.raw());
}

std::map<Formula, CensusEntry, FormulaOrder> assumption_census(const Proof& p) {
  FactsMemo memo;
  const NodeFacts& facts = check_root(p, LogicMode::classical, memo);
  std::map<Formula, CensusEntry, FormulaOrder> result;
  for (const auto& [f, labels] : facts.census) result[f].discharged_by = labels;
  for (const auto& [f, c] : facts.open) result[f].open_count = c;
  return result;
}

Proof substitute_proof(const Proof& p, const Substitution& s) {
  std::unordered_map<const ProofNode*, Proof> memo;
  auto rec = [&](auto&& self, const ProofNode* n) -> Proof {
    auto hit = memo.find(n);
    if (hit != memo.end()) return hit->second;
    Proof result = [&] {
      switch (n->kind) {
        case ProofKind::assume:
          return Proof::assume(substitute(*n->formula, s), n->label);
        case ProofKind::intro:
          return Proof::intro(*n->label, substitute(*n->formula, s), self(self, n->body.get()));
        case ProofKind::elim:
          return Proof::elim(self(self, n->minor.get()), self(self, n->major.get()));
        case ProofKind::peirce:
          return Proof::peirce(*n->label, self(self, n->body.get()));
      }
      throw std::logic_error("unreachable proof kind");
    }();
    memo.emplace(n, result);
    return result;
  };
  return rec(rec, p.raw());
}

Proof label_open_assumptions(const Proof& p, Formula f, int label) {
  std::unordered_map<const ProofNode*, Proof> memo;
  // Untouched subtrees come back as the same pointer, so sharing survives.
  auto rec = [&](auto&& self, const ProofPtr& n) -> Proof {
    auto hit = memo.find(n.get());
    if (hit != memo.end()) return hit->second;
    Proof result = [&]() -> Proof {
      switch (n->kind) {
        case ProofKind::assume:
          if (!n->label && *n->formula == f) return Proof::assume(f, label);
          return Proof(n);
        case ProofKind::intro: {
          Proof b = self(self, n->body);
          if (b.raw() == n->body.get()) return Proof(n);
          return Proof::intro(*n->label, *n->formula, b);
        }
        case ProofKind::elim: {
          Proof mn = self(self, n->minor);
          Proof mj = self(self, n->major);
          if (mn.raw() == n->minor.get() && mj.raw() == n->major.get()) return Proof(n);
          return Proof::elim(mn, mj);
        }
        case ProofKind::peirce: {
          Proof b = self(self, n->body);
          if (b.raw() == n->body.get()) return Proof(n);
          return Proof::peirce(*n->label, b);
        }
      }
      throw std::logic_error("unreachable proof kind");
    }();
    memo.emplace(n.get(), result);
    return result;
  };
  return rec(rec, p.ptr());
}

namespace {

// Structural identity classes: interned formulas make formula pointers a
// sound part of the key.
std::map<const ProofNode*, std::uint64_t> classify_nodes(const Proof& p) {
  std::map<std::array<std::uint64_t, 5>, std::uint64_t> classes;
  std::map<const ProofNode*, std::uint64_t> class_of;
  auto classify = [&](auto&& self, const ProofNode* n) -> std::uint64_t {
    auto hit = class_of.find(n);
    if (hit != class_of.end()) return hit->second;
    std::array<std::uint64_t, 5> key{};
    key[0] = static_cast<std::uint64_t>(n->kind);
    key[1] = n->formula ? reinterpret_cast<std::uint64_t>(n->formula->raw()) : 0;
    key[2] = n->label ? std::uint64_t(*n->label) : 0;
    switch (n->kind) {
      case ProofKind::assume:
        break;
      case ProofKind::intro:
      case ProofKind::peirce:
        key[3] = self(self, n->body.get()) + 1;
        break;
      case ProofKind::elim:
        key[3] = self(self, n->minor.get()) + 1;
        key[4] = self(self, n->major.get()) + 1;
        break;
    }
    auto [it, fresh] = classes.emplace(key, classes.size());
    (void)fresh;
    std::uint64_t id = it->second;
    class_of.emplace(n, id);
    return id;
  };
  classify(classify, p.raw());
  return class_of;
}

}  // namespace

DagStats dag_stats(const Proof& p) {
  std::unordered_map<const ProofNode*, std::uint64_t> tree_memo;
  auto count = [&](auto&& self, const ProofNode* n) -> std::uint64_t {
    auto hit = tree_memo.find(n);
    if (hit != tree_memo.end()) return hit->second;
    std::uint64_t total = 1;
    if (n->minor) total += self(self, n->minor.get());
    if (n->major) total += self(self, n->major.get());
    if (n->body) total += self(self, n->body.get());
    tree_memo.emplace(n, total);
    return total;
  };

  std::map<const ProofNode*, std::uint64_t> class_of = classify_nodes(p);
  std::set<std::uint64_t> ids;
  for (const auto& [node, id] : class_of) ids.insert(id);

  DagStats stats;
  stats.tree_nodes = count(count, p.raw());
  stats.distinct_subproofs = ids.size();
  return stats;
}

std::map<const ProofNode*, std::uint64_t> canonical_classes(const Proof& p) {
  return classify_nodes(p);
}

namespace {

nlohmann::json node_to_json(const ProofNode* n) {
  nlohmann::json j;
  switch (n->kind) {
    case ProofKind::assume:
      j["kind"] = "assume";
      j["formula"] = n->formula->str();
      if (n->label) j["label"] = *n->label;
      break;
    case ProofKind::intro:
      j["kind"] = "intro";
      j["label"] = *n->label;
      j["formula"] = n->formula->str();
      j["body"] = node_to_json(n->body.get());
      break;
    case ProofKind::elim:
      j["kind"] = "elim";
      j["minor"] = node_to_json(n->minor.get());
      j["major"] = node_to_json(n->major.get());
      break;
    case ProofKind::peirce:
      j["kind"] = "peirce";
      j["label"] = *n->label;
      j["body"] = node_to_json(n->body.get());
      break;
  }
  return j;
}

// First leaf labelled l, scanning minor/major/body depth-first. Used to
// recover an intro antecedent the file left implicit.
std::optional<Formula> find_labelled_leaf(const Proof& p, int l) {
  std::unordered_set<const ProofNode*> seen;
  std::optional<Formula> found;
  auto rec = [&](auto&& self, const ProofNode* n) -> void {
    if (found || !seen.insert(n).second) return;
    if (n->kind == ProofKind::assume) {
      if (n->label && *n->label == l) found = *n->formula;
      return;
    }
    if (n->minor) self(self, n->minor.get());
    if (n->major) self(self, n->major.get());
    if (n->body) self(self, n->body.get());
  };
  rec(rec, p.raw());
  return found;
}

int get_label(const nlohmann::json& j) {
  if (!j.contains("label") || !j["label"].is_number_integer())
    throw CheckError("proof JSON: node needs an integer \"label\"");
  return j["label"].get<int>();
}

Formula get_formula(const nlohmann::json& j) {
  if (!j.contains("formula") || !j["formula"].is_string())
    throw CheckError("proof JSON: node needs a \"formula\" string");
  return parse_formula(j["formula"].get<std::string>());
}

Proof node_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw CheckError("proof JSON: every node is an object with a \"kind\"");
  std::string kind = j["kind"].get<std::string>();
  if (kind == "assume") {
    std::optional<int> label;
    if (j.contains("label")) {
      if (!j["label"].is_number_integer())
        throw CheckError("proof JSON: assume \"label\" must be an integer");
      label = j["label"].get<int>();
    }
    return Proof::assume(get_formula(j), label);
  }
  if (kind == "intro") {
    int label = get_label(j);
    if (!j.contains("body")) throw CheckError("proof JSON: intro needs a \"body\"");
    Proof body = node_from_json(j["body"]);
    if (j.contains("formula")) return Proof::intro(label, get_formula(j), body);
    std::optional<Formula> pinned = find_labelled_leaf(body, label);
    if (!pinned)
      throw CheckError("proof JSON: intro with label " + std::to_string(label) +
                       " has no \"formula\" and no leaf carries that label (vacuous "
                       "discharge needs the formula spelled out)");
    return Proof::intro(label, *pinned, body);
  }
  if (kind == "elim") {
    if (!j.contains("minor") || !j.contains("major"))
      throw CheckError("proof JSON: elim needs \"minor\" and \"major\"");
    return Proof::elim(node_from_json(j["minor"]), node_from_json(j["major"]));
  }
  if (kind == "peirce") {
    int label = get_label(j);
    if (!j.contains("body")) throw CheckError("proof JSON: peirce needs a \"body\"");
    return Proof::peirce(label, node_from_json(j["body"]));
  }
  throw CheckError("proof JSON: unknown kind '" + kind + "'");
}

}  // namespace

std::string proof_to_json(const Proof& p) { return node_to_json(p.raw()).dump(2); }

Proof proof_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw CheckError(std::string("invalid proof JSON: ") + e.what());
  }
  return node_from_json(j);
}

}  // namespace mimpl
