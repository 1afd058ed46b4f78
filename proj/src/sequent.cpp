#include "mimpl/sequent.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace mimpl {

Sequent Sequent::make(std::vector<Formula> left, Formula focus, std::vector<Formula> bracket) {
  std::sort(left.begin(), left.end(), FormulaOrder());
  return Sequent{std::move(left), focus, std::move(bracket)};
}

bool Sequent::operator==(const Sequent& other) const {
  return left == other.left && focus == other.focus && bracket == other.bracket;
}

std::string Sequent::str() const {
  std::string out;
  for (std::size_t i = 0; i < left.size(); ++i) {
    if (i) out += ", ";
    out += left[i].str();
  }
  if (!left.empty()) out += ' ';
  out += "|- ";
  out += focus.str();
  if (!bracket.empty()) {
    out += " [";
    for (std::size_t i = 0; i < bracket.size(); ++i) {
      if (i) out += ", ";
      out += bracket[i].str();
    }
    out += ']';
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Formula parse_fragment(std::string_view fragment, std::size_t offset) {
  try {
    return parse_formula(fragment);
  } catch (const ParseError& e) {
    throw ParseError(std::string(e.what()), offset + e.position());
  }
}

std::vector<Formula> parse_formula_list(std::string_view text, std::size_t offset) {
  std::vector<Formula> out;
  if (trim(text).empty()) return out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = text.find(',', start);
    std::string_view piece = text.substr(start, comma == std::string_view::npos
                                                    ? std::string_view::npos
                                                    : comma - start);
    if (trim(piece).empty()) throw ParseError("empty formula in list", offset + start);
    out.push_back(parse_fragment(piece, offset + start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

Sequent parse_sequent(const std::string& text) {
  std::size_t turnstile = text.find("|-");
  if (turnstile == std::string::npos)
    throw ParseError("sequent needs a '|-' separator", text.size());
  std::string_view left_text = std::string_view(text).substr(0, turnstile);
  std::string_view rest = std::string_view(text).substr(turnstile + 2);
  std::size_t rest_offset = turnstile + 2;

  std::vector<Formula> bracket;
  std::string_view focus_text = rest;
  std::size_t open = rest.find('[');
  if (open != std::string_view::npos) {
    std::size_t close = rest.rfind(']');
    if (close == std::string_view::npos || close < open)
      throw ParseError("unbalanced '[' in bracket", rest_offset + open);
    if (!trim(rest.substr(close + 1)).empty())
      throw ParseError("trailing input after bracket", rest_offset + close + 1);
    bracket = parse_formula_list(rest.substr(open + 1, close - open - 1), rest_offset + open + 1);
    focus_text = rest.substr(0, open);
  }
  if (trim(focus_text).empty())
    throw ParseError("sequent needs a focus formula", rest_offset);
  Formula focus = parse_fragment(trim(focus_text),
                                 rest_offset + (trim(focus_text).data() - rest.data()));
  std::vector<Formula> left = parse_formula_list(left_text, 0);
  return Sequent::make(std::move(left), focus, std::move(bracket));
}

namespace {

bool multiset_contains(const std::vector<Formula>& sorted_left, Formula f) {
  return std::binary_search(sorted_left.begin(), sorted_left.end(), f, FormulaOrder());
}

std::vector<Formula> with_added(const std::vector<Formula>& sorted_left, Formula f) {
  std::vector<Formula> out = sorted_left;
  out.insert(std::upper_bound(out.begin(), out.end(), f, FormulaOrder()), f);
  return out;
}

std::vector<Formula> with_removed_one(const std::vector<Formula>& sorted_left, Formula f) {
  std::vector<Formula> out = sorted_left;
  auto it = std::lower_bound(out.begin(), out.end(), f, FormulaOrder());
  out.erase(it);  // caller guarantees presence
  return out;
}

// The two premises of a left rule on principal alpha->beta.
std::pair<Sequent, Sequent> left_premises(const Sequent& s, Formula principal,
                                          SeqVariant variant) {
  Formula alpha = principal.antecedent();
  Formula beta = principal.consequent();
  std::vector<Formula> base =
      variant == SeqVariant::weak ? with_removed_one(s.left, principal) : s.left;
  std::vector<Formula> new_bracket;
  new_bracket.reserve(s.bracket.size() + 1);
  new_bracket.push_back(s.focus);
  new_bracket.insert(new_bracket.end(), s.bracket.begin(), s.bracket.end());
  Sequent p1{base, alpha, std::move(new_bracket)};
  Sequent p2{with_added(base, beta), s.focus, {}};
  return {std::move(p1), std::move(p2)};
}

using Clock = std::chrono::steady_clock;

struct Prover {
  SeqVariant variant;
  std::optional<std::uint64_t> node_cap;
  std::optional<Clock::time_point> deadline;
  std::uint64_t nodes = 0;
  bool truncated = false;

  // Strong variant: per-branch repeat check on (left set, focus).
  using BranchKey = std::vector<std::uintptr_t>;
  struct BranchKeyHash {
    std::size_t operator()(const BranchKey& key) const {
      std::size_t h = 1469598103934665603ULL;
      for (std::uintptr_t x : key) {
        h ^= x;
        h *= 1099511628211ULL;
      }
      return h;
    }
  };
  std::unordered_set<BranchKey, BranchKeyHash> branch;

  std::map<Formula, std::string, FormulaOrder> str_cache;

  struct Out {
    SequentProof proof;  // null on failure
    TracePtr trace;      // null on success
  };

  bool budget_hit() {
    if (truncated) return true;
    if (node_cap && nodes >= *node_cap) truncated = true;
    if (!truncated && deadline && (nodes & 1023) == 0 && Clock::now() >= *deadline)
      truncated = true;
    return truncated;
  }

  const std::string& printed(Formula f) {
    auto it = str_cache.find(f);
    if (it != str_cache.end()) return it->second;
    return str_cache.emplace(f, f.str()).first->second;
  }

  BranchKey make_key(const Sequent& s) {
    BranchKey key;
    key.reserve(s.left.size() + 1);
    key.push_back(reinterpret_cast<std::uintptr_t>(s.focus.raw()));
    const FormulaNode* prev = nullptr;
    for (const Formula& f : s.left) {
      if (f.raw() == prev) continue;  // set semantics: left is sorted
      prev = f.raw();
      key.push_back(reinterpret_cast<std::uintptr_t>(f.raw()));
    }
    return key;
  }

  Out search(const Sequent& s) {
    ++nodes;
    if (budget_hit())
      return Out{nullptr, std::make_shared<TraceNode>(
                              TraceNode{s, TraceOutcome::truncated, {}})};

    if (s.focus.is_atom() && multiset_contains(s.left, s.focus)) {
      auto node = std::make_shared<SequentProofNode>(
          SequentProofNode{SeqRule::axiom, s, std::nullopt, {}});
      return Out{node, nullptr};
    }

    BranchKey key;
    bool pushed = false;
    if (variant == SeqVariant::strong) {
      key = make_key(s);
      if (branch.count(key))
        return Out{nullptr,
                   std::make_shared<TraceNode>(TraceNode{s, TraceOutcome::pruned, {}})};
      branch.insert(key);
      pushed = true;
    }

    std::vector<TraceAttempt> attempts;
    SequentProof proof;

    if (s.focus.is_implication()) {
      Sequent premise = Sequent::make(with_added(s.left, s.focus.antecedent()),
                                      s.focus.consequent(), s.bracket);
      Out sub = search(premise);
      if (sub.proof) {
        proof = std::make_shared<SequentProofNode>(
            SequentProofNode{SeqRule::right_intro, s, std::nullopt, {sub.proof}});
      } else {
        attempts.push_back(TraceAttempt{SeqRule::right_intro, std::nullopt, {sub.trace}, {}});
      }
    }

    if (!proof && !truncated) {
      // Distinct implication principals, printed order.
      std::vector<Formula> principals;
      const FormulaNode* prev = nullptr;
      for (const Formula& f : s.left) {
        if (f.raw() == prev) continue;
        prev = f.raw();
        if (f.is_implication()) principals.push_back(f);
      }
      std::sort(principals.begin(), principals.end(),
                [&](Formula a, Formula b) { return printed(a) < printed(b); });

      SeqRule rule = variant == SeqVariant::weak ? SeqRule::left_weak : SeqRule::left_strong;
      for (Formula principal : principals) {
        if (truncated) break;
        auto [p1, p2] = left_premises(s, principal, variant);
        Out first = search(p1);
        if (!first.proof) {
          attempts.push_back(
              TraceAttempt{rule, principal, {first.trace, nullptr}, {nullptr, nullptr}});
          continue;
        }
        Out second = search(p2);
        if (!second.proof) {
          attempts.push_back(
              TraceAttempt{rule, principal, {nullptr, second.trace}, {first.proof, nullptr}});
          continue;
        }
        proof = std::make_shared<SequentProofNode>(
            SequentProofNode{rule, s, principal, {first.proof, second.proof}});
        break;
      }
    }

    if (pushed) branch.erase(key);
    if (proof) return Out{proof, nullptr};
    TraceOutcome outcome = truncated ? TraceOutcome::truncated : TraceOutcome::failed;
    return Out{nullptr, std::make_shared<TraceNode>(
                            TraceNode{s, outcome, std::move(attempts)})};
  }
};

}  // namespace

SequentProveResult prove(const Sequent& goal, SeqVariant variant, const SequentLimits& limits) {
  auto start = Clock::now();
  Prover prover;
  prover.variant = variant;
  prover.node_cap = limits.node_cap;
  if (limits.time_cap) prover.deadline = Clock::now() + *limits.time_cap;

  Prover::Out out = prover.search(goal);

  SequentProveResult result;
  result.nodes = prover.nodes;
  result.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);
  if (out.proof) {
    SequentCheck chk = check_sequent_proof(out.proof);
    if (!chk) throw std::logic_error("search produced an invalid sequent proof: " + chk.error);
    result.proof = out.proof;
    result.exhausted = false;
  } else {
    result.exhausted = !prover.truncated;
    result.trace = FailureTrace{out.trace, result.exhausted};
  }
  return result;
}

SequentCheck check_sequent_proof(const SequentProof& p) {
  if (!p) return SequentCheck{false, "null proof"};
  auto fail = [](const SequentProofNode* n, const std::string& why) {
    return SequentCheck{false, "at '" + n->sequent.str() + "': " + why};
  };
  auto rec = [&](auto&& self, const SequentProofNode* n) -> SequentCheck {
    switch (n->rule) {
      case SeqRule::axiom: {
        if (!n->premises.empty()) return fail(n, "axiom has premises");
        if (!n->sequent.focus.is_atom()) return fail(n, "axiom focus is not an atom");
        if (!multiset_contains(n->sequent.left, n->sequent.focus))
          return fail(n, "axiom focus missing from the left context");
        return SequentCheck{true, ""};
      }
      case SeqRule::right_intro: {
        if (n->premises.size() != 1) return fail(n, "right intro needs one premise");
        if (!n->sequent.focus.is_implication())
          return fail(n, "right intro focus is not an implication");
        Sequent expected = Sequent::make(with_added(n->sequent.left, n->sequent.focus.antecedent()),
                                         n->sequent.focus.consequent(), n->sequent.bracket);
        if (!(n->premises[0]->sequent == expected))
          return fail(n, "right intro premise is " + n->premises[0]->sequent.str() +
                             ", expected " + expected.str());
        return self(self, n->premises[0].get());
      }
      case SeqRule::left_weak:
      case SeqRule::left_strong: {
        SeqVariant v = n->rule == SeqRule::left_weak ? SeqVariant::weak : SeqVariant::strong;
        if (n->premises.size() != 2) return fail(n, "left rule needs two premises");
        if (!n->principal) return fail(n, "left rule needs a principal formula");
        if (!n->principal->is_implication())
          return fail(n, "left principal is not an implication");
        if (!multiset_contains(n->sequent.left, *n->principal))
          return fail(n, "left principal missing from the left context");
        auto [p1, p2] = left_premises(n->sequent, *n->principal, v);
        if (!(n->premises[0]->sequent == p1))
          return fail(n, "first premise is " + n->premises[0]->sequent.str() + ", expected " +
                             p1.str());
        if (!(n->premises[1]->sequent == p2))
          return fail(n, "second premise is " + n->premises[1]->sequent.str() + ", expected " +
                             p2.str());
        SequentCheck c1 = self(self, n->premises[0].get());
        if (!c1) return c1;
        return self(self, n->premises[1].get());
      }
    }
    return SequentCheck{false, "unknown rule"};
  };
  return rec(rec, p.get());
}

namespace {

const char* rule_name(SeqRule r) {
  switch (r) {
    case SeqRule::axiom: return "axiom";
    case SeqRule::right_intro: return "right_intro";
    case SeqRule::left_weak: return "left_weak";
    case SeqRule::left_strong: return "left_strong";
  }
  return "?";
}

nlohmann::json seq_node_to_json(const SequentProofNode* n) {
  nlohmann::json j;
  j["rule"] = rule_name(n->rule);
  j["sequent"] = n->sequent.str();
  if (n->principal) j["principal"] = n->principal->str();
  if (!n->premises.empty()) {
    nlohmann::json premises = nlohmann::json::array();
    for (const auto& p : n->premises) premises.push_back(seq_node_to_json(p.get()));
    j["premises"] = premises;
  }
  return j;
}

SequentProof seq_node_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("rule") || !j["rule"].is_string() ||
      !j.contains("sequent") || !j["sequent"].is_string())
    throw std::runtime_error("sequent proof JSON: node needs \"rule\" and \"sequent\"");
  std::string rule_text = j["rule"].get<std::string>();
  SeqRule rule;
  if (rule_text == "axiom")
    rule = SeqRule::axiom;
  else if (rule_text == "right_intro")
    rule = SeqRule::right_intro;
  else if (rule_text == "left_weak")
    rule = SeqRule::left_weak;
  else if (rule_text == "left_strong")
    rule = SeqRule::left_strong;
  else
    throw std::runtime_error("sequent proof JSON: unknown rule '" + rule_text + "'");

  Sequent s = parse_sequent(j["sequent"].get<std::string>());
  std::optional<Formula> principal;
  if (j.contains("principal")) {
    if (!j["principal"].is_string())
      throw std::runtime_error("sequent proof JSON: \"principal\" must be a string");
    principal = parse_formula(j["principal"].get<std::string>());
  }
  std::vector<SequentProof> premises;
  if (j.contains("premises")) {
    if (!j["premises"].is_array())
      throw std::runtime_error("sequent proof JSON: \"premises\" must be an array");
    for (const auto& p : j["premises"]) premises.push_back(seq_node_from_json(p));
  }
  return std::make_shared<SequentProofNode>(
      SequentProofNode{rule, std::move(s), principal, std::move(premises)});
}

}  // namespace

std::string sequent_proof_to_json(const SequentProof& p) {
  return seq_node_to_json(p.get()).dump(2);
}

SequentProof sequent_proof_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("invalid sequent proof JSON: ") + e.what());
  }
  return seq_node_from_json(j);
}

namespace {

void absorb_left_atoms(const Sequent& s, std::set<std::string>& val) {
  for (const Formula& f : s.left)
    if (f.is_atom()) val.insert(f.atom_name());
}

// Verifies that the model falsifies the root sequent: some world satisfies
// every left formula and not the focus.
bool falsifies(const KripkeModel& m, const Sequent& root) {
  for (int w = 0; w < m.world_count(); ++w) {
    bool all_left = true;
    for (const Formula& f : root.left)
      if (!satisfies(m, w, f)) {
        all_left = false;
        break;
      }
    if (all_left && !satisfies(m, w, root.focus)) return true;
  }
  return false;
}

std::optional<KripkeModel> build_chain_model(const std::vector<std::set<std::string>>& worlds,
                                             const Sequent& root) {
  int k = int(worlds.size());
  if (k < 1 || k > kMaxWorlds) return std::nullopt;
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i + 1 < k; ++i) pairs.emplace_back(i, i + 1);
  std::map<int, std::set<std::string>> valuation;
  for (int w = 0; w < k; ++w) valuation[w] = worlds[w];
  KripkeModel m(k, pairs, valuation);
  if (falsifies(m, root)) return m;
  return std::nullopt;
}

std::optional<KripkeModel> finish_candidate(const std::vector<std::set<std::string>>& worlds,
                                            const Sequent& root) {
  // Consecutive equal valuations merge first; the unmerged chain is the
  // fallback. Both must pass the semantic gate.
  std::vector<std::set<std::string>> merged;
  for (const auto& v : worlds)
    if (merged.empty() || merged.back() != v) merged.push_back(v);
  if (auto m = build_chain_model(merged, root)) return m;
  if (merged.size() != worlds.size())
    if (auto m = build_chain_model(worlds, root)) return m;
  return std::nullopt;
}

// Depth-first over the failed branches of the trace. New world per
// right_intro descent; left-rule descents prefer the second premise (its
// failure propagates soundly: beta true at a world forces alpha->beta true
// upward by persistence).
std::optional<KripkeModel> walk(const TraceNode* node, std::vector<std::set<std::string>> worlds,
                                const Sequent& root) {
  absorb_left_atoms(node->sequent, worlds.back());
  if (node->attempts.empty()) return finish_candidate(worlds, root);

  for (const TraceAttempt& attempt : node->attempts) {
    if (attempt.rule == SeqRule::right_intro) {
      if (!attempt.premises.empty() && attempt.premises[0]) {
        std::vector<std::set<std::string>> next = worlds;
        next.push_back(next.back());
        if (auto m = walk(attempt.premises[0].get(), std::move(next), root)) return m;
      }
      continue;
    }
    if (attempt.premises.size() >= 2 && attempt.premises[1])
      if (auto m = walk(attempt.premises[1].get(), worlds, root)) return m;
    if (!attempt.premises.empty() && attempt.premises[0])
      if (auto m = walk(attempt.premises[0].get(), worlds, root)) return m;
  }
  return std::nullopt;
}

}  // namespace

ExtractionResult extract_countermodel(const FailureTrace& trace) {
  if (!trace.root) throw std::invalid_argument("extract_countermodel: empty trace");
  if (!trace.exhaustive)
    throw std::invalid_argument(
        "extract_countermodel: trace is not exhaustive (search was truncated)");
  std::vector<std::set<std::string>> worlds(1);
  if (auto m = walk(trace.root.get(), std::move(worlds), trace.root->sequent))
    return ExtractionResult{std::move(m), "certified"};
  return ExtractionResult{std::nullopt, "failed search, no counter-model certified"};
}

}  // namespace mimpl
