#include "mimpl/export.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace mimpl {

namespace {

// Atom names with a digit tail become subscripted: D12 -> D_{12}.
std::string latex_atom(const std::string& name) {
  std::size_t split = name.size();
  while (split > 0 && std::isdigit(static_cast<unsigned char>(name[split - 1]))) --split;
  if (split == name.size() || split == 0) return name;
  return name.substr(0, split) + "_{" + name.substr(split) + "}";
}

void latex_formula_into(Formula f, std::string& out) {
  while (f.is_implication()) {
    Formula a = f.antecedent();
    if (a.is_implication()) {
      out += '(';
      latex_formula_into(a, out);
      out += ')';
    } else {
      out += latex_atom(a.atom_name());
    }
    out += " \\to ";
    f = f.consequent();
  }
  out += latex_atom(f.atom_name());
}

std::string latex_formula(Formula f) {
  std::string out;
  latex_formula_into(f, out);
  return out;
}

Formula conclusion_of(const ProofNode* n,
                      std::unordered_map<const ProofNode*, Formula>& memo) {
  auto hit = memo.find(n);
  if (hit != memo.end()) return hit->second;
  Formula result = [&]() -> Formula {
    switch (n->kind) {
      case ProofKind::assume:
        return *n->formula;
      case ProofKind::intro:
        return Formula::implies(*n->formula, conclusion_of(n->body.get(), memo));
      case ProofKind::elim:
        return conclusion_of(n->major.get(), memo).consequent();
      case ProofKind::peirce:
        return conclusion_of(n->body.get(), memo);
    }
    throw std::logic_error("unreachable proof kind");
  }();
  memo.emplace(n, result);
  return result;
}

void nd_latex_rec(const ProofNode* n, std::unordered_map<const ProofNode*, Formula>& concl,
                  std::ostringstream& out) {
  switch (n->kind) {
    case ProofKind::assume:
      if (n->label)
        out << "\\AxiomC{$[" << latex_formula(*n->formula) << "]^{" << *n->label << "}$}\n";
      else
        out << "\\AxiomC{$" << latex_formula(*n->formula) << "$}\n";
      break;
    case ProofKind::intro:
      nd_latex_rec(n->body.get(), concl, out);
      out << "\\RightLabel{$\\to$I$^{" << *n->label << "}$}\n";
      out << "\\UnaryInfC{$" << latex_formula(conclusion_of(n, concl)) << "$}\n";
      break;
    case ProofKind::elim:
      nd_latex_rec(n->minor.get(), concl, out);
      nd_latex_rec(n->major.get(), concl, out);
      out << "\\RightLabel{$\\to$E}\n";
      out << "\\BinaryInfC{$" << latex_formula(conclusion_of(n, concl)) << "$}\n";
      break;
    case ProofKind::peirce:
      nd_latex_rec(n->body.get(), concl, out);
      out << "\\RightLabel{P$^{" << *n->label << "}$}\n";
      out << "\\UnaryInfC{$" << latex_formula(conclusion_of(n, concl)) << "$}\n";
      break;
  }
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

const char* nd_rule_tag(ProofKind k) {
  switch (k) {
    case ProofKind::assume: return "assume";
    case ProofKind::intro: return "intro";
    case ProofKind::elim: return "elim";
    case ProofKind::peirce: return "peirce";
  }
  return "?";
}

std::string nd_node_label(const ProofNode* n,
                          std::unordered_map<const ProofNode*, Formula>& concl) {
  std::string label = nd_rule_tag(n->kind);
  if (n->label) label += " " + std::to_string(*n->label);
  label += "\\n" + dot_escape(conclusion_of(n, concl).str());
  return label;
}

}  // namespace

std::string nd_to_latex(const Proof& p) {
  std::unordered_map<const ProofNode*, Formula> concl;
  std::ostringstream out;
  out << "\\begin{prooftree}\n";
  nd_latex_rec(p.raw(), concl, out);
  out << "\\end{prooftree}\n";
  return out.str();
}

std::string nd_to_dot(const Proof& p, bool shared) {
  std::unordered_map<const ProofNode*, Formula> concl;
  std::ostringstream out;
  out << "digraph proof {\n  node [shape=box, fontname=\"monospace\"];\n";

  if (shared) {
    std::map<const ProofNode*, std::uint64_t> class_of = canonical_classes(p);
    std::set<std::uint64_t> emitted;
    std::set<std::pair<std::uint64_t, std::pair<std::uint64_t, int>>> edges;
    auto rec = [&](auto&& self, const ProofNode* n) -> void {
      std::uint64_t id = class_of.at(n);
      if (!emitted.insert(id).second) return;
      out << "  n" << id << " [label=\"" << nd_node_label(n, concl) << "\"];\n";
      auto edge = [&](const ProofNode* child, const char* tag, int slot) {
        std::uint64_t cid = class_of.at(child);
        if (edges.insert({id, {cid, slot}}).second)
          out << "  n" << id << " -> n" << cid << " [label=\"" << tag << "\"];\n";
        self(self, child);
      };
      if (n->kind == ProofKind::elim) {
        edge(n->minor.get(), "minor", 0);
        edge(n->major.get(), "major", 1);
      } else if (n->body) {
        edge(n->body.get(), "body", 0);
      }
    };
    rec(rec, p.raw());
  } else {
    std::uint64_t next_id = 0;
    auto rec = [&](auto&& self, const ProofNode* n) -> std::uint64_t {
      std::uint64_t id = next_id++;
      out << "  n" << id << " [label=\"" << nd_node_label(n, concl) << "\"];\n";
      auto edge = [&](const ProofNode* child, const char* tag) {
        std::uint64_t cid = self(self, child);
        out << "  n" << id << " -> n" << cid << " [label=\"" << tag << "\"];\n";
      };
      if (n->kind == ProofKind::elim) {
        edge(n->minor.get(), "minor");
        edge(n->major.get(), "major");
      } else if (n->body) {
        edge(n->body.get(), "body");
      }
      return id;
    };
    rec(rec, p.raw());
  }
  out << "}\n";
  return out.str();
}

namespace {

std::string latex_sequent(const Sequent& s) {
  std::string out;
  for (std::size_t i = 0; i < s.left.size(); ++i) {
    if (i) out += ", ";
    out += latex_formula(s.left[i]);
  }
  out += " \\vdash ";
  out += latex_formula(s.focus);
  if (!s.bracket.empty()) {
    out += "\\ [";
    for (std::size_t i = 0; i < s.bracket.size(); ++i) {
      if (i) out += ", ";
      out += latex_formula(s.bracket[i]);
    }
    out += ']';
  }
  return out;
}

const char* seq_rule_latex(SeqRule r) {
  switch (r) {
    case SeqRule::axiom: return "Ax";
    case SeqRule::right_intro: return "$\\to$R";
    case SeqRule::left_weak: return "$\\to$L$^{-}$";
    case SeqRule::left_strong: return "$\\to$L";
  }
  return "?";
}

const char* seq_rule_tag(SeqRule r) {
  switch (r) {
    case SeqRule::axiom: return "axiom";
    case SeqRule::right_intro: return "right_intro";
    case SeqRule::left_weak: return "left_weak";
    case SeqRule::left_strong: return "left_strong";
  }
  return "?";
}

void seq_latex_rec(const SequentProofNode* n, std::ostringstream& out) {
  for (const auto& premise : n->premises) seq_latex_rec(premise.get(), out);
  if (n->premises.empty()) out << "\\AxiomC{}\n";
  out << "\\RightLabel{" << seq_rule_latex(n->rule) << "}\n";
  if (n->premises.size() <= 1)
    out << "\\UnaryInfC{$" << latex_sequent(n->sequent) << "$}\n";
  else
    out << "\\BinaryInfC{$" << latex_sequent(n->sequent) << "$}\n";
}

}  // namespace

std::string sequent_to_latex(const SequentProof& p) {
  std::ostringstream out;
  out << "\\begin{prooftree}\n";
  seq_latex_rec(p.get(), out);
  out << "\\end{prooftree}\n";
  return out.str();
}

std::string sequent_to_dot(const SequentProof& p, bool shared) {
  std::ostringstream out;
  out << "digraph proof {\n  node [shape=box, fontname=\"monospace\"];\n";

  if (shared) {
    // Structural classes keyed by (rule, sequent text, child class ids).
    std::map<std::string, std::uint64_t> classes;
    std::unordered_map<const SequentProofNode*, std::uint64_t> class_of;
    auto classify = [&](auto&& self, const SequentProofNode* n) -> std::uint64_t {
      auto hit = class_of.find(n);
      if (hit != class_of.end()) return hit->second;
      std::string key = std::string(seq_rule_tag(n->rule)) + "|" + n->sequent.str();
      for (const auto& premise : n->premises)
        key += "|" + std::to_string(self(self, premise.get()));
      auto [it, fresh] = classes.emplace(key, classes.size());
      (void)fresh;
      class_of.emplace(n, it->second);
      return it->second;
    };
    classify(classify, p.get());

    std::set<std::uint64_t> emitted;
    std::set<std::pair<std::uint64_t, std::uint64_t>> edges;
    auto rec = [&](auto&& self, const SequentProofNode* n) -> void {
      std::uint64_t id = class_of.at(n);
      if (!emitted.insert(id).second) return;
      out << "  n" << id << " [label=\"" << seq_rule_tag(n->rule) << "\\n"
          << dot_escape(n->sequent.str()) << "\"];\n";
      for (const auto& premise : n->premises) {
        std::uint64_t cid = class_of.at(premise.get());
        if (edges.insert({id, cid}).second) out << "  n" << id << " -> n" << cid << ";\n";
        self(self, premise.get());
      }
    };
    rec(rec, p.get());
  } else {
    std::uint64_t next_id = 0;
    auto rec = [&](auto&& self, const SequentProofNode* n) -> std::uint64_t {
      std::uint64_t id = next_id++;
      out << "  n" << id << " [label=\"" << seq_rule_tag(n->rule) << "\\n"
          << dot_escape(n->sequent.str()) << "\"];\n";
      for (const auto& premise : n->premises) {
        std::uint64_t cid = self(self, premise.get());
        out << "  n" << id << " -> n" << cid << ";\n";
      }
      return id;
    };
    rec(rec, p.get());
  }
  out << "}\n";
  return out.str();
}

}  // namespace mimpl
