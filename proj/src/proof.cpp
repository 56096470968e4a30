#include "proofcomp/proof.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace proofcomp {

std::string kind_name(StructureKind k) {
  switch (k) {
    case StructureKind::Direct: return "direct";
    case StructureKind::DefinitionChasing: return "definition-chasing";
    case StructureKind::Iff: return "iff";
    case StructureKind::Cases: return "cases";
    case StructureKind::Induction: return "induction";
    case StructureKind::Contrapositive: return "contrapositive";
    case StructureKind::Contradiction: return "contradiction";
    case StructureKind::EquivalenceChain: return "equivalence-chain";
  }
  return "direct";
}

std::optional<StructureKind> kind_from_name(const std::string& name) {
  static const std::map<std::string, StructureKind> table = {
      {"direct", StructureKind::Direct},
      {"definition-chasing", StructureKind::DefinitionChasing},
      {"iff", StructureKind::Iff},
      {"cases", StructureKind::Cases},
      {"induction", StructureKind::Induction},
      {"contrapositive", StructureKind::Contrapositive},
      {"contradiction", StructureKind::Contradiction},
      {"equivalence-chain", StructureKind::EquivalenceChain},
  };
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

namespace {

bool has_role(const ProofStatement& s, const std::string& role) {
  return std::find(s.roles.begin(), s.roles.end(), role) != s.roles.end();
}

void walk(const StructureNode& n, const std::function<void(const StructureNode&)>& fn) {
  fn(n);
  for (const auto& c : n.children) walk(c, fn);
}

void collect_leaves(const StructureNode& n, std::vector<const StructureNode*>& out) {
  if (n.children.empty()) {
    out.push_back(&n);
    return;
  }
  for (const auto& c : n.children) collect_leaves(c, out);
}

// Statement numbers exempt from the warrant requirement because they open a
// structure span or an induction sub-span.
std::set<int> span_openers(const Proof& proof) {
  std::set<int> out;
  if (!proof.structure) {
    if (!proof.statements.empty()) out.insert(proof.statements.front().number);
    return out;
  }
  walk(*proof.structure, [&](const StructureNode& n) {
    out.insert(n.span.first);
    for (const auto& sub :
         {n.induction_hypothesis, n.base_case, n.induction_step, n.induction_conclusion})
      if (sub) out.insert(sub->first);
  });
  return out;
}

} // namespace

std::vector<ValidationIssue> unresolved_references(const Proof& proof) {
  std::vector<ValidationIssue> issues;
  std::set<std::string> hyp_atoms, rule_ids, external_ids;
  for (const auto& h : proof.theorem.hypotheses) hyp_atoms.insert(h.atom);
  for (const auto& r : proof.rules) rule_ids.insert(r.id);
  for (const auto& e : proof.externals) external_ids.insert(e.id);
  std::set<std::string> def_ids;
  for (const auto& d : proof.definitions) def_ids.insert(d.id);

  for (const auto& h : proof.theorem.hypotheses) {
    if (!h.definition.empty() && !def_ids.count(h.definition))
      issues.push_back({"unknown-definition",
                        "hypothesis '" + h.atom + "' references unknown definition '" +
                            h.definition + "'",
                        0});
  }
  if (!proof.theorem.conclusion_definition.empty() &&
      !def_ids.count(proof.theorem.conclusion_definition))
    issues.push_back({"unknown-definition",
                      "conclusion references unknown definition '" +
                          proof.theorem.conclusion_definition + "'",
                      0});

  const int n = static_cast<int>(proof.statements.size());
  for (const auto& s : proof.statements) {
    for (const auto& u : s.uses_hypotheses) {
      if (!hyp_atoms.count(u))
        issues.push_back({"unknown-hypothesis",
                          "statement " + std::to_string(s.number) +
                              " uses unknown hypothesis '" + u + "'",
                          s.number});
    }
    for (const Warrant* w : {&s.warrant, &s.omitted_warrant}) {
      if (w->kind == WarrantKind::RuleRef && !rule_ids.count(w->value))
        issues.push_back({"unknown-rule",
                          "statement " + std::to_string(s.number) +
                              " cites unknown rule '" + w->value + "'",
                          s.number});
    }
    for (const std::string* b : {&s.backing, &s.omitted_backing}) {
      if (!b->empty() && !external_ids.count(*b))
        issues.push_back({"unknown-backing",
                          "statement " + std::to_string(s.number) +
                              " cites unknown backing '" + *b + "'",
                          s.number});
    }
  }
  for (const auto& g : proof.gadgets) {
    if (g.construction_statement < 1 || g.construction_statement > n)
      issues.push_back({"gadget-construction",
                        "gadget '" + g.id + "' is constructed in statement " +
                            std::to_string(g.construction_statement) +
                            ", which does not exist",
                        0});
  }
  return issues;
}

std::vector<ValidationIssue> validate(const Proof& proof) {
  std::vector<ValidationIssue> issues;

  for (size_t i = 0; i < proof.statements.size(); ++i) {
    if (proof.statements[i].number != static_cast<int>(i) + 1) {
      issues.push_back({"numbering",
                        "statements must be numbered 1..N without gaps; statement at index " +
                            std::to_string(i) + " is numbered " +
                            std::to_string(proof.statements[i].number),
                        proof.statements[i].number});
      break;
    }
  }

  for (auto& issue : unresolved_references(proof)) issues.push_back(std::move(issue));

  // every hypothesis must be used by some statement
  {
    std::set<std::string> used;
    for (const auto& s : proof.statements)
      for (const auto& u : s.uses_hypotheses) used.insert(u);
    for (const auto& h : proof.theorem.hypotheses) {
      if (!used.count(h.atom))
        issues.push_back({"unused-hypothesis",
                          "hypothesis '" + h.atom + "' is never marked as used; if the proof "
                              "does not need it, the theorem statement is too strong",
                          0});
    }
  }

  // warrants: every statement needs a warrant or backing unless it opens a
  // span or plays a role that states rather than derives
  {
    std::set<int> openers = span_openers(proof);
    for (const auto& s : proof.statements) {
      bool has_support = s.warrant.kind != WarrantKind::None || !s.backing.empty() ||
                         s.omitted_warrant.kind != WarrantKind::None ||
                         !s.omitted_backing.empty();
      bool exempt = openers.count(s.number) > 0 || has_role(s, "assumption") ||
                    has_role(s, "case-opening") || has_role(s, "goal-statement");
      if (!has_support && !exempt)
        issues.push_back({"missing-warrant",
                          "statement " + std::to_string(s.number) +
                              " derives something but cites no warrant or backing",
                          s.number});
    }
  }

  if (proof.structure) {
    const int n = static_cast<int>(proof.statements.size());
    const StructureNode& root = *proof.structure;
    if (root.span.first != 1 || root.span.last != n)
      issues.push_back({"structure-root",
                        "root structure span " + std::to_string(root.span.first) + "-" +
                            std::to_string(root.span.last) + " must cover statements 1-" +
                            std::to_string(n),
                        0});

    walk(root, [&](const StructureNode& node) {
      if (node.span.first > node.span.last || node.span.first < 1 || node.span.last > n)
        issues.push_back({"structure-span",
                          "node '" + kind_name(node.kind) + "' has invalid span " +
                              std::to_string(node.span.first) + "-" +
                              std::to_string(node.span.last),
                          0});
      for (const auto& c : node.children) {
        if (c.span.first < node.span.first || c.span.last > node.span.last)
          issues.push_back({"structure-nesting",
                            "child span " + std::to_string(c.span.first) + "-" +
                                std::to_string(c.span.last) + " escapes its parent " +
                                std::to_string(node.span.first) + "-" +
                                std::to_string(node.span.last),
                            0});
      }
      if (node.kind == StructureKind::Induction) {
        if (!node.induction_hypothesis || !node.base_case || !node.induction_step ||
            !node.induction_conclusion)
          issues.push_back({"induction-missing-span",
                            "induction node must mark hypothesis, base, step, and "
                            "conclusion sub-spans",
                            0});
      }
      if (node.kind == StructureKind::Cases) {
        if (node.children.size() < 2)
          issues.push_back({"cases-too-few", "a cases node needs at least two cases", 0});
        if (node.exhaustiveness.empty())
          issues.push_back({"cases-exhaustiveness",
                            "a cases node must say why its cases are exhaustive", 0});
      }
      if (node.kind == StructureKind::Iff && node.children.size() != 2)
        issues.push_back({"iff-directions", "an iff node needs exactly two directions", 0});
      if (node.kind == StructureKind::Contradiction &&
          (node.contradicts < 1 || node.contradicts > n))
        issues.push_back({"contradiction-target",
                          "contradiction node must cite the statement it contradicts", 0});
    });

    // leaves must tile the root span: no gaps, no overlap
    std::vector<const StructureNode*> leaves;
    collect_leaves(root, leaves);
    std::vector<Span> spans;
    for (const auto* l : leaves) spans.push_back(l->span);
    std::sort(spans.begin(), spans.end(),
              [](const Span& a, const Span& b) { return a.first < b.first; });
    int expected = root.span.first;
    bool tiled = true;
    for (const auto& sp : spans) {
      if (sp.first != expected) {
        tiled = false;
        break;
      }
      expected = sp.last + 1;
    }
    if (tiled && expected != root.span.last + 1) tiled = false;
    if (!tiled)
      issues.push_back({"structure-coverage",
                        "leaf spans must cover every statement exactly once", 0});
  }

  // at most one conclusion per leaf
  if (proof.structure) {
    std::vector<const StructureNode*> leaves;
    collect_leaves(*proof.structure, leaves);
    for (const auto* l : leaves) {
      int conclusions = 0;
      for (const auto& s : proof.statements)
        if (s.number >= l->span.first && s.number <= l->span.last &&
            has_role(s, "conclusion"))
          ++conclusions;
      if (conclusions > 1)
        issues.push_back({"multiple-conclusions",
                          "leaf span " + std::to_string(l->span.first) + "-" +
                              std::to_string(l->span.last) +
                              " has more than one conclusion statement",
                          0});
    }
  }

  return issues;
}

std::map<std::string, std::vector<int>> hypothesis_usage(const Proof& proof) {
  std::map<std::string, std::vector<int>> out;
  for (const auto& h : proof.theorem.hypotheses) out[h.atom] = {};
  for (const auto& s : proof.statements)
    for (const auto& u : s.uses_hypotheses)
      if (out.count(u)) out[u].push_back(s.number);
  return out;
}

namespace {

void outline_rec(const StructureNode& n, int depth, std::string& out) {
  out.append(static_cast<size_t>(depth) * 2, ' ');
  if (!n.case_label.empty()) {
    out += "case \"";
    out += n.case_label;
    out += "\" ";
  }
  out += kind_name(n.kind);
  out += ' ';
  out += std::to_string(n.span.first);
  out += '-';
  out += std::to_string(n.span.last);
  if (!n.direction.empty()) out += " direction=" + n.direction;
  if (n.contradicts > 0) out += " contradicts=" + std::to_string(n.contradicts);
  if (!n.exhaustiveness.empty()) out += " exhaustive=\"" + n.exhaustiveness + "\"";
  auto sub = [&](const char* name, const std::optional<Span>& s) {
    if (s) out += std::string(" ") + name + "=" + std::to_string(s->first) + "-" +
                  std::to_string(s->last);
  };
  sub("hypothesis", n.induction_hypothesis);
  sub("base", n.base_case);
  sub("step", n.induction_step);
  sub("conclusion", n.induction_conclusion);
  out += '\n';
  for (const auto& c : n.children) outline_rec(c, depth + 1, out);
}

} // namespace

std::string structure_outline(const Proof& proof) {
  if (!proof.structure) return "";
  std::string out;
  outline_rec(*proof.structure, 0, out);
  return out;
}

std::vector<RewriteRule> compiled_rules(const Proof& proof) {
  std::vector<RewriteRule> out;
  for (const auto& r : proof.rules) {
    if (r.kind != RuleKind::Rewrite) continue;
    out.push_back({r.id, parse_expr(r.pattern_text), parse_expr(r.replacement_text)});
  }
  return out;
}

} // namespace proofcomp
