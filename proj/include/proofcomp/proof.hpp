#pragma once

#include "proofcomp/canonical.hpp"
#include "proofcomp/expr.hpp"
#include "proofcomp/logic.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace proofcomp {

// A reference inside a proof document does not resolve (unknown hypothesis
// atom, rule id, backing id, or statement number).
struct ReferenceError : std::runtime_error {
  explicit ReferenceError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class TheoremKind { Specific, General };

struct Hypothesis {
  std::string atom;       // label used in the formal statement and uses: lists
  std::string text;       // reading, e.g. "the sequence (a_n) is bounded"
  std::string definition; // optional Definition id this hypothesis leans on
};

struct TheoremInfo {
  std::string id;
  std::string name;
  TheoremKind kind = TheoremKind::General;
  LogicPtr statement; // optional formal statement
  std::string statement_text;
  std::vector<Hypothesis> hypotheses;
  std::string conclusion_atom;
  std::string conclusion_text;
  std::string conclusion_definition; // optional Definition id
};

struct Definition {
  std::string id;
  std::string term;     // the word or phrase being defined
  std::string text;     // the formal wording
  std::string notation; // optional notation remark
  LogicPtr statement;   // optional formal logic reading
};

struct ExternalResult {
  std::string id;
  std::string name;
  std::string text;
};

enum class RuleKind { Rewrite, Justification };

// RULES entries: a Justification is a named reason statements may cite; a
// Rewrite additionally carries expression syntax usable by the equivalence
// engine (pattern ~> replacement).
struct RewriteRuleDecl {
  std::string id;
  RuleKind kind = RuleKind::Justification;
  std::string description;
  std::string pattern_text;
  std::string replacement_text;
};

enum class WarrantKind { None, Text, RuleRef };

struct Warrant {
  WarrantKind kind = WarrantKind::None;
  std::string value; // free text, or a RULES id when kind == RuleRef
};

struct ProofStatement {
  int number = 0;
  std::string text; // may contain `...` spans of expression syntax
  std::vector<std::string> uses_hypotheses;
  Warrant warrant;
  std::string backing; // ExternalResult id, optional
  std::vector<std::string> roles;
  bool is_error_line = false;
  std::string error_explanation; // why the error line is wrong
  Warrant omitted_warrant;       // filled by omit_warrant(), hidden from display
  std::string omitted_backing;
  std::vector<Answer> inline_math; // parsed from the `...` spans, in order
};

enum class StructureKind {
  Direct,
  DefinitionChasing,
  Iff,
  Cases,
  Induction,
  Contrapositive,
  Contradiction,
  EquivalenceChain,
};

std::string kind_name(StructureKind k); // "direct", "definition-chasing", ...
std::optional<StructureKind> kind_from_name(const std::string& name);

struct Span {
  int first = 0;
  int last = 0;
};

struct StructureNode {
  StructureKind kind = StructureKind::Direct;
  Span span;
  std::vector<StructureNode> children;
  std::string case_label;     // set on children of a Cases node
  std::string exhaustiveness; // Cases: why the case split is exhaustive
  int contradicts = 0;        // Contradiction: the statement contradicted
  std::string direction;      // Iff children: "forward" / "backward"
  std::optional<Span> induction_hypothesis;
  std::optional<Span> base_case;
  std::optional<Span> induction_step;
  std::optional<Span> induction_conclusion;
};

enum class GadgetKind { ConstructedObject, FacilitatorObject };

// An auxiliary object the proof builds (a set, a sequence, a function) whose
// introduction is a move worth asking about.
struct Gadget {
  std::string id;
  GadgetKind kind = GadgetKind::ConstructedObject;
  int construction_statement = 0;
  std::string description; // why the object helps
};

struct Proof {
  std::string id;
  TheoremInfo theorem;
  std::vector<Definition> definitions;
  std::vector<ExternalResult> externals;
  std::vector<RewriteRuleDecl> rules;
  std::vector<Gadget> gadgets;
  std::vector<ProofStatement> statements;
  std::optional<StructureNode> structure;
};

// Annotation-quality findings.  validate() reports, it never throws: an
// incomplete proof document is data, not a programming error.
struct ValidationIssue {
  std::string code;    // stable machine code, e.g. "unused-hypothesis"
  std::string message; // human explanation
  int statement = 0;   // offending statement number; 0 for proof-level issues
};

// Checks, in order: statements numbered 1..N; references resolve (hypothesis
// atoms, rule ids, backing ids, gadget construction statements); every
// hypothesis is used somewhere; every statement carries a warrant or backing
// unless it opens a structure span (or an induction sub-span) or is an
// assumption/case-opening/goal-statement; induction nodes carry all four
// sub-spans; cases nodes have >= 2 cases and an exhaustiveness note; iff
// nodes have exactly 2 directions; structure leaves tile the root span
// without gaps or overlap; at most one conclusion-role statement per leaf.
std::vector<ValidationIssue> validate(const Proof& proof);

// Subset of validate(): only unresolved references.
std::vector<ValidationIssue> unresolved_references(const Proof& proof);

// hypothesis atom -> numbers of the statements that use it (ascending).
std::map<std::string, std::vector<int>> hypothesis_usage(const Proof& proof);

// Indented structure sketch, one node per line, mirroring the document
// syntax (e.g. `case "b != d" contradiction 3-5 contradicts=5`).
std::string structure_outline(const Proof& proof);

// Rewrite-kind RULES entries compiled to engine rules (parse errors in the
// declarations surface as ParseError).
std::vector<RewriteRule> compiled_rules(const Proof& proof);

} // namespace proofcomp
