#include "doctest.h"

#include "proofcomp/proof.hpp"

#include <algorithm>

using namespace proofcomp;

namespace {

ProofStatement stmt(int n, std::string text) {
  ProofStatement s;
  s.number = n;
  s.text = std::move(text);
  return s;
}

Warrant text_warrant(std::string t) { return {WarrantKind::Text, std::move(t)}; }

// Minimal healthy proof: two hypotheses, four statements, direct structure
// split into two leaves.
Proof healthy() {
  Proof p;
  p.id = "demo";
  p.theorem.id = "demo";
  p.theorem.name = "Demo";
  p.theorem.statement = parse_logic("implies(and(h1,h2),c)");
  p.theorem.hypotheses = {{"h1", "first hypothesis", ""}, {"h2", "second hypothesis", ""}};
  p.theorem.conclusion_atom = "c";

  p.externals = {{"axiom-x", "Axiom X", "the axiom"}};
  p.rules = {{"rule-y", RuleKind::Justification, "a cited fact", "", ""}};

  p.statements = {stmt(1, "Setup."), stmt(2, "Middle."), stmt(3, "More."), stmt(4, "Done.")};
  p.statements[0].uses_hypotheses = {"h1"};
  p.statements[1].uses_hypotheses = {"h2"};
  p.statements[1].warrant = text_warrant("by definition");
  p.statements[2].warrant = {WarrantKind::RuleRef, "rule-y"};
  p.statements[3].backing = "axiom-x";
  p.statements[3].roles = {"conclusion"};

  StructureNode root;
  root.kind = StructureKind::Direct;
  root.span = {1, 4};
  StructureNode a;
  a.kind = StructureKind::DefinitionChasing;
  a.span = {1, 2};
  StructureNode b;
  b.kind = StructureKind::Direct;
  b.span = {3, 4};
  root.children = {a, b};
  p.structure = root;
  return p;
}

bool has_code(const std::vector<ValidationIssue>& issues, const std::string& code) {
  return std::any_of(issues.begin(), issues.end(),
                     [&](const ValidationIssue& i) { return i.code == code; });
}

} // namespace

TEST_CASE("a fully annotated proof validates cleanly") {
  Proof p = healthy();
  auto issues = validate(p);
  CAPTURE(issues.empty() ? "" : issues[0].message);
  CHECK(issues.empty());
}

TEST_CASE("numbering must be 1..N") {
  Proof p = healthy();
  p.statements[2].number = 7;
  CHECK(has_code(validate(p), "numbering"));
}

TEST_CASE("unused hypotheses are reported") {
  Proof p = healthy();
  p.statements[1].uses_hypotheses.clear();
  auto issues = validate(p);
  REQUIRE(has_code(issues, "unused-hypothesis"));
  bool mentions = false;
  for (const auto& i : issues)
    if (i.message.find("'h2'") != std::string::npos) mentions = true;
  CHECK(mentions);
}

TEST_CASE("statements that derive need a warrant or backing") {
  Proof p = healthy();
  p.statements[1].warrant = {};
  auto issues = validate(p);
  REQUIRE(has_code(issues, "missing-warrant"));

  SUBCASE("span openers are exempt") {
    Proof q = healthy();
    // statement 3 opens the second leaf; stripping its warrant is fine
    q.statements[2].warrant = {};
    CHECK_FALSE(has_code(validate(q), "missing-warrant"));
  }
  SUBCASE("stating roles are exempt") {
    Proof q = healthy();
    q.statements[1].warrant = {};
    q.statements[1].roles = {"assumption"};
    CHECK_FALSE(has_code(validate(q), "missing-warrant"));
    q.statements[1].roles = {"goal-statement"};
    CHECK_FALSE(has_code(validate(q), "missing-warrant"));
    q.statements[1].roles = {"case-opening"};
    CHECK_FALSE(has_code(validate(q), "missing-warrant"));
  }
  SUBCASE("an omitted warrant still counts as support") {
    Proof q = healthy();
    q.statements[1].omitted_warrant = q.statements[1].warrant;
    q.statements[1].warrant = {};
    CHECK_FALSE(has_code(validate(q), "missing-warrant"));
  }
}

TEST_CASE("references must resolve") {
  SUBCASE("unknown hypothesis") {
    Proof p = healthy();
    p.statements[0].uses_hypotheses = {"nope"};
    CHECK(has_code(validate(p), "unknown-hypothesis"));
  }
  SUBCASE("unknown rule") {
    Proof p = healthy();
    p.statements[2].warrant = {WarrantKind::RuleRef, "nope"};
    CHECK(has_code(validate(p), "unknown-rule"));
  }
  SUBCASE("unknown backing") {
    Proof p = healthy();
    p.statements[3].backing = "nope";
    CHECK(has_code(validate(p), "unknown-backing"));
  }
  SUBCASE("unknown definition on a hypothesis") {
    Proof p = healthy();
    p.theorem.hypotheses[0].definition = "nope";
    CHECK(has_code(validate(p), "unknown-definition"));
  }
  SUBCASE("gadget built in a nonexistent statement") {
    Proof p = healthy();
    p.gadgets = {{"S", GadgetKind::ConstructedObject, 9, "a set"}};
    CHECK(has_code(validate(p), "gadget-construction"));
    p.gadgets[0].construction_statement = 1;
    CHECK_FALSE(has_code(validate(p), "gadget-construction"));
  }
}

TEST_CASE("structure constraints") {
  SUBCASE("root must cover 1..N") {
    Proof p = healthy();
    p.structure->span = {1, 3};
    CHECK(has_code(validate(p), "structure-root"));
  }
  SUBCASE("children must nest inside their parent") {
    Proof p = healthy();
    p.structure->children[1].span = {3, 5};
    auto issues = validate(p);
    CHECK(has_code(issues, "structure-nesting"));
  }
  SUBCASE("leaves must tile the root span") {
    Proof p = healthy();
    p.structure->children[0].span = {1, 1}; // gap at 2
    CHECK(has_code(validate(p), "structure-coverage"));
    p.structure->children[0].span = {1, 3}; // overlap at 3
    CHECK(has_code(validate(p), "structure-coverage"));
  }
  SUBCASE("induction needs all four sub-spans") {
    Proof p = healthy();
    StructureNode ind;
    ind.kind = StructureKind::Induction;
    ind.span = {1, 4};
    ind.base_case = Span{1, 1};
    ind.induction_hypothesis = Span{2, 2};
    ind.induction_step = Span{3, 3};
    // conclusion missing
    p.structure = ind;
    CHECK(has_code(validate(p), "induction-missing-span"));
    p.structure->induction_conclusion = Span{4, 4};
    CHECK_FALSE(has_code(validate(p), "induction-missing-span"));
  }
  SUBCASE("cases need two cases and an exhaustiveness note") {
    Proof p = healthy();
    StructureNode cases;
    cases.kind = StructureKind::Cases;
    cases.span = {1, 4};
    StructureNode only;
    only.kind = StructureKind::Direct;
    only.span = {1, 4};
    only.case_label = "the only case";
    cases.children = {only};
    p.structure = cases;
    auto issues = validate(p);
    CHECK(has_code(issues, "cases-too-few"));
    CHECK(has_code(issues, "cases-exhaustiveness"));
  }
  SUBCASE("iff needs exactly two directions") {
    Proof p = healthy();
    p.structure->kind = StructureKind::Iff;
    CHECK_FALSE(has_code(validate(p), "iff-directions")); // two children already
    p.structure->children.pop_back();
    CHECK(has_code(validate(p), "iff-directions"));
  }
  SUBCASE("contradiction must cite its target") {
    Proof p = healthy();
    p.structure->children[0].kind = StructureKind::Contradiction;
    CHECK(has_code(validate(p), "contradiction-target"));
    p.structure->children[0].contradicts = 2;
    CHECK_FALSE(has_code(validate(p), "contradiction-target"));
  }
  SUBCASE("at most one conclusion per leaf") {
    Proof p = healthy();
    p.statements[2].roles = {"conclusion"};
    CHECK(has_code(validate(p), "multiple-conclusions"));
  }
}

TEST_CASE("hypothesis usage is collected in order") {
  Proof p = healthy();
  p.statements[2].uses_hypotheses = {"h1"};
  auto usage = hypothesis_usage(p);
  CHECK(usage.at("h1") == std::vector<int>{1, 3});
  CHECK(usage.at("h2") == std::vector<int>{2});
}

TEST_CASE("structure outline mirrors the document syntax") {
  Proof p = healthy();
  CHECK(structure_outline(p) ==
        "direct 1-4\n"
        "  definition-chasing 1-2\n"
        "  direct 3-4\n");

  StructureNode ind;
  ind.kind = StructureKind::Induction;
  ind.span = {1, 4};
  ind.base_case = Span{1, 1};
  ind.induction_hypothesis = Span{2, 2};
  ind.induction_step = Span{3, 3};
  ind.induction_conclusion = Span{4, 4};
  p.structure = ind;
  CHECK(structure_outline(p) == "induction 1-4 hypothesis=2-2 base=1-1 step=3-3 conclusion=4-4\n");

  StructureNode cases;
  cases.kind = StructureKind::Cases;
  cases.span = {1, 4};
  cases.exhaustiveness = "by trichotomy";
  StructureNode c1;
  c1.kind = StructureKind::Contradiction;
  c1.span = {1, 2};
  c1.contradicts = 2;
  c1.case_label = "b != d";
  StructureNode c2;
  c2.kind = StructureKind::Direct;
  c2.span = {3, 4};
  c2.case_label = "b = d";
  cases.children = {c1, c2};
  p.structure = cases;
  CHECK(structure_outline(p) ==
        "cases 1-4 exhaustive=\"by trichotomy\"\n"
        "  case \"b != d\" contradiction 1-2 contradicts=2\n"
        "  case \"b = d\" direct 3-4\n");
}

TEST_CASE("kind names round trip") {
  for (StructureKind k :
       {StructureKind::Direct, StructureKind::DefinitionChasing, StructureKind::Iff,
        StructureKind::Cases, StructureKind::Induction, StructureKind::Contrapositive,
        StructureKind::Contradiction, StructureKind::EquivalenceChain}) {
    auto back = kind_from_name(kind_name(k));
    REQUIRE(back.has_value());
    CHECK(*back == k);
  }
  CHECK_FALSE(kind_from_name("zigzag").has_value());
}

TEST_CASE("rewrite declarations compile to engine rules") {
  Proof p = healthy();
  p.rules.push_back({"i-squared", RuleKind::Rewrite, "defining property of i",
                     "sqrt(-1)^2", "-1"});
  auto rules = compiled_rules(p);
  REQUIRE(rules.size() == 1); // justification-kind entries are not compiled
  CHECK(rules[0].id == "i-squared");
  CHECK(equivalent(parse_expr("sqrt(-1)*sqrt(-1)"), parse_expr("-1"), rules));

  p.rules.push_back({"bad", RuleKind::Rewrite, "", "sqrt(", "1"});
  CHECK_THROWS_AS(compiled_rules(p), ParseError);
}
