#include "doctest.h"

#include "proofcomp/dsl.hpp"

#include <fstream>
#include <sstream>

using namespace proofcomp;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(PROOFCOMP_CORPUS_DIR) + "/" + name);
  REQUIRE_MESSAGE(in.good(), "cannot open corpus file " << name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::vector<std::string> kCorpus = {
    "theorem1.proof",          "theorem2_contradiction.proof", "theorem2_structured.proof",
    "sum_squares_induction.proof", "one_equals_minus_one.proof",
};

} // namespace

TEST_CASE("every corpus proof parses and validates cleanly") {
  for (const auto& name : kCorpus) {
    CAPTURE(name);
    Proof p = parse_proof(slurp(name));
    auto issues = validate(p);
    for (const auto& i : issues) CAPTURE(i.code + ": " + i.message);
    CHECK(issues.empty());
  }
}

TEST_CASE("render_numbered is a fixed point of parse") {
  for (const auto& name : kCorpus) {
    CAPTURE(name);
    Proof p = parse_proof(slurp(name));
    std::string once = render_numbered(p);
    Proof p2 = parse_proof(once);
    std::string twice = render_numbered(p2);
    CHECK(once == twice);

    std::string structured = render_numbered(p, RenderStyle::Structured);
    Proof p3 = parse_proof(structured);
    CHECK(render_numbered(p3) == once);
  }
}

TEST_CASE("theorem1 annotations survive the round trip") {
  Proof p = parse_proof(slurp("theorem1.proof"));
  REQUIRE(p.statements.size() == 8);
  CHECK(p.id == "theorem1");
  CHECK(p.theorem.name == "Monotone Convergence");
  CHECK(p.theorem.kind == TheoremKind::General);
  CHECK(to_text(p.theorem.statement) == "implies(and(bounded,increasing),convergent)");
  REQUIRE(p.theorem.hypotheses.size() == 2);
  CHECK(p.theorem.hypotheses[0].atom == "bounded");
  CHECK(p.theorem.hypotheses[0].definition == "bounded");
  CHECK(p.theorem.conclusion_atom == "convergent");
  CHECK(p.theorem.conclusion_definition == "convergent");

  const auto& s1 = p.statements[0];
  CHECK(s1.text == "Since the sequence (a_n) is bounded, the set S = {a_n | n in N} has an "
                   "upper bound.");
  CHECK(s1.uses_hypotheses == std::vector<std::string>{"bounded"});
  CHECK(s1.warrant.kind == WarrantKind::Text);
  CHECK(s1.warrant.value == "definition of bounded");

  const auto& s2 = p.statements[1];
  CHECK(s2.backing == "completeness-axiom");
  CHECK(s2.warrant.kind == WarrantKind::None);

  CHECK(p.statements[2].roles == std::vector<std::string>{"goal-statement"});
  CHECK(p.statements[7].roles == std::vector<std::string>{"conclusion"});

  REQUIRE(p.gadgets.size() == 1);
  CHECK(p.gadgets[0].id == "S");
  CHECK(p.gadgets[0].kind == GadgetKind::ConstructedObject);
  CHECK(p.gadgets[0].construction_statement == 1);

  REQUIRE(p.definitions.size() == 4);
  CHECK(p.definitions[0].id == "bounded");
  CHECK(p.definitions[0].term == "bounded sequence");
  CHECK(p.definitions[0].notation == "|a_n| < M");

  REQUIRE(p.externals.size() == 1);
  CHECK(p.externals[0].id == "completeness-axiom");
  CHECK(p.externals[0].name == "Completeness Axiom for R");

  CHECK(structure_outline(p) == "direct 1-8\n"
                                "  definition-chasing 1-2\n"
                                "  direct 3-8\n");

  auto usage = hypothesis_usage(p);
  CHECK(usage.at("bounded") == std::vector<int>{1});
  CHECK(usage.at("increasing") == std::vector<int>{5});
}

TEST_CASE("nested structure round trips exactly") {
  Proof p = parse_proof(slurp("theorem2_structured.proof"));
  CHECK(structure_outline(p) ==
        "direct 1-8\n"
        "  equivalence-chain 1-2\n"
        "  cases 3-7 exhaustive=\"b != d or b = d, by trichotomy\"\n"
        "    case \"b != d\" contradiction 3-5 contradicts=5\n"
        "    case \"b = d\" direct 6-7\n"
        "  direct 8-8\n");
  REQUIRE(p.structure.has_value());
  REQUIRE(p.structure->children.size() == 3);
  const auto& cases = p.structure->children[1];
  CHECK(cases.kind == StructureKind::Cases);
  CHECK(cases.exhaustiveness == "b != d or b = d, by trichotomy");
  REQUIRE(cases.children.size() == 2);
  CHECK(cases.children[0].case_label == "b != d");
  CHECK(cases.children[0].contradicts == 5);
  CHECK(cases.children[1].case_label == "b = d");
}

TEST_CASE("induction sub-spans parse") {
  Proof p = parse_proof(slurp("sum_squares_induction.proof"));
  REQUIRE(p.structure.has_value());
  CHECK(p.structure->kind == StructureKind::Induction);
  REQUIRE(p.structure->induction_hypothesis.has_value());
  CHECK(p.structure->induction_hypothesis->first == 3);
  CHECK(p.structure->base_case->first == 2);
  CHECK(p.structure->induction_step->first == 4);
  CHECK(p.structure->induction_step->last == 7);
  CHECK(p.structure->induction_conclusion->first == 8);

  // inline backtick spans become parsed expressions/equations
  REQUIRE(p.statements[3].inline_math.size() == 1);
  const auto* eq = std::get_if<Equation>(&p.statements[3].inline_math[0]);
  REQUIRE(eq != nullptr);
  CHECK(render(*eq) == "sum(k^2,k,1,1+m) = (1+m)^2+sum(k^2,k,1,m)");

  REQUIRE(p.rules.size() == 1);
  CHECK(p.rules[0].kind == RuleKind::Justification);
  CHECK(p.rules[0].description == "peeling off the last term of a finite sum");
}

TEST_CASE("fallacy proof carries its error annotation and rewrite rule") {
  Proof p = parse_proof(slurp("one_equals_minus_one.proof"));
  CHECK(p.theorem.kind == TheoremKind::Specific);
  CHECK(p.statements[2].is_error_line);
  CHECK(p.statements[2].error_explanation.find("nonnegative") != std::string::npos);
  for (int i : {0, 1, 3, 4}) CHECK_FALSE(p.statements[i].is_error_line);

  REQUIRE(p.rules.size() == 2);
  CHECK(p.rules[1].kind == RuleKind::Rewrite);
  CHECK(p.rules[1].pattern_text == "sqrt(-1)^2");
  auto rules = compiled_rules(p);
  REQUIRE(rules.size() == 1);
  CHECK(equivalent(parse_expr("sqrt(-1)*sqrt(-1)"), parse_expr("-1"), rules));
}

TEST_CASE("structured rendering adds banners that reparse as comments") {
  Proof p = parse_proof(slurp("theorem2_structured.proof"));
  std::string structured = render_numbered(p, RenderStyle::Structured);
  CHECK(structured.find("# case \"b != d\" contradiction 3-5\n3. ") != std::string::npos);
  CHECK(structured.find("# direct 1-8\n# equivalence-chain 1-2\n1. ") != std::string::npos);
  CHECK(render_numbered(parse_proof(structured)) == render_numbered(p));
}

TEST_CASE("display rendering drops annotations and backticks") {
  Proof p = parse_proof(slurp("sum_squares_induction.proof"));
  std::string display = render_display(p);
  CHECK(display.find("Theorem (Sum of Squares).") == 0);
  CHECK(display.find("Proof.\n1. ") != std::string::npos);
  CHECK(display.find('`') == std::string::npos);
  CHECK(display.find('{') == std::string::npos);
  CHECK(display.find("8. The base case and the induction step") != std::string::npos);
}

TEST_CASE("parse errors carry line numbers") {
  auto expect_error = [](const std::string& doc, const std::string& needle) {
    try {
      parse_proof(doc);
      FAIL_CHECK("expected ParseError for: " << needle);
    } catch (const ParseError& e) {
      CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos,
                    "got: " << e.what());
    }
  };

  expect_error("PROOF\n1. hi\n", "must start with a THEOREM");
  expect_error("name: X\n", "content before the THEOREM header");
  expect_error("THEOREM t\nname: X\n", "missing PROOF section");
  expect_error("THEOREM t\nPROOF\n1. a\nDEFINITIONS\n", "out of order");
  expect_error("THEOREM t\nPROOF\n2. skipped one\n", "expected 1, got 2");
  expect_error("THEOREM t\nPROOF\n1. a\n1. again\n", "expected 2, got 1");
  expect_error("THEOREM t\nkind: vague\nPROOF\n1. a\n", "kind must be");
  expect_error("THEOREM t\nPROOF\n1. a {uses: h; wibble: x}\n", "unknown annotation key");
  expect_error("THEOREM t\nPROOF\n1. a {uses: h; uses: h}\n", "duplicate annotation key");
  expect_error("THEOREM t\nPROOF\n1. the value `x is\n", "unbalanced backtick");
  expect_error("THEOREM t\nPROOF\n1. see `x + + y`.\n", "in inline expression");
  expect_error("THEOREM t\nSTRUCTURE\nwiggly 1-1\nPROOF\n1. a\n", "unknown structure kind");
  expect_error("THEOREM t\nSTRUCTURE\n   direct 1-1\nPROOF\n1. a\n", "indentation");
  expect_error("THEOREM t\nSTRUCTURE\ndirect 1-1\ndirect 1-1\nPROOF\n1. a\n",
               "one root structure node");
  expect_error("THEOREM t\nSTRUCTURE\ndirect 1-2\n    direct 1-1\nPROOF\n1. a\n2. b\n",
               "indented too deep");
  expect_error("THEOREM t\nSTRUCTURE\ndirect 1-x\nPROOF\n1. a\n", "span like 3-8");

  // line numbers point at the offending document line
  try {
    parse_proof("THEOREM t\n\n# comment\nPROOF\n2. bad\n");
    FAIL_CHECK("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 5:") != std::string::npos);
  }
}

TEST_CASE("unresolved references are rejected at parse time") {
  CHECK_THROWS_AS(parse_proof("THEOREM t\nPROOF\n1. a {warrant: rule:nope}\n"),
                  ReferenceError);
  CHECK_THROWS_AS(parse_proof("THEOREM t\nPROOF\n1. a {backing: ghost}\n"), ReferenceError);
  CHECK_THROWS_AS(parse_proof("THEOREM t\nPROOF\n1. a {uses: phantom}\n"), ReferenceError);
}

TEST_CASE("statement braces that are not annotations stay in the text") {
  Proof p = parse_proof("THEOREM t\nPROOF\n1. consider the set {x | x > 0}\n");
  CHECK(p.statements[0].text == "consider the set {x | x > 0}");
  Proof q = parse_proof("THEOREM t\nPROOF\n1. the pair {a, b} matters {roles: assumption}\n");
  CHECK(q.statements[0].text == "the pair {a, b} matters");
  CHECK(q.statements[0].roles == std::vector<std::string>{"assumption"});
}

TEST_CASE("omit_warrant moves the justification out of sight") {
  Proof p = parse_proof(slurp("theorem1.proof"));

  Proof faded = omit_warrant(p, 5);
  const auto& s5 = faded.statements[4];
  CHECK(s5.warrant.kind == WarrantKind::None);
  CHECK(s5.omitted_warrant.kind == WarrantKind::Text);
  CHECK(s5.omitted_warrant.value == "an increasing sequence never drops below an earlier term");
  CHECK(validate(faded).empty()); // omitted warrant still satisfies the checks

  Proof faded2 = omit_warrant(p, 2);
  CHECK(faded2.statements[1].backing.empty());
  CHECK(faded2.statements[1].omitted_backing == "completeness-axiom");
  CHECK(validate(faded2).empty());

  // round trip keeps omitted annotations
  Proof back = parse_proof(render_numbered(faded));
  CHECK(back.statements[4].omitted_warrant.value == s5.omitted_warrant.value);

  CHECK_THROWS_AS(omit_warrant(faded, 5), NoWarrantPresent);  // already omitted
  CHECK_THROWS_AS(omit_warrant(p, 3), NoWarrantPresent);      // never had one
  CHECK_THROWS_AS(omit_warrant(p, 99), ReferenceError);
}
