#include "doctest.h"

#include "proofcomp/combinations.hpp"

#include <fstream>
#include <sstream>

using namespace proofcomp;

namespace {

// The monotone-convergence table setup used throughout the suite.
CombinationTable monotone_table() {
  std::vector<ImpossibilityRule> rules = {
      {"theorem", "ttf", RuleJustification::TheoremUnderStudy, ""},
      {"convergent-bounded", "*ft", RuleJustification::ExternalTheorem,
       "If a sequence converges then it is bounded"},
  };
  std::map<std::string, std::string> witnesses = {
      {"TTT", "a_n=1-1/n"}, {"TFF", "a_n=n"},       {"FTT", "a_n=1/n"},
      {"FTF", "a_n=(-1)^n"}, {"FFF", "a_n=(-n)^n"},
  };
  return combination_table({"increasing", "bounded", "converges"}, rules, witnesses);
}

std::string slurp(const std::string& rel) {
  std::ifstream in(std::string(PROOFCOMP_CORPUS_DIR) + "/" + rel);
  REQUIRE_MESSAGE(in.good(), "cannot open " << rel);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("the monotone-convergence table classifies all eight rows") {
  auto table = monotone_table();
  REQUIRE(table.entries.size() == 8);

  auto row = [&](const std::string& key) -> const ExampleEntry& {
    for (const auto& e : table.entries)
      if (e.signature.key() == key) return e;
    FAIL("no row " << key);
    return table.entries[0];
  };

  CHECK(row("TTT").status == EntryStatus::ExemplifiesTheorem);
  CHECK(row("TTT").witness == "a_n=1-1/n");
  CHECK(row("TTF").status == EntryStatus::Impossible);
  CHECK(row("TTF").rule_id == "theorem");
  CHECK(row("TFT").status == EntryStatus::Impossible);
  CHECK(row("TFT").rule_id == "convergent-bounded");
  CHECK(row("TFF").witness == "a_n=n");
  CHECK(row("FTT").witness == "a_n=1/n");
  CHECK(row("FTF").witness == "a_n=(-1)^n");
  CHECK(row("FFT").status == EntryStatus::Impossible);
  CHECK(row("FFT").rule_id == "convergent-bounded");
  CHECK(row("FFF").witness == "a_n=(-n)^n");

  // canonical order: all-true first, conclusion flipping fastest
  std::vector<std::string> keys;
  for (const auto& e : table.entries) keys.push_back(e.signature.key());
  CHECK(keys == std::vector<std::string>{"TTT", "TTF", "TFT", "TFF", "FTT", "FTF", "FFT",
                                         "FFF"});

  // witnesses that happen to be equations parse into structured math
  CHECK(row("TTT").witness_math.has_value());
  CHECK(std::holds_alternative<Equation>(*row("TTT").witness_math));
  CHECK_FALSE(row("FTF").witness_math.has_value()); // (-1)^n has a symbolic exponent
}

TEST_CASE("markdown output matches the golden table byte for byte") {
  CHECK(to_markdown(monotone_table()) == slurp("golden/table1.md"));
}

TEST_CASE("every truth vector appears exactly once and classify is a bijection") {
  auto table = monotone_table();
  std::set<std::string> seen;
  for (const auto& e : table.entries) CHECK(seen.insert(e.signature.key()).second);
  CHECK(seen.size() == 8);

  std::set<const ExampleEntry*> hits;
  for (int mask = 0; mask < 8; ++mask) {
    std::map<std::string, bool> assignment = {
        {"increasing", (mask & 4) != 0},
        {"bounded", (mask & 2) != 0},
        {"converges", (mask & 1) != 0},
    };
    const auto& e = classify_example(table, assignment);
    CHECK(e.signature.values ==
          std::vector<bool>{(mask & 4) != 0, (mask & 2) != 0, (mask & 1) != 0});
    hits.insert(&e);
  }
  CHECK(hits.size() == 8);

  CHECK(classify_example(table, {{"increasing", false}, {"bounded", true}, {"converges", false}})
            .witness == "a_n=(-1)^n");
  CHECK(classify_example(table, {{"increasing", true}, {"bounded", false}, {"converges", true}})
            .status == EntryStatus::Impossible);

  CHECK_THROWS_AS(classify_example(table, {{"increasing", true}}), std::invalid_argument);
}

TEST_CASE("no counterexample-to-theorem row can ever be an example") {
  // with the theorem rule registered, any all-hypotheses-true / false-conclusion
  // signature is impossible regardless of witnesses
  std::map<std::string, std::string> witnesses;
  for (const auto& key : {"TTF", "TTT", "TFF"}) witnesses[key] = "w";
  auto table = combination_table(
      {"h1", "h2", "concl"}, {{"thm", "ttf", RuleJustification::TheoremUnderStudy, ""}},
      witnesses);
  for (const auto& e : table.entries) {
    if (e.signature.values[0] && e.signature.values[1] && !e.signature.values[2]) {
      CHECK(e.status == EntryStatus::Impossible);
      CHECK(e.witness.empty());
    }
  }
}

TEST_CASE("degenerate tables") {
  auto two = combination_table({"p"}, {}, {});
  REQUIRE(two.entries.size() == 2);
  CHECK(two.entries[0].status == EntryStatus::MissingWitness);
  CHECK(two.entries[1].status == EntryStatus::MissingWitness);
  CHECK(to_markdown(two).find("(missing witness)") != std::string::npos);

  auto saturated =
      combination_table({"p", "q"}, {{"all", "**", RuleJustification::TheoremUnderStudy, ""}},
                        {{"TT", "w"}});
  for (const auto& e : saturated.entries) CHECK(e.status == EntryStatus::Impossible);

  CHECK_THROWS_AS(combination_table({}, {}, {}), std::invalid_argument);
  CHECK_THROWS_AS(combination_table({"p"}, {{"bad", "tt", {}, ""}}, {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(combination_table({"p"}, {{"bad", "x", {}, ""}}, {}), std::invalid_argument);
}

TEST_CASE("conflicting rules are rejected in strict mode and first-wins otherwise") {
  std::vector<ImpossibilityRule> rules = {
      {"r1", "t*", RuleJustification::TheoremUnderStudy, ""},
      {"r2", "*t", RuleJustification::ExternalTheorem, "some external result"},
  };
  CHECK_THROWS_AS(combination_table({"p", "q"}, rules, {}), ConflictingRules);

  auto lax = combination_table({"p", "q"}, rules, {}, /*strict=*/false);
  CHECK(lax.entries[0].rule_id == "r1"); // TT matches both, first registered wins

  // same justification twice is not a conflict even in strict mode
  std::vector<ImpossibilityRule> agreeing = {
      {"r1", "t*", RuleJustification::ExternalTheorem, "same result"},
      {"r2", "*t", RuleJustification::ExternalTheorem, "same result"},
  };
  CHECK_NOTHROW(combination_table({"p", "q"}, agreeing, {}));
}
