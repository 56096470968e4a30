#include "doctest.h"

#include "proofcomp/canonical.hpp"
#include "proofcomp/dsl.hpp"
#include "proofcomp/grader.hpp"
#include "support/oracle.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

using namespace proofcomp;

namespace {

std::string slurp(const std::string& rel) {
  std::ifstream in(std::string(PROOFCOMP_CORPUS_DIR) + "/" + rel);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

QuestionBank theorem1_bank() {
  Proof proof = parse_proof(slurp("theorem1.proof"));
  GenerationConfig cfg = parse_generation_config(slurp("theorem1.cfg"));
  std::optional<CombinationTable> table;
  if (cfg.table)
    table = combination_table(cfg.table->properties, cfg.table->rules, cfg.table->witnesses);
  return generate(proof, table, cfg).bank;
}

QuestionBank sum_squares_bank() {
  Proof proof = parse_proof(slurp("sum_squares_induction.proof"));
  GenerationConfig cfg = parse_generation_config(slurp("sum_squares.cfg"));
  return generate(proof, std::nullopt, cfg).bank;
}

} // namespace

TEST_CASE("line-select grading classifies every selection") {
  QuestionBank bank = theorem1_bank();
  const std::string id = "theorem1.backing.completeness-axiom"; // key line 2

  auto correct = grade_item(bank, id, "2");
  CHECK(correct.score == 1.0);
  CHECK(correct.answer_class == "correct");
  CHECK(correct.graded);
  CHECK(correct.flags.empty());

  auto padded = grade_item(bank, id, "  2 ");
  CHECK(padded.answer_class == "correct");

  auto wrong = grade_item(bank, id, "3");
  CHECK(wrong.score == 0.0);
  CHECK(wrong.answer_class == "line-3");

  CHECK(grade_item(bank, id, "1").answer_class == "line-1");
  CHECK(grade_item(bank, id, "8").answer_class == "line-8");
  CHECK(grade_item(bank, id, "9").answer_class == "invalid"); // proof has 8 statements
  CHECK(grade_item(bank, id, "0").answer_class == "invalid");
  CHECK(grade_item(bank, id, "-1").answer_class == "invalid");
  CHECK(grade_item(bank, id, "two").answer_class == "invalid");
  CHECK(grade_item(bank, id, "2x").answer_class == "invalid");

  auto blank = grade_item(bank, id, "   ");
  CHECK(blank.answer_class == "no-response");
  CHECK(blank.flags == std::vector<std::string>{"no-response"});

  CHECK_THROWS_AS(grade_item(bank, "theorem1.nope", "1"), UnknownItem);
}

TEST_CASE("mcq-single grading classifies by option id") {
  QuestionBank bank = theorem1_bank();
  const std::string id = "theorem1.notation.absolute-value"; // key A

  auto right = grade_item(bank, id, "A");
  CHECK(right.score == 1.0);
  CHECK(right.answer_class == "correct");
  CHECK(right.selected == std::vector<std::string>{"A"});
  CHECK(right.key_ids == std::vector<std::string>{"A"});

  auto wrong = grade_item(bank, id, "C");
  CHECK(wrong.score == 0.0);
  CHECK(wrong.answer_class == "C");

  CHECK(grade_item(bank, id, "Z").answer_class == "invalid");
  CHECK(grade_item(bank, id, "").answer_class == "no-response");
}

TEST_CASE("mcq-multi grading is exact-set match over all 32 subsets") {
  QuestionBank bank = theorem1_bank();
  const std::string id = "theorem1.definition.bounded"; // key {A, D}
  const std::string ids[] = {"A", "B", "C", "D", "E"};

  for (unsigned mask = 0; mask < 32; ++mask) {
    std::set<std::string> subset;
    std::string answer;
    for (int bit = 0; bit < 5; ++bit) {
      if (!(mask & (1u << bit))) continue;
      if (!answer.empty()) answer += ";";
      answer += ids[bit];
      subset.insert(ids[bit]);
    }
    auto r = grade_item(bank, id, answer);
    CAPTURE(answer);
    bool is_key = subset == std::set<std::string>{"A", "D"};
    if (mask == 0) {
      CHECK(r.answer_class == "no-response");
      continue;
    }
    CHECK(r.score == (is_key ? 1.0 : 0.0));
    if (is_key) {
      CHECK(r.answer_class == "correct");
    } else {
      std::string expected;
      for (const auto& s : subset) {
        if (!expected.empty()) expected += "+";
        expected += s;
      }
      CHECK(r.answer_class == expected);
    }
    CHECK(std::set<std::string>(r.selected.begin(), r.selected.end()) == subset);
  }

  CHECK(grade_item(bank, id, "A;Q").answer_class == "invalid");
  CHECK(grade_item(bank, id, ";").answer_class == "invalid");
  CHECK(grade_item(bank, id, "D; A").answer_class == "correct"); // order and spacing free
  CHECK(grade_item(bank, id, "A;;D").answer_class == "correct"); // jsonl join tolerated
  CHECK(grade_item(bank, id, "A;A;D").answer_class == "correct"); // duplicates collapse
}

TEST_CASE("algebraic-input covers the equation/value matrix") {
  QuestionBank bank = sum_squares_bank();
  const std::string id = "sum-squares.instantiate.3"; // key: sums to 14 = 14

  CHECK(grade_item(bank, id, "14 = 14").answer_class == "correct");
  CHECK(grade_item(bank, id, "1 + 4 + 9 = 14").score == 1.0);
  CHECK(grade_item(bank, id, "sum(k^2,k,1,3) = 3*(3+1)*(2*3+1)/6").answer_class == "correct");
  CHECK(grade_item(bank, id, "14 = 15").answer_class == "incorrect");
  CHECK(grade_item(bank, id, "x = 14").answer_class == "incorrect");

  // equation asked, bare expression given: the one flagged cell
  auto value_only = grade_item(bank, id, "3*(3+1)*(2*3+1)/6");
  CHECK(value_only.score == 0.0);
  CHECK(value_only.answer_class == "value-only");
  CHECK(value_only.flags == std::vector<std::string>{"equation-value-confusion"});
  CHECK(value_only.feedback.find("equation") != std::string::npos);

  auto fourteen = grade_item(bank, id, "14");
  CHECK(fourteen.answer_class == "value-only");
  CHECK(fourteen.flags == std::vector<std::string>{"equation-value-confusion"});

  auto junk = grade_item(bank, id, "3 +* 4");
  CHECK(junk.answer_class == "unparseable");
  CHECK(junk.score == 0.0);
  CHECK(!junk.feedback.empty());
  CHECK(junk.flags.empty());

  // expression-key items: the mismatch the other way is not confusion-flagged
  QuestionItem expr_item;
  expr_item.id = "synthetic.triangle";
  expr_item.response_type = ResponseType::AlgebraicInput;
  expr_item.key_answer = "k*(k+1)/2";
  QuestionBank synthetic;
  synthetic.proof_id = "synthetic";
  synthetic.items.push_back(expr_item);

  CHECK(grade_item(synthetic, expr_item.id, "(k^2+k)/2").answer_class == "correct");
  CHECK(grade_item(synthetic, expr_item.id, "k*(k+1)/2 + 1").answer_class == "incorrect");
  auto mismatch = grade_item(synthetic, expr_item.id, "s = k*(k+1)/2");
  CHECK(mismatch.answer_class == "type-mismatch");
  CHECK(mismatch.flags.empty());
}

TEST_CASE("derivation grading splits score between chain and form") {
  QuestionBank bank = sum_squares_bank();
  const std::string id = "sum-squares.induction-step";
  // start: k*(k+1)*(2*k+1)/6 + (k+1)^2   target: (k+1)*(k+2)*(2*k+3)/6

  const std::string l1 = "(k*(k+1)*(2*k+1) + 6*(k+1)^2)/6";
  const std::string l2 = "(k+1)*(2*k^2+7*k+6)/6";
  const std::string l3 = "(k+1)*(k+2)*(2*k+3)/6";

  auto perfect = grade_item(bank, id, l1 + ";;" + l2 + ";;" + l3);
  CHECK(perfect.score == 1.0);
  CHECK(perfect.answer_class == "correct");
  CHECK(perfect.flags.empty());

  // same endpoint reached without the middle step
  auto quick = grade_item(bank, id, l3);
  CHECK(quick.score == 1.0);

  // wrong middle line in a 4-line chain: breaks the pair into it and the
  // pair out of it, so the chain component halves
  const std::string wrong = "(k+1)*(2*k^2+7*k+5)/6";
  auto broken = grade_item(bank, id, l1 + ";;" + wrong + ";;" + l2 + ";;" + l3);
  CHECK(broken.score == doctest::Approx(0.5 * 0.5 + 0.5));
  CHECK(broken.answer_class == "broken-chain");
  REQUIRE(!broken.flags.empty());
  CHECK(broken.flags.front() == "broken-pair:2");

  // equivalent final line in the wrong shape loses exactly the form weight
  const std::string expanded = "(2*k^3+9*k^2+13*k+6)/6";
  auto mis_form = grade_item(bank, id, l1 + ";;" + expanded);
  CHECK(mis_form.score == doctest::Approx(0.5));
  CHECK(mis_form.answer_class == "form-mismatch");
  CHECK(mis_form.flags.empty());

  // a single perturbed coefficient cannot reach full marks
  auto perturbed = grade_item(bank, id, l1 + ";;" + l2 + ";;" + "(k+1)*(k+2)*(2*k+4)/6");
  CHECK(perturbed.score < 1.0);
  CHECK(perturbed.flags.front() == "broken-pair:3");

  auto junk = grade_item(bank, id, l1 + ";;" + "nope(");
  CHECK(junk.answer_class == "unparseable");
  CHECK(junk.score == 0.0);
}

TEST_CASE("derivation pair decisions agree with the numeric oracle") {
  QuestionBank bank = sum_squares_bank();
  const QuestionItem& item = *bank.find("sum-squares.induction-step");
  const std::string chains[] = {
      "(k*(k+1)*(2*k+1) + 6*(k+1)^2)/6;;(k+1)*(2*k^2+7*k+6)/6;;(k+1)*(k+2)*(2*k+3)/6",
      "(k*(k+1)*(2*k+1) + 6*(k+1)^2)/6;;(k+1)*(2*k^2+7*k+5)/6;;(k+1)*(k+2)*(2*k+3)/6",
      "(2*k^3+9*k^2+13*k+6)/6;;(k+1)*(k+2)*(2*k+4)/6",
      "k^2;;k^2+1;;k^2+2",
  };
  std::uint64_t seed = 555000;
  for (const auto& chain : chains) {
    ExprPtr prev = parse_expr(item.derivation->start);
    std::istringstream dummy;
    std::string text = chain;
    std::size_t start = 0;
    while (true) {
      std::size_t at = text.find(";;", start);
      std::string piece = at == std::string::npos ? text.substr(start)
                                                  : text.substr(start, at - start);
      ExprPtr cur = parse_expr(piece);
      bool engine = equivalent(prev, cur);
      bool numeric = oracle::probably_equivalent(prev, cur, ++seed);
      CAPTURE(piece);
      CHECK(engine == numeric);
      prev = cur;
      if (at == std::string::npos) break;
      start = at + 2;
    }
  }
}

TEST_CASE("free text is stored, never scored") {
  QuestionBank bank = theorem1_bank();
  auto r = grade_item(bank, "theorem1.warrant.5", "Because the sequence is increasing.");
  CHECK(!r.graded);
  CHECK(r.score == 0.0);
  CHECK(r.answer_class == "ungraded");
  CHECK(grade_item(bank, "theorem1.warrant.5", "").answer_class == "no-response");
}

TEST_CASE("feedback registration bumps the bank version and resolves by class") {
  QuestionBank bank = theorem1_bank();
  const std::string id = "theorem1.backing.completeness-axiom";
  CHECK(bank.version == 1);
  CHECK(grade_item(bank, id, "1").feedback.empty());

  const std::string note =
      "Both line 1 and the completeness axiom refer to the upper bound for S; the "
      "completeness axiom is only used in line 2 to find the least upper bound.";
  register_feedback(bank, id, "line-1", note);
  CHECK(bank.version == 2);

  auto miss = grade_item(bank, id, "1");
  CHECK(miss.feedback == note);
  CHECK(miss.bank_version == 2);
  CHECK(grade_item(bank, id, "4").feedback.empty()); // other classes untouched

  register_feedback(bank, id, "default", "Look for where a least upper bound appears.");
  CHECK(bank.version == 3);
  CHECK(grade_item(bank, id, "4").feedback ==
        "Look for where a least upper bound appears.");
  CHECK(grade_item(bank, id, "1").feedback == note); // exact class wins over default

  CHECK_THROWS_AS(register_feedback(bank, "theorem1.ghost", "x", "y"), UnknownItem);
}

TEST_CASE("csv response logs parse with quoting and reject malformed rows") {
  const std::string csv =
      "student_id,item_id,answer,timestamp\n"
      "s001,theorem1.backing.completeness-axiom,2,2026-02-03T10:00:00Z\n"
      "s002,theorem1.definition.bounded,A;D,2026-02-03T10:01:00Z\n"
      "s003,sum-squares.instantiate.3,\"sum(k^2,k,1,3) = 14\",2026-02-03T10:02:00Z\n"
      "s004,theorem1.warrant.5,\"uses \"\"increasing\"\", twice\",\n"
      "s005,sum-squares.induction-step,a;;b;;c,2026-02-03T10:04:00Z\r\n";
  auto records = parse_csv_responses(csv);
  REQUIRE(records.size() == 5);
  CHECK(records[0].student_id == "s001");
  CHECK(records[0].answer == "2");
  CHECK(records[1].answer == "A;D");
  CHECK(records[2].answer == "sum(k^2,k,1,3) = 14"); // comma survives quoting
  CHECK(records[3].answer == "uses \"increasing\", twice");
  CHECK(records[3].timestamp.empty());
  CHECK(records[4].answer == "a;;b;;c");

  CHECK_THROWS_AS(parse_csv_responses("bad,header\nrow,two"), ParseError);
  CHECK_THROWS_AS(parse_csv_responses(""), ParseError);
  CHECK_THROWS_AS(
      parse_csv_responses("student_id,item_id,answer,timestamp\nonly,three,fields"),
      ParseError);
  CHECK_THROWS_AS(
      parse_csv_responses("student_id,item_id,answer,timestamp\ns1,i1,\"open,t"),
      ParseError);

  // blank trailing lines are tolerated
  CHECK(parse_csv_responses("student_id,item_id,answer,timestamp\n\n").empty());
}

TEST_CASE("jsonl response logs accept strings and arrays") {
  const std::string jsonl =
      R"({"student_id":"s001","item_id":"theorem1.definition.bounded","answer":["A","D"],"timestamp":"t1"})"
      "\n"
      "\n"
      R"({"student_id":"s002","item_id":"sum-squares.induction-step","answer":["x","y"]})"
      "\n"
      R"({"student_id":"s003","item_id":"theorem1.backing.completeness-axiom","answer":"2","timestamp":"t3"})"
      "\n";
  auto records = parse_jsonl_responses(jsonl);
  REQUIRE(records.size() == 3);
  CHECK(records[0].answer == "A;;D");
  CHECK(records[1].answer == "x;;y");
  CHECK(records[1].timestamp.empty());
  CHECK(records[2].answer == "2");

  QuestionBank bank = theorem1_bank();
  auto graded = grade_item(bank, records[0].item_id, records[0].answer);
  CHECK(graded.answer_class == "correct"); // array answers grade like csv ones

  CHECK_THROWS_AS(parse_jsonl_responses("{broken"), ParseError);
  CHECK_THROWS_AS(parse_jsonl_responses(R"({"student_id":"s1"})"), ParseError);
}

TEST_CASE("bulk grading carries records through") {
  QuestionBank bank = theorem1_bank();
  std::vector<ResponseRecord> records = {
      {"s001", "theorem1.backing.completeness-axiom", "2", "t"},
      {"s001", "theorem1.definition.bounded", "C;D", "t"},
      {"s002", "theorem1.definition.bounded", "", "t"},
  };
  auto graded = grade_responses(bank, records);
  REQUIRE(graded.size() == 3);
  CHECK(graded[0].result.answer_class == "correct");
  CHECK(graded[1].result.answer_class == "C+D");
  CHECK(graded[1].record.student_id == "s001");
  CHECK(graded[2].result.answer_class == "no-response");

  records.push_back({"s003", "theorem1.ghost", "1", "t"});
  CHECK_THROWS_AS(grade_responses(bank, records), UnknownItem);
}
