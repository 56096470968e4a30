#include "proofcomp/grader.hpp"

#include "proofcomp/canonical.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace proofcomp {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_on(const std::string& s, const std::string& sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t at = s.find(sep, start);
    if (at == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, at - start));
    start = at + sep.size();
  }
}

std::string resolve_feedback(const QuestionItem& item, const std::string& cls) {
  auto it = item.feedback.find(cls);
  if (it != item.feedback.end()) return it->second;
  it = item.feedback.find("default");
  if (it != item.feedback.end()) return it->second;
  return "";
}

// The display proof numbers its statements "N. ..."; the largest N bounds
// which line selections are even on the page.
int max_statement_number(const QuestionBank& bank) {
  int max = 0;
  std::istringstream in(bank.proof_display);
  std::string line;
  while (std::getline(in, line)) {
    std::size_t i = 0;
    while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
    if (i == 0 || i + 1 >= line.size() || line[i] != '.' || line[i + 1] != ' ') continue;
    max = std::max(max, std::stoi(line.substr(0, i)));
  }
  return max;
}

void grade_line_select(const QuestionBank& bank, const QuestionItem& item,
                       const std::string& answer, GradeResult& r) {
  int n = 0;
  try {
    std::size_t used = 0;
    n = std::stoi(answer, &used);
    if (used != answer.size()) throw std::invalid_argument("trailing junk");
  } catch (const std::exception&) {
    r.answer_class = "invalid";
    return;
  }
  if (std::find(item.key_lines.begin(), item.key_lines.end(), n) != item.key_lines.end()) {
    r.answer_class = "correct";
    r.score = 1.0;
    return;
  }
  if (n >= 1 && n <= max_statement_number(bank)) {
    r.answer_class = "line-" + std::to_string(n);
    return;
  }
  r.answer_class = "invalid";
}

void grade_mcq_single(const QuestionItem& item, const std::string& answer, GradeResult& r) {
  for (const auto& o : item.options) {
    if (o.id != answer) continue;
    r.selected = {o.id};
    if (o.is_key) {
      r.answer_class = "correct";
      r.score = 1.0;
    } else {
      r.answer_class = o.id;
    }
    return;
  }
  r.answer_class = "invalid";
}

void grade_mcq_multi(const QuestionItem& item, const std::string& answer, GradeResult& r) {
  std::set<std::string> picked;
  for (const auto& raw : split_on(answer, ";")) {
    std::string id = trim(raw);
    if (id.empty()) continue; // tolerate ";;"-joined input
    bool known = false;
    for (const auto& o : item.options) known = known || o.id == id;
    if (!known) {
      r.answer_class = "invalid";
      return;
    }
    picked.insert(id);
  }
  if (picked.empty()) {
    r.answer_class = "invalid";
    return;
  }
  r.selected.assign(picked.begin(), picked.end());
  std::set<std::string> keys;
  for (const auto& o : item.options)
    if (o.is_key) keys.insert(o.id);
  if (picked == keys) {
    r.answer_class = "correct";
    r.score = 1.0;
    return;
  }
  std::string cls;
  for (const auto& id : picked) {
    if (!cls.empty()) cls += "+";
    cls += id;
  }
  r.answer_class = cls;
}

void grade_algebraic_input(const QuestionItem& item, const std::string& answer,
                           GradeResult& r) {
  Answer key = parse_answer(item.key_answer);
  Answer given;
  try {
    given = parse_answer(answer);
  } catch (const ParseError& e) {
    r.answer_class = "unparseable";
    r.feedback = resolve_feedback(item, "unparseable");
    if (r.feedback.empty()) r.feedback = e.what();
    return;
  }
  bool key_is_eq = std::holds_alternative<Equation>(key);
  bool given_is_eq = std::holds_alternative<Equation>(given);
  if (key_is_eq && !given_is_eq) {
    // the one mismatch worth a dedicated flag: asked for an equation, got a
    // bare value or expression
    r.answer_class = "value-only";
    r.flags.push_back("equation-value-confusion");
    return;
  }
  if (!key_is_eq && given_is_eq) {
    r.answer_class = "type-mismatch";
    return;
  }
  try {
    bool same = key_is_eq ? equivalent(std::get<Equation>(key), std::get<Equation>(given))
                          : equivalent(std::get<ExprPtr>(key), std::get<ExprPtr>(given));
    r.answer_class = same ? "correct" : "incorrect";
    r.score = same ? 1.0 : 0.0;
  } catch (const UndecidableError&) {
    r.answer_class = "undecidable";
    r.flags.push_back("undecidable");
  }
}

void grade_derivation(const QuestionItem& item, const std::string& answer, GradeResult& r) {
  const DerivationSpec& spec = *item.derivation;
  std::vector<ExprPtr> lines;
  for (const auto& raw : split_on(answer, ";;")) {
    try {
      lines.push_back(parse_expr(trim(raw)));
    } catch (const ParseError& e) {
      r.answer_class = "unparseable";
      r.feedback = resolve_feedback(item, "unparseable");
      if (r.feedback.empty()) r.feedback = e.what();
      return;
    }
  }
  ExprPtr prev = parse_expr(spec.start);
  std::size_t good = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    bool ok = false;
    try {
      ok = equivalent(prev, lines[i]);
    } catch (const UndecidableError&) {
      if (std::find(r.flags.begin(), r.flags.end(), "undecidable") == r.flags.end())
        r.flags.push_back("undecidable");
    }
    if (ok) {
      ++good;
    } else if (r.flags.empty() || r.flags.front().rfind("broken-pair:", 0) != 0) {
      r.flags.insert(r.flags.begin(), "broken-pair:" + std::to_string(i + 1));
    }
    prev = lines[i];
  }
  bool form = matches_form(lines.back(), parse_expr(spec.target));
  double fraction = static_cast<double>(good) / static_cast<double>(lines.size());
  r.score = spec.weight_equivalence * fraction + spec.weight_form * (form ? 1.0 : 0.0);
  if (good == lines.size())
    r.answer_class = form ? "correct" : "form-mismatch";
  else
    r.answer_class = "broken-chain";
}

} // namespace

GradeResult grade_item(const QuestionBank& bank, const std::string& item_id,
                       const std::string& answer) {
  const QuestionItem* item = bank.find(item_id);
  if (!item) throw UnknownItem("no item '" + item_id + "' in bank '" + bank.proof_id + "'");

  GradeResult r;
  r.item_id = item_id;
  r.response_type = item->response_type;
  r.bank_version = bank.version;
  r.graded = item->response_type != ResponseType::FreeTextUngraded;
  for (const auto& o : item->options) {
    r.option_ids.push_back(o.id);
    if (o.is_key) r.key_ids.push_back(o.id);
  }

  std::string t = trim(answer);
  if (t.empty()) {
    r.answer_class = "no-response";
    r.flags.push_back("no-response");
    r.feedback = resolve_feedback(*item, r.answer_class);
    return r;
  }

  switch (item->response_type) {
    case ResponseType::LineSelect:
      grade_line_select(bank, *item, t, r);
      break;
    case ResponseType::McqSingle:
      grade_mcq_single(*item, t, r);
      break;
    case ResponseType::McqMulti:
      grade_mcq_multi(*item, t, r);
      break;
    case ResponseType::AlgebraicInput:
      grade_algebraic_input(*item, t, r);
      break;
    case ResponseType::AlgebraicDerivation:
      grade_derivation(*item, t, r);
      break;
    case ResponseType::FreeTextUngraded:
      r.answer_class = "ungraded";
      break;
  }
  if (r.feedback.empty()) r.feedback = resolve_feedback(*item, r.answer_class);
  return r;
}

std::vector<GradedResponse> grade_responses(const QuestionBank& bank,
                                            const std::vector<ResponseRecord>& records) {
  std::vector<GradedResponse> out;
  out.reserve(records.size());
  for (const auto& rec : records)
    out.push_back({rec, grade_item(bank, rec.item_id, rec.answer)});
  return out;
}

void register_feedback(QuestionBank& bank, const std::string& item_id,
                       const std::string& answer_class, const std::string& text) {
  for (auto& item : bank.items) {
    if (item.id != item_id) continue;
    item.feedback[answer_class] = text;
    ++bank.version;
    return;
  }
  throw UnknownItem("no item '" + item_id + "' in bank '" + bank.proof_id + "'");
}

// ------------------------------------------------------- response logs ---

std::vector<ResponseRecord> parse_csv_responses(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  int line_no = 1;
  auto end_field = [&]() {
    row.push_back(field);
    field.clear();
  };
  auto end_row = [&]() {
    end_field();
    bool blank = row.size() == 1 && row[0].empty();
    if (!blank) rows.push_back(row);
    row.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
        if (c == '\n') ++line_no;
      }
    } else if (c == '"') {
      if (!field.empty())
        throw ParseError("csv line " + std::to_string(line_no) + ": quote inside bare field",
                         i);
      quoted = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\n') {
      if (!field.empty() && field.back() == '\r') field.pop_back();
      end_row();
      ++line_no;
    } else {
      field += c;
    }
  }
  if (quoted) throw ParseError("csv: unterminated quoted field", text.size());
  if (!field.empty() || !row.empty()) end_row();

  if (rows.empty()) throw ParseError("csv: missing header row", 0);
  const std::vector<std::string> header = {"student_id", "item_id", "answer", "timestamp"};
  if (rows[0] != header)
    throw ParseError("csv: header must be student_id,item_id,answer,timestamp", 0);
  std::vector<ResponseRecord> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != 4)
      throw ParseError("csv record " + std::to_string(i) + ": expected 4 fields, got " +
                           std::to_string(rows[i].size()),
                       i);
    out.push_back({rows[i][0], rows[i][1], rows[i][2], rows[i][3]});
  }
  return out;
}

std::vector<ResponseRecord> parse_jsonl_responses(const std::string& text) {
  std::vector<ResponseRecord> out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      json j = json::parse(line);
      ResponseRecord rec;
      rec.student_id = j.at("student_id").get<std::string>();
      rec.item_id = j.at("item_id").get<std::string>();
      const json& ans = j.at("answer");
      if (ans.is_array()) {
        std::string joined;
        for (const auto& part : ans) {
          if (!joined.empty()) joined += ";;";
          joined += part.get<std::string>();
        }
        rec.answer = joined;
      } else {
        rec.answer = ans.get<std::string>();
      }
      rec.timestamp = j.value("timestamp", "");
      out.push_back(std::move(rec));
    } catch (const json::exception& e) {
      throw ParseError("jsonl line " + std::to_string(line_no) + ": " + e.what(),
                       static_cast<std::size_t>(line_no));
    }
  }
  return out;
}

} // namespace proofcomp
