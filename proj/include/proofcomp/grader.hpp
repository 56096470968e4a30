#pragma once

#include "proofcomp/questions.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace proofcomp {

struct UnknownItem : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One student's answer to one item, as it arrives from a response log.
// mcq-multi selections are ';'-joined option ids; derivation chains are
// ";;"-joined lines.  The timestamp is carried through untouched.
struct ResponseRecord {
  std::string student_id;
  std::string item_id;
  std::string answer;
  std::string timestamp;
};

// CSV with header student_id,item_id,answer,timestamp and RFC-style quoting
// (fields may be quoted; "" inside quotes is a literal quote).
std::vector<ResponseRecord> parse_csv_responses(const std::string& text);

// One JSON object per non-empty line; "answer" is a string or an array of
// strings (an array is the natural shape for mcq-multi and derivations).
std::vector<ResponseRecord> parse_jsonl_responses(const std::string& text);

struct GradeResult {
  std::string item_id;
  ResponseType response_type = ResponseType::FreeTextUngraded;
  bool graded = false; // free-text answers are stored, never scored
  double score = 0.0;
  // "correct", "no-response", "invalid", "unparseable", or a wrong-answer
  // class such as "line-3", "B", "A+C", "value-only", "broken-chain".
  std::string answer_class;
  std::vector<std::string> flags;
  std::string feedback; // exact class match, then "default", else empty
  int bank_version = 1;
  std::vector<std::string> selected;   // mcq: ids the student picked
  std::vector<std::string> option_ids; // mcq: every id, display order
  std::vector<std::string> key_ids;    // mcq: the key ids
};

// Grades one raw answer against the bank's key.  Malformed input becomes an
// answer class ("invalid"/"unparseable"), never an exception; only an item
// id missing from the bank throws UnknownItem.
GradeResult grade_item(const QuestionBank& bank, const std::string& item_id,
                       const std::string& answer);

struct GradedResponse {
  ResponseRecord record;
  GradeResult result;
};

std::vector<GradedResponse> grade_responses(const QuestionBank& bank,
                                            const std::vector<ResponseRecord>& records);

// Attaches feedback text to an answer class of one item and bumps the bank
// version, so later grade results advertise which feedback set they used.
void register_feedback(QuestionBank& bank, const std::string& item_id,
                       const std::string& answer_class, const std::string& text);

} // namespace proofcomp
