#pragma once

#include "proofcomp/grader.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace proofcomp {

struct MixedBankVersions : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact half-up rounding to two decimals, e.g. format_percent(243, 344) ==
// "70.64".  Computed in integer arithmetic so results are platform-stable;
// a zero base formats as "0.00".
std::string format_percent(int count, int base);

struct ClassCount {
  std::string answer_class;
  int count = 0;
  bool has_feedback = false; // the bank holds feedback text for this class
};

// Per-option tallies for mcq items.  "Incorrect" means respondents whose
// selection was valid but not the key set, so the columns explain which
// distractor pulled them away.
struct OptionStats {
  std::string option_id;
  bool is_key = false;
  int selected_incorrect = 0;
  int not_selected_incorrect = 0;
  int selected_total = 0; // everyone who picked it, correct answers included
};

struct ItemStats {
  std::string item_id;
  ResponseType response_type = ResponseType::FreeTextUngraded;
  int attempts = 0;    // rows in the log for this item
  int respondents = 0; // attempts minus blank
  int correct = 0;
  int incorrect = 0; // valid but wrong (free-text answers never count here)
  int invalid = 0;   // unreadable: bad ids, out-of-range lines, parse failures
  int blank = 0;
  double mean_score = 0.0;        // over respondents
  std::vector<ClassCount> classes; // descending count, ties by class name
  std::vector<OptionStats> options;
};

struct CohortStats {
  std::string proof_id;
  int bank_version = 1;
  int total_records = 0;
  std::vector<ItemStats> items; // bank order; only items with records
};

// Aggregates graded responses.  Order-insensitive: any permutation of the
// same records produces identical output.  Throws MixedBankVersions when the
// results were not all graded against the same bank version.
CohortStats compute_stats(const QuestionBank& bank,
                          const std::vector<GradedResponse>& graded);

// Wrong-answer classes across the bank, ranked by how many students each one
// caught, with a column showing whether targeted feedback exists yet.
struct DistractorEntry {
  std::string item_id;
  std::string answer_class;
  int count = 0;
  bool has_feedback = false;
};
std::vector<DistractorEntry> distractor_report(const CohortStats& stats);

std::string stats_to_markdown(const CohortStats& stats);
std::string stats_to_json(const CohortStats& stats);

} // namespace proofcomp
