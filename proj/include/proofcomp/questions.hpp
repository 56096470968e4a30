#pragma once

#include "proofcomp/combinations.hpp"
#include "proofcomp/proof.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace proofcomp {

// ----------------------------------------------------------- questions ---

enum class ResponseType {
  LineSelect,          // answer is a statement number
  McqSingle,           // one option id
  McqMulti,            // a set of option ids, graded by exact match
  AlgebraicInput,      // an expression or equation, graded by equivalence
  AlgebraicDerivation, // an ordered chain of expressions
  FreeTextUngraded,    // stored for human review, never scored
};

std::string response_type_name(ResponseType t);
std::optional<ResponseType> response_type_from_name(const std::string& name);

struct QuestionOption {
  std::string id; // stable id ("A".."E"); shuffling reorders display only
  std::string text;
  bool is_key = false;
};

// Weights and endpoints for an algebraic-derivation item.
struct DerivationSpec {
  std::string start;  // expression the chain must begin from
  std::string target; // form the final line must match structurally
  double weight_equivalence = 0.5;
  double weight_form = 0.5;
};

struct QuestionItem {
  std::string id;          // "<proof-id>.<discriminator>"
  std::string template_id; // T1..T11
  // Checklist anchor ("1".."8" with optional letter); "taxonomy" marks items
  // from the general question taxonomy that have no checklist anchor.
  std::string checklist_ref;
  std::string stem;
  ResponseType response_type = ResponseType::FreeTextUngraded;
  std::vector<QuestionOption> options; // mcq only, in display order
  std::vector<int> key_lines;          // line-select: correct iff selection is in here
  std::string key_answer;              // algebraic-input key, expression text
  std::optional<DerivationSpec> derivation;
  std::map<std::string, std::string> feedback; // answer-class -> feedback text
  std::uint64_t shuffle_seed = 0;
};

struct QuestionBank {
  std::string proof_id;
  std::uint64_t seed = 0;
  int version = 1;
  std::string proof_display; // reader-facing proof the items refer to
  std::vector<QuestionItem> items;

  const QuestionItem* find(const std::string& item_id) const;
};

// ------------------------------------------------------- configuration ---

struct McqConfig {
  std::string id;           // item discriminator, e.g. "definition.bounded"
  std::string template_id = "T1";
  std::string checklist_ref = "1b";
  std::string stem;
  bool multi = true;
  std::vector<QuestionOption> options;
  std::map<std::string, std::string> feedback;
};

struct InstantiateConfig {
  std::string id; // e.g. "instantiate.P3"
  std::string stem;
  std::string equation; // parameterized statement, e.g. "sum(k^2,k,1,n) = ..."
  std::string variable; // the parameter to substitute
  long long value = 0;  // the concrete instance
};

struct DerivationConfig {
  std::string id; // e.g. "derivation.induction-step"
  std::string stem;
  DerivationSpec spec;
};

struct TableConfig {
  std::vector<std::string> properties;
  std::vector<ImpossibilityRule> rules;
  std::map<std::string, std::string> witnesses;
};

struct GenerationConfig {
  std::uint64_t seed = 0;
  std::optional<TableConfig> table;
  std::vector<McqConfig> mcqs;
  std::vector<int> warrant_prompts;          // statement numbers for T5
  std::vector<std::string> transfer_prompts; // T10, ungraded
  std::vector<std::string> contrapositive_distractors; // extra T9 options
  std::optional<InstantiateConfig> instantiate;        // T2
  std::optional<DerivationConfig> derivation;
  std::set<std::string> disabled_templates; // template ids to suppress
  std::vector<std::string> checklist_order; // default "1".."8"
};

// Parses the JSON config format (see docs/formats.md).  Throws ParseError.
GenerationConfig parse_generation_config(const std::string& json_text);

// ----------------------------------------------------------- generate ---

struct SkipEntry {
  std::string checklist_item; // top-level "1".."8"
  std::string template_id;
  std::string reason;
};

struct GenerationResult {
  QuestionBank bank;
  std::vector<SkipEntry> skips;
};

// Walks the checklist over the proof and emits one ordered item list.
// Deterministic: the same proof, table, and config produce a byte-identical
// bank.  Checklist items that yield nothing are recorded in `skips`.
GenerationResult generate(const Proof& proof, const std::optional<CombinationTable>& table,
                          const GenerationConfig& config);

// ---------------------------------------------------------------- bank IO

std::string bank_to_json(const QuestionBank& bank);
QuestionBank bank_from_json(const std::string& json_text); // throws ParseError
std::string bank_to_markdown(const QuestionBank& bank);    // human review sheet

// ------------------------------------------------------------- fading ---

struct TooManyLevels : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MonotonicityViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolutionStep {
  std::string prose;
  std::string math; // expression or equation text, may be empty
};

struct FadedExample {
  std::string problem_statement;
  std::vector<SolutionStep> steps;
  int fade_level = 0;
  std::set<std::size_t> hidden_steps; // 0-based indices into steps
  std::string strategy;               // "backward" or "custom"
};

// Backward fading: returns levels+1 examples; level k hides the last k
// steps, so level 0 is the fully worked example.  levels must not exceed the
// step count (TooManyLevels).
std::vector<FadedExample> fade(const std::string& problem,
                               const std::vector<SolutionStep>& steps, int levels);

// Custom fading: schedule[k] is the hidden set at level k+1.  Hidden sets
// must grow monotonically (MonotonicityViolation) and stay in range.
std::vector<FadedExample> fade(const std::string& problem,
                               const std::vector<SolutionStep>& steps,
                               const std::vector<std::set<std::size_t>>& schedule);

} // namespace proofcomp
