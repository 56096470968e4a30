#pragma once

#include "proofcomp/expr.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace proofcomp {

// Thrown in strict mode when two impossibility rules with different
// justifications claim the same table row.
struct ConflictingRules : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A truth assignment to a theorem's properties, hypotheses first and the
// conclusion last.
struct PropertySignature {
  std::vector<std::string> properties;
  std::vector<bool> values;

  // Compact form used as the witness-map key: one 'T' or 'F' per property,
  // e.g. "TFT".
  std::string key() const;
};

enum class RuleJustification { TheoremUnderStudy, ExternalTheorem };

// Declares a family of signatures that cannot be witnessed.  The pattern has
// one character per property: 't' (must be true), 'f' (must be false) or '*'
// (either).  The justification is either the theorem whose table this is, or
// a named external theorem rendered as a table footnote.
struct ImpossibilityRule {
  std::string id;
  std::string pattern;
  RuleJustification justification = RuleJustification::TheoremUnderStudy;
  std::string external_name;
};

enum class EntryStatus {
  ExemplifiesTheorem, // all properties true, witness supplied
  Impossible,         // an impossibility rule matched (see rule_id)
  Example,            // witnessed combination
  MissingWitness,     // witnessable combination with no witness supplied
};

struct ExampleEntry {
  PropertySignature signature;
  EntryStatus status = EntryStatus::MissingWitness;
  std::string rule_id; // set when status == Impossible
  std::string witness; // set for ExemplifiesTheorem / Example
  // The witness parsed as an expression or equation, when it parses.
  std::optional<Answer> witness_math;
};

struct CombinationTable {
  std::vector<std::string> properties;
  std::vector<ImpossibilityRule> rules;
  std::vector<ExampleEntry> entries;
};

// Builds the 2^n table in canonical order: all-true first, every property
// listed T before F, with later properties (conclusion last) flipping
// fastest.  Rules are checked before anything else, in registration order;
// in strict mode two matching rules with different justifications raise
// ConflictingRules.  Witnesses are looked up by signature key ("TTF").
CombinationTable combination_table(const std::vector<std::string>& properties,
                                   const std::vector<ImpossibilityRule>& rules,
                                   const std::map<std::string, std::string>& witnesses,
                                   bool strict = true);

// Returns the row matching the given property assignment.  Every table
// property must be present in the map.
const ExampleEntry& classify_example(const CombinationTable& table,
                                     const std::map<std::string, bool>& properties);

// Markdown rendering: one column per property (header capitalized with a
// " ?" suffix) plus an Example column; external-theorem rules become
// lettered "Note A." cells with footnotes below the table.
std::string to_markdown(const CombinationTable& table);

} // namespace proofcomp
