#include "proofcomp/combinations.hpp"

#include <algorithm>
#include <cctype>

namespace proofcomp {

std::string PropertySignature::key() const {
  std::string out;
  out.reserve(values.size());
  for (bool v : values) out += v ? 'T' : 'F';
  return out;
}

namespace {

bool matches(const ImpossibilityRule& rule, const std::vector<bool>& values) {
  for (size_t i = 0; i < values.size(); ++i) {
    char c = rule.pattern[i];
    if (c == '*') continue;
    if ((c == 't') != values[i]) return false;
  }
  return true;
}

// Two rules conflict when they justify impossibility differently: the
// theorem under study vs an external theorem, or two different externals.
bool same_justification(const ImpossibilityRule& a, const ImpossibilityRule& b) {
  if (a.justification != b.justification) return false;
  if (a.justification == RuleJustification::ExternalTheorem)
    return a.external_name == b.external_name;
  return true;
}

} // namespace

CombinationTable combination_table(const std::vector<std::string>& properties,
                                   const std::vector<ImpossibilityRule>& rules,
                                   const std::map<std::string, std::string>& witnesses,
                                   bool strict) {
  if (properties.empty()) throw std::invalid_argument("need at least one property");
  if (properties.size() > 16) throw std::invalid_argument("too many properties");
  for (const auto& r : rules) {
    if (r.pattern.size() != properties.size())
      throw std::invalid_argument("rule '" + r.id + "' pattern length " +
                                  std::to_string(r.pattern.size()) + " does not match " +
                                  std::to_string(properties.size()) + " properties");
    for (char c : r.pattern)
      if (c != 't' && c != 'f' && c != '*')
        throw std::invalid_argument("rule '" + r.id + "' pattern may only contain t, f, *");
  }

  CombinationTable table;
  table.properties = properties;
  table.rules = rules;
  size_t n = properties.size();
  for (size_t i = 0; i < (size_t{1} << n); ++i) {
    ExampleEntry entry;
    entry.signature.properties = properties;
    entry.signature.values.resize(n);
    for (size_t j = 0; j < n; ++j)
      entry.signature.values[j] = !((i >> (n - 1 - j)) & 1);

    const ImpossibilityRule* hit = nullptr;
    for (const auto& r : rules) {
      if (!matches(r, entry.signature.values)) continue;
      if (!hit) {
        hit = &r;
      } else if (strict && !same_justification(*hit, r)) {
        throw ConflictingRules("rules '" + hit->id + "' and '" + r.id +
                               "' both match signature " + entry.signature.key() +
                               " with different justifications");
      }
    }

    if (hit) {
      entry.status = EntryStatus::Impossible;
      entry.rule_id = hit->id;
    } else {
      auto w = witnesses.find(entry.signature.key());
      bool all_true = std::all_of(entry.signature.values.begin(),
                                  entry.signature.values.end(), [](bool v) { return v; });
      if (w == witnesses.end()) {
        entry.status = EntryStatus::MissingWitness;
      } else {
        entry.status = all_true ? EntryStatus::ExemplifiesTheorem : EntryStatus::Example;
        entry.witness = w->second;
        try {
          entry.witness_math = parse_answer(entry.witness);
        } catch (const ParseError&) {
          // witnesses are prose-or-math; unparseable ones stay text-only
        }
      }
    }
    table.entries.push_back(std::move(entry));
  }
  return table;
}

const ExampleEntry& classify_example(const CombinationTable& table,
                                     const std::map<std::string, bool>& properties) {
  std::vector<bool> values;
  for (const auto& p : table.properties) {
    auto it = properties.find(p);
    if (it == properties.end())
      throw std::invalid_argument("property '" + p + "' missing from the assignment");
    values.push_back(it->second);
  }
  for (const auto& e : table.entries)
    if (e.signature.values == values) return e;
  throw std::logic_error("combination table does not cover signature"); // unreachable
}

std::string to_markdown(const CombinationTable& table) {
  // assign Note letters to external rules in order of first appearance
  std::vector<std::string> note_order; // rule ids
  auto note_letter = [&](const std::string& rule_id) -> std::string {
    for (size_t i = 0; i < note_order.size(); ++i)
      if (note_order[i] == rule_id) return std::string(1, static_cast<char>('A' + i));
    note_order.push_back(rule_id);
    return std::string(1, static_cast<char>('A' + note_order.size() - 1));
  };
  auto rule_by_id = [&](const std::string& id) -> const ImpossibilityRule& {
    for (const auto& r : table.rules)
      if (r.id == id) return r;
    throw std::logic_error("unknown rule id"); // unreachable: entries cite registered rules
  };

  std::string out = "|";
  for (const auto& p : table.properties) {
    std::string label = p;
    if (!label.empty()) label[0] = static_cast<char>(std::toupper(label[0]));
    out += " " + label + " ? |";
  }
  out += " Example |\n|";
  for (size_t i = 0; i < table.properties.size() + 1; ++i) out += "---|";
  out += "\n";

  for (const auto& e : table.entries) {
    out += "|";
    for (bool v : e.signature.values) out += v ? " T |" : " F |";
    std::string cell;
    switch (e.status) {
      case EntryStatus::ExemplifiesTheorem:
        cell = "Exemplify theorem: " + e.witness;
        break;
      case EntryStatus::Impossible: {
        const auto& r = rule_by_id(e.rule_id);
        if (r.justification == RuleJustification::TheoremUnderStudy)
          cell = "Counter example to theorem!";
        else
          cell = "Note " + note_letter(e.rule_id) + ".";
        break;
      }
      case EntryStatus::Example:
        cell = e.witness;
        break;
      case EntryStatus::MissingWitness:
        cell = "(missing witness)";
        break;
    }
    out += " " + cell + " |\n";
  }

  if (!note_order.empty()) {
    out += "\n";
    for (size_t i = 0; i < note_order.size(); ++i) {
      const auto& r = rule_by_id(note_order[i]);
      out += "Note " + std::string(1, static_cast<char>('A' + i)) + ": " + r.external_name +
             ".\n";
    }
  }
  return out;
}

} // namespace proofcomp
