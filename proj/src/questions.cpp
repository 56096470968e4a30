#include "proofcomp/questions.hpp"

#include "proofcomp/dsl.hpp"
#include "proofcomp/logic.hpp"

#include "json.hpp"

#include <algorithm>
#include <functional>

namespace proofcomp {

using nlohmann::json;

// --------------------------------------------------------------- names ---

std::string response_type_name(ResponseType t) {
  switch (t) {
    case ResponseType::LineSelect: return "line-select";
    case ResponseType::McqSingle: return "mcq-single";
    case ResponseType::McqMulti: return "mcq-multi";
    case ResponseType::AlgebraicInput: return "algebraic-input";
    case ResponseType::AlgebraicDerivation: return "algebraic-derivation";
    case ResponseType::FreeTextUngraded: return "free-text-ungraded";
  }
  return "free-text-ungraded";
}

std::optional<ResponseType> response_type_from_name(const std::string& name) {
  if (name == "line-select") return ResponseType::LineSelect;
  if (name == "mcq-single") return ResponseType::McqSingle;
  if (name == "mcq-multi") return ResponseType::McqMulti;
  if (name == "algebraic-input") return ResponseType::AlgebraicInput;
  if (name == "algebraic-derivation") return ResponseType::AlgebraicDerivation;
  if (name == "free-text-ungraded") return ResponseType::FreeTextUngraded;
  return std::nullopt;
}

const QuestionItem* QuestionBank::find(const std::string& item_id) const {
  for (const auto& item : items)
    if (item.id == item_id) return &item;
  return nullptr;
}

// ----------------------------------------------------------------- rng ---

namespace {

std::uint64_t splitmix_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Deterministic Fisher-Yates over the display order; option ids are stable.
void shuffle_options(QuestionItem& item, std::uint64_t bank_seed) {
  item.shuffle_seed = bank_seed ^ fnv1a(item.id);
  std::uint64_t state = item.shuffle_seed;
  for (std::size_t i = item.options.size(); i > 1; --i)
    std::swap(item.options[i - 1], item.options[splitmix_next(state) % i]);
}

std::string yes_no_signature(const PropertySignature& sig) {
  std::string out;
  for (std::size_t i = 0; i < sig.properties.size(); ++i) {
    if (i) out += "; ";
    out += sig.properties[i] + ": " + (sig.values[i] ? "yes" : "no");
  }
  return out;
}

} // namespace

// -------------------------------------------------------------- config ---

namespace {

ParseError config_error(const std::string& msg) { return ParseError("config: " + msg, 0); }

std::vector<QuestionOption> parse_options(const json& arr) {
  std::vector<QuestionOption> out;
  for (const auto& o : arr) {
    QuestionOption opt;
    opt.id = o.at("id").get<std::string>();
    opt.text = o.at("text").get<std::string>();
    opt.is_key = o.value("key", false);
    out.push_back(std::move(opt));
  }
  return out;
}

std::map<std::string, std::string> parse_string_map(const json& obj) {
  std::map<std::string, std::string> out;
  for (auto it = obj.begin(); it != obj.end(); ++it) out[it.key()] = it.value().get<std::string>();
  return out;
}

} // namespace

GenerationConfig parse_generation_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw config_error(e.what());
  }
  try {
    GenerationConfig cfg;
    cfg.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("table")) {
      TableConfig t;
      t.properties = j["table"].at("properties").get<std::vector<std::string>>();
      for (const auto& r : j["table"].value("rules", json::array())) {
        ImpossibilityRule rule;
        rule.id = r.at("id").get<std::string>();
        rule.pattern = r.at("pattern").get<std::string>();
        std::string just = r.value("justification", "theorem");
        if (just == "theorem") {
          rule.justification = RuleJustification::TheoremUnderStudy;
        } else if (just == "external") {
          rule.justification = RuleJustification::ExternalTheorem;
          rule.external_name = r.at("name").get<std::string>();
        } else {
          throw config_error("rule justification must be 'theorem' or 'external'");
        }
        t.rules.push_back(std::move(rule));
      }
      if (j["table"].contains("witnesses")) t.witnesses = parse_string_map(j["table"]["witnesses"]);
      cfg.table = std::move(t);
    }
    for (const auto& m : j.value("mcqs", json::array())) {
      McqConfig mc;
      mc.id = m.at("id").get<std::string>();
      mc.template_id = m.value("template", "T1");
      mc.checklist_ref = m.value("checklist", "1b");
      mc.stem = m.at("stem").get<std::string>();
      mc.multi = m.value("multi", true);
      mc.options = parse_options(m.at("options"));
      if (m.contains("feedback")) mc.feedback = parse_string_map(m["feedback"]);
      cfg.mcqs.push_back(std::move(mc));
    }
    cfg.warrant_prompts = j.value("warrant_prompts", std::vector<int>{});
    cfg.transfer_prompts = j.value("transfer_prompts", std::vector<std::string>{});
    cfg.contrapositive_distractors =
        j.value("contrapositive_distractors", std::vector<std::string>{});
    if (j.contains("instantiate")) {
      InstantiateConfig ic;
      ic.id = j["instantiate"].value("id", "instantiate");
      ic.stem = j["instantiate"].at("stem").get<std::string>();
      ic.equation = j["instantiate"].at("equation").get<std::string>();
      ic.variable = j["instantiate"].at("variable").get<std::string>();
      ic.value = j["instantiate"].at("value").get<long long>();
      cfg.instantiate = std::move(ic);
    }
    if (j.contains("derivation")) {
      DerivationConfig dc;
      dc.id = j["derivation"].value("id", "derivation");
      dc.stem = j["derivation"].at("stem").get<std::string>();
      dc.spec.start = j["derivation"].at("start").get<std::string>();
      dc.spec.target = j["derivation"].at("target").get<std::string>();
      dc.spec.weight_equivalence = j["derivation"].value("weight_equivalence", 0.5);
      dc.spec.weight_form = j["derivation"].value("weight_form", 0.5);
      cfg.derivation = std::move(dc);
    }
    for (const auto& t : j.value("disabled_templates", std::vector<std::string>{}))
      cfg.disabled_templates.insert(t);
    cfg.checklist_order = j.value("checklist_order", std::vector<std::string>{});
    return cfg;
  } catch (const json::exception& e) {
    throw config_error(e.what());
  }
}

// ------------------------------------------------------------ generate ---

namespace {

constexpr StructureKind kAllKinds[] = {
    StructureKind::Direct,        StructureKind::DefinitionChasing,
    StructureKind::Iff,           StructureKind::Cases,
    StructureKind::Induction,     StructureKind::Contrapositive,
    StructureKind::Contradiction, StructureKind::EquivalenceChain,
};

struct Generator {
  const Proof& proof;
  const std::optional<CombinationTable>& table;
  const GenerationConfig& config;
  GenerationResult result;
  std::map<std::string, std::vector<QuestionItem>> groups;

  Generator(const Proof& p, const std::optional<CombinationTable>& t,
            const GenerationConfig& c)
      : proof(p), table(t), config(c) {}

  bool enabled(const std::string& templ, const std::string& checklist) {
    if (!config.disabled_templates.count(templ)) return true;
    skip(checklist, templ, "disabled by config");
    return false;
  }

  void skip(const std::string& checklist, const std::string& templ, const std::string& why) {
    result.skips.push_back({checklist, templ, why});
  }

  void add(QuestionItem item) {
    std::string group =
        item.checklist_ref == "taxonomy" ? "taxonomy" : item.checklist_ref.substr(0, 1);
    groups[group].push_back(std::move(item));
  }

  QuestionItem base_item(const std::string& suffix, const std::string& templ,
                         const std::string& checklist) {
    QuestionItem item;
    item.id = proof.id + "." + suffix;
    item.template_id = templ;
    item.checklist_ref = checklist;
    return item;
  }

  void add_mcq(QuestionItem item, std::vector<QuestionOption> options, bool multi) {
    std::size_t keys = 0;
    for (const auto& o : options) keys += o.is_key ? 1 : 0;
    if (multi && keys == 0)
      throw std::invalid_argument("mcq-multi item " + item.id + " has no key option");
    if (!multi && keys != 1)
      throw std::invalid_argument("mcq-single item " + item.id + " needs exactly one key");
    item.response_type = multi ? ResponseType::McqMulti : ResponseType::McqSingle;
    item.options = std::move(options);
    shuffle_options(item, config.seed);
    add(std::move(item));
  }

  // ---- checklist 1: definitions, notation, examples for definitions ----

  void emit_configured_mcqs() {
    for (const auto& mc : config.mcqs) {
      if (!enabled(mc.template_id, mc.checklist_ref)) continue;
      QuestionItem item = base_item(mc.id, mc.template_id, mc.checklist_ref);
      item.stem = mc.stem;
      item.feedback = mc.feedback;
      add_mcq(std::move(item), mc.options, mc.multi);
    }
  }

  void emit_instantiate() {
    if (!config.instantiate) return;
    if (!enabled("T2", "1a")) return;
    const auto& ic = *config.instantiate;
    Equation eq = parse_equation(ic.equation);
    ExprPtr value = Expr::integer(static_cast<long long>(ic.value));
    ExprPtr lhs = substitute(eq.lhs, ic.variable, value);
    ExprPtr rhs = substitute(eq.rhs, ic.variable, value);
    if (contains_sum(lhs)) lhs = expand_sum(lhs);
    if (contains_sum(rhs)) rhs = expand_sum(rhs);
    QuestionItem item = base_item(ic.id, "T2", "1a");
    item.stem = ic.stem;
    item.response_type = ResponseType::AlgebraicInput;
    item.key_answer = render(Equation{lhs, rhs});
    item.feedback["value-only"] =
        "The requested statement is an equation; writing only one side's value mixes up the "
        "equation with the number it evaluates to.";
    add(std::move(item));
  }

  void emit_classify() {
    if (!table) {
      skip("1", "T7", "no combination table configured");
      return;
    }
    if (!enabled("T7", "1c")) return;
    for (const auto& entry : table->entries) {
      if (entry.status != EntryStatus::Example &&
          entry.status != EntryStatus::ExemplifiesTheorem)
        continue;
      QuestionItem item =
          base_item("classify." + entry.signature.key(), "T7", "1c");
      item.stem = "Consider the example " + entry.witness +
                  ". Which of the following properties does it have?";
      std::vector<QuestionOption> options;
      bool any_true = false;
      for (std::size_t i = 0; i < entry.signature.properties.size(); ++i) {
        QuestionOption opt;
        opt.id = std::string(1, static_cast<char>('A' + i));
        opt.text = entry.signature.properties[i];
        opt.is_key = entry.signature.values[i];
        any_true = any_true || opt.is_key;
        options.push_back(std::move(opt));
      }
      QuestionOption none;
      none.id = std::string(1, static_cast<char>('A' + options.size()));
      none.text = "none of these properties";
      none.is_key = !any_true;
      options.push_back(std::move(none));
      add_mcq(std::move(item), std::move(options), /*multi=*/true);
    }
  }

  // ---- checklist 2: structure ----

  void emit_proof_type() {
    if (!proof.structure) {
      skip("2", "T3", "the proof declares no structure outline");
      return;
    }
    if (!enabled("T3", "2")) return;
    QuestionItem item = base_item("proof-type", "T3", "2");
    item.stem = "Which description best matches the overall structure of this proof?";
    std::vector<QuestionOption> options;
    for (std::size_t i = 0; i < std::size(kAllKinds); ++i) {
      QuestionOption opt;
      opt.id = std::string(1, static_cast<char>('A' + i));
      opt.text = kind_name(kAllKinds[i]);
      opt.is_key = kAllKinds[i] == proof.structure->kind;
      options.push_back(std::move(opt));
    }
    add_mcq(std::move(item), std::move(options), /*multi=*/false);
  }

  void role_item(const std::string& suffix, const std::string& stem, std::vector<int> key) {
    QuestionItem item = base_item("role." + suffix, "T6", "2a");
    item.stem = stem;
    item.response_type = ResponseType::LineSelect;
    item.key_lines = std::move(key);
    add(std::move(item));
  }

  void emit_structure_roles() {
    if (!proof.structure || !enabled("T6", "2a")) return;
    std::function<void(const StructureNode&)> walk = [&](const StructureNode& node) {
      if (node.kind == StructureKind::Induction) {
        auto span_lines = [](const Span& s) {
          std::vector<int> lines;
          for (int i = s.first; i <= s.last; ++i) lines.push_back(i);
          return lines;
        };
        if (node.induction_hypothesis)
          role_item("induction-hypothesis", "Which statement states the induction hypothesis?",
                    span_lines(*node.induction_hypothesis));
        if (node.base_case)
          role_item("induction-base", "Which statement establishes the base case?",
                    span_lines(*node.base_case));
        if (node.induction_conclusion)
          role_item("induction-conclusion",
                    "Which statement draws the conclusion of the induction?",
                    span_lines(*node.induction_conclusion));
        std::vector<int> uses;
        for (const auto& s : proof.statements)
          if (std::find(s.roles.begin(), s.roles.end(), "uses-induction-hypothesis") !=
              s.roles.end())
            uses.push_back(s.number);
        if (!uses.empty())
          role_item("uses-induction-hypothesis",
                    "In which statement of the induction step is the induction hypothesis "
                    "used?",
                    std::move(uses));
      }
      if (node.kind == StructureKind::Cases) {
        for (const auto& child : node.children) {
          if (child.case_label.empty()) continue;
          role_item("case." + std::to_string(child.span.first),
                    "Which statement opens the case \"" + child.case_label + "\"?",
                    {child.span.first});
        }
      }
      if (node.kind == StructureKind::Contradiction && node.contradicts != 0) {
        role_item("contradiction." + std::to_string(node.span.first),
                  "Which statement arrives at the contradiction?", {node.contradicts});
      }
      if (node.kind == StructureKind::Iff) {
        for (const auto& child : node.children) {
          if (child.direction.empty()) continue;
          role_item("direction." + child.direction,
                    "Which statement begins the \"" + child.direction + "\" direction?",
                    {child.span.first});
        }
      }
      for (const auto& child : node.children) walk(child);
    };
    walk(*proof.structure);
  }

  void emit_derivation() {
    if (!config.derivation) return;
    if (!enabled("T2", "2a")) return;
    const auto& dc = *config.derivation;
    parse_expr(dc.spec.start);  // validated here so grading cannot surprise
    parse_expr(dc.spec.target);
    QuestionItem item = base_item(dc.id, "T2", "2a");
    item.stem = dc.stem;
    item.response_type = ResponseType::AlgebraicDerivation;
    item.derivation = dc.spec;
    add(std::move(item));
  }

  // ---- checklist 3: hypotheses ----

  void emit_hypothesis_usage() {
    if (proof.theorem.hypotheses.empty()) {
      skip("3", "T4", "the theorem declares no hypotheses");
      return;
    }
    if (!enabled("T4", "3a")) return;
    auto usage = hypothesis_usage(proof);
    for (const auto& h : proof.theorem.hypotheses) {
      auto it = usage.find(h.atom);
      if (it == usage.end() || it->second.empty()) continue; // validation flags these
      QuestionItem item = base_item("hypothesis." + h.atom, "T4", "3a");
      item.stem = "In which step of the proof is the hypothesis that " + h.text +
                  " first used?";
      item.response_type = ResponseType::LineSelect;
      item.key_lines = {it->second.front()};
      add(std::move(item));
    }
  }

  void emit_provide_and_justify() {
    if (!table) {
      if (!proof.theorem.hypotheses.empty())
        skip("3", "T7", "no combination table configured");
      return;
    }
    if (!enabled("T7", "3b")) return;
    for (const auto& entry : table->entries) {
      if (entry.status == EntryStatus::Impossible) continue;
      QuestionItem item = base_item("provide." + entry.signature.key(), "T7", "3b");
      item.stem = "Provide an example with these properties: " +
                  yes_no_signature(entry.signature) + ".";
      item.response_type = ResponseType::FreeTextUngraded;
      if (!entry.witness.empty()) item.feedback["model-answer"] = entry.witness;
      add(std::move(item));
    }
    for (const auto& entry : table->entries) {
      if (entry.status != EntryStatus::Impossible) continue;
      QuestionItem item = base_item("justify." + entry.signature.key(), "T7", "3b");
      item.stem = "Explain why no example has these properties: " +
                  yes_no_signature(entry.signature) + ".";
      item.response_type = ResponseType::FreeTextUngraded;
      const ImpossibilityRule* rule = nullptr;
      for (const auto& r : table->rules)
        if (r.id == entry.rule_id) rule = &r;
      if (rule && rule->justification == RuleJustification::ExternalTheorem)
        item.feedback["model-answer"] =
            "This combination is ruled out by a known result: " + rule->external_name + ".";
      else
        item.feedback["model-answer"] = "Such an example would contradict the theorem.";
      add(std::move(item));
    }
  }

  // ---- checklist 4: warrants ----

  void emit_warrant_prompts() {
    if (config.warrant_prompts.empty() && !has_error_lines()) {
      skip("4", "T5", "no warrant prompts configured and no marked error lines");
      return;
    }
    if (config.warrant_prompts.empty()) return;
    if (!enabled("T5", "4")) return;
    for (int n : config.warrant_prompts) {
      const ProofStatement* stmt = nullptr;
      for (const auto& s : proof.statements)
        if (s.number == n) stmt = &s;
      if (!stmt) throw ReferenceError("warrant prompt refers to missing statement " +
                                      std::to_string(n));
      std::string model;
      if (stmt->warrant.kind == WarrantKind::Text) model = stmt->warrant.value;
      else if (stmt->warrant.kind == WarrantKind::RuleRef)
        model = "apply the rule '" + stmt->warrant.value + "'";
      else if (!stmt->backing.empty())
        model = "this step is backed by " + stmt->backing;
      else if (stmt->omitted_warrant.kind != WarrantKind::None)
        model = stmt->omitted_warrant.value;
      else
        throw ReferenceError("statement " + std::to_string(n) +
                             " has no warrant or backing to elicit");
      QuestionItem item = base_item("warrant." + std::to_string(n), "T5", "4");
      if (n > 1)
        item.stem = "Why can we proceed from statement " + std::to_string(n - 1) +
                    ". to statement " + std::to_string(n) + ". in the proof?";
      else
        item.stem = "What justifies statement 1. of the proof?";
      item.response_type = ResponseType::FreeTextUngraded;
      item.feedback["model-answer"] = model;
      add(std::move(item));
    }
  }

  bool has_error_lines() const {
    for (const auto& s : proof.statements)
      if (s.is_error_line) return true;
    return false;
  }

  void emit_error_items() {
    if (!has_error_lines()) return;
    if (!enabled("T11", "4")) return;
    std::vector<int> errors;
    std::string explanation;
    for (const auto& s : proof.statements) {
      if (!s.is_error_line) continue;
      errors.push_back(s.number);
      if (explanation.empty()) explanation = s.error_explanation;
    }
    QuestionItem line = base_item("error-line", "T11", "4");
    line.stem = "This argument reaches a false conclusion. Which line contains the error?";
    line.response_type = ResponseType::LineSelect;
    line.key_lines = errors;
    add(std::move(line));

    QuestionItem why = base_item("error-explain", "T11", "4");
    why.stem = "Explain what exactly goes wrong in the erroneous line.";
    why.response_type = ResponseType::FreeTextUngraded;
    if (!explanation.empty()) why.feedback["model-answer"] = explanation;
    add(std::move(why));
  }

  // ---- checklist 5: external results ----

  void emit_backing_usage() {
    std::vector<std::pair<std::string, std::vector<int>>> cited; // external id -> statements
    for (const auto& e : proof.externals) {
      std::vector<int> lines;
      for (const auto& s : proof.statements) {
        if (s.backing == e.id || s.omitted_backing == e.id) lines.push_back(s.number);
      }
      if (!lines.empty()) cited.emplace_back(e.id, std::move(lines));
    }
    if (cited.empty()) {
      skip("5", "T4", "the proof cites no external results");
      return;
    }
    if (!enabled("T4", "5")) return;
    for (const auto& [id, lines] : cited) {
      const ExternalResult* ext = nullptr;
      for (const auto& e : proof.externals)
        if (e.id == id) ext = &e;
      QuestionItem item = base_item("backing." + id, "T4", "5");
      item.stem = "In which step of the proof is the " + ext->name + " used?";
      item.response_type = ResponseType::LineSelect;
      item.key_lines = lines;
      add(std::move(item));
    }
  }

  // ---- checklist 6: gadgets ----

  void emit_gadgets() {
    if (proof.gadgets.empty()) {
      skip("6", "T8", "the proof declares no gadgets");
      return;
    }
    if (!enabled("T8", "6")) return;
    for (const auto& g : proof.gadgets) {
      QuestionItem item = base_item("gadget." + g.id, "T8", "6");
      item.stem = "Statement " + std::to_string(g.construction_statement) + " introduces " +
                  g.id + ". What is the motivation for constructing it?";
      item.response_type = ResponseType::FreeTextUngraded;
      if (!g.description.empty()) item.feedback["model-answer"] = g.description;
      add(std::move(item));
    }
  }

  // ---- checklist 7: converse and contrapositive ----

  void emit_converse_items() {
    const LogicPtr& stmt = proof.theorem.statement;
    if (!stmt || stmt->kind != LogicKind::Implies) {
      skip("7", "T9", "the theorem statement is not an implication");
      return;
    }
    if (!enabled("T9", "7")) return;

    {
      QuestionItem item = base_item("contrapositive", "T9", "7");
      item.stem = "Which of the following is the contrapositive of the theorem?";
      std::vector<QuestionOption> options;
      auto push = [&](const std::string& text, bool key) {
        QuestionOption opt;
        opt.id = std::string(1, static_cast<char>('A' + options.size()));
        opt.text = text;
        opt.is_key = key;
        options.push_back(std::move(opt));
      };
      push(pretty(contrapositive(stmt)), true);
      push(pretty(converse(stmt)), false);
      push(pretty(stmt), false);
      LogicPtr inverse = LogicNode::implies(negate(stmt->args[0]), negate(stmt->args[1]));
      push(pretty(inverse), false);
      for (const auto& d : config.contrapositive_distractors) push(d, false);
      add_mcq(std::move(item), std::move(options), /*multi=*/false);
    }

    if (!table) {
      skip("7", "T9", "converse truth needs a combination table");
      return;
    }
    // A witnessed row with a true conclusion and some false hypothesis is a
    // counterexample to the converse; if every such row is impossible the
    // converse holds.  Anything in between stays undecided.
    const ExampleEntry* counterexample = nullptr;
    bool undecided = false;
    for (const auto& entry : table->entries) {
      if (!entry.signature.values.back()) continue; // conclusion false
      bool all_hyp = true;
      for (std::size_t i = 0; i + 1 < entry.signature.values.size(); ++i)
        all_hyp = all_hyp && entry.signature.values[i];
      if (all_hyp) continue;
      if (entry.status == EntryStatus::Example) {
        if (!counterexample) counterexample = &entry;
      } else if (entry.status != EntryStatus::Impossible) {
        undecided = true;
      }
    }
    if (!counterexample && undecided) {
      skip("7", "T9", "the combination table leaves the converse undecided");
      return;
    }
    QuestionItem item = base_item("converse-truth", "T9", "7");
    item.stem = "Is the converse of the theorem true or false?";
    std::vector<QuestionOption> options;
    options.push_back({"A", "The converse is true.", counterexample == nullptr});
    options.push_back({"B", "The converse is false.", counterexample != nullptr});
    if (counterexample) {
      std::string why = "The example " + counterexample->witness +
                        " satisfies the conclusion without satisfying every hypothesis, so "
                        "the converse fails.";
      item.feedback["correct"] = why;
      item.feedback["A"] = why;
    } else {
      item.feedback["correct"] =
          "Every combination with the conclusion and a missing hypothesis is impossible, so "
          "the converse holds.";
    }
    add_mcq(std::move(item), std::move(options), /*multi=*/false);
  }

  // ---- checklist 8 + taxonomy: walkthrough and transfer prompts ----

  void emit_walkthrough() {
    if (proof.theorem.kind != TheoremKind::General) {
      skip("8", "T10", "walkthrough applies to general theorems only");
      return;
    }
    if (!enabled("T10", "8")) return;
    QuestionItem item = base_item("walkthrough", "T10", "8");
    item.stem = "Follow the proof through, step by step, with a simple specific example of "
                "your own choosing, including any constructed objects.";
    item.response_type = ResponseType::FreeTextUngraded;
    add(std::move(item));
  }

  void emit_transfer_prompts() {
    if (config.transfer_prompts.empty()) return;
    if (!enabled("T10", "taxonomy")) return;
    int i = 0;
    for (const auto& prompt : config.transfer_prompts) {
      QuestionItem item = base_item("transfer." + std::to_string(++i), "T10", "taxonomy");
      item.stem = prompt;
      item.response_type = ResponseType::FreeTextUngraded;
      add(std::move(item));
    }
  }

  GenerationResult run() {
    result.bank.proof_id = proof.id;
    result.bank.seed = config.seed;
    result.bank.version = 1;
    result.bank.proof_display = render_display(proof);

    emit_configured_mcqs();
    emit_instantiate();
    emit_classify();
    emit_proof_type();
    emit_structure_roles();
    emit_derivation();
    emit_hypothesis_usage();
    emit_provide_and_justify();
    emit_warrant_prompts();
    emit_error_items();
    emit_backing_usage();
    emit_gadgets();
    emit_converse_items();
    emit_walkthrough();
    emit_transfer_prompts();

    std::vector<std::string> order = config.checklist_order;
    if (order.empty()) order = {"1", "2", "3", "4", "5", "6", "7", "8"};
    if (std::find(order.begin(), order.end(), "taxonomy") == order.end())
      order.push_back("taxonomy");
    for (const auto& group : order) {
      auto it = groups.find(group);
      if (it == groups.end()) continue;
      for (auto& item : it->second) result.bank.items.push_back(std::move(item));
      groups.erase(it);
    }
    // groups not named in a custom order still ship, in checklist order
    for (auto& [name, items] : groups)
      for (auto& item : items) result.bank.items.push_back(std::move(item));
    return std::move(result);
  }
};

} // namespace

GenerationResult generate(const Proof& proof, const std::optional<CombinationTable>& table,
                          const GenerationConfig& config) {
  Generator gen(proof, table, config);
  return gen.run();
}

// ------------------------------------------------------------- bank IO ---

std::string bank_to_json(const QuestionBank& bank) {
  json j;
  j["proof_id"] = bank.proof_id;
  j["seed"] = bank.seed;
  j["version"] = bank.version;
  j["proof_display"] = bank.proof_display;
  j["items"] = json::array();
  for (const auto& item : bank.items) {
    json ji;
    ji["id"] = item.id;
    ji["template"] = item.template_id;
    ji["checklist"] = item.checklist_ref;
    ji["stem"] = item.stem;
    ji["response_type"] = response_type_name(item.response_type);
    ji["shuffle_seed"] = item.shuffle_seed;
    if (!item.options.empty()) {
      ji["options"] = json::array();
      for (const auto& o : item.options)
        ji["options"].push_back({{"id", o.id}, {"text", o.text}, {"key", o.is_key}});
    }
    if (!item.key_lines.empty()) ji["key_lines"] = item.key_lines;
    if (!item.key_answer.empty()) ji["key_answer"] = item.key_answer;
    if (item.derivation) {
      ji["derivation"] = {{"start", item.derivation->start},
                          {"target", item.derivation->target},
                          {"weight_equivalence", item.derivation->weight_equivalence},
                          {"weight_form", item.derivation->weight_form}};
    }
    if (!item.feedback.empty()) ji["feedback"] = item.feedback;
    j["items"].push_back(std::move(ji));
  }
  return j.dump(2) + "\n";
}

QuestionBank bank_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("bank: ") + e.what(), 0);
  }
  try {
    QuestionBank bank;
    bank.proof_id = j.value("proof_id", "");
    bank.seed = j.value("seed", std::uint64_t{0});
    bank.version = j.value("version", 1);
    bank.proof_display = j.value("proof_display", "");
    for (const auto& ji : j.value("items", json::array())) {
      QuestionItem item;
      item.id = ji.at("id").get<std::string>();
      item.template_id = ji.value("template", "");
      item.checklist_ref = ji.value("checklist", "");
      item.stem = ji.value("stem", "");
      auto rt = response_type_from_name(ji.value("response_type", ""));
      if (!rt)
        throw ParseError("bank: item " + item.id + " has unknown response type '" +
                             ji.value("response_type", "") + "'",
                         0);
      item.response_type = *rt;
      item.shuffle_seed = ji.value("shuffle_seed", std::uint64_t{0});
      for (const auto& o : ji.value("options", json::array())) {
        item.options.push_back({o.at("id").get<std::string>(),
                                o.at("text").get<std::string>(), o.value("key", false)});
      }
      item.key_lines = ji.value("key_lines", std::vector<int>{});
      item.key_answer = ji.value("key_answer", "");
      if (ji.contains("derivation")) {
        DerivationSpec d;
        d.start = ji["derivation"].at("start").get<std::string>();
        d.target = ji["derivation"].at("target").get<std::string>();
        d.weight_equivalence = ji["derivation"].value("weight_equivalence", 0.5);
        d.weight_form = ji["derivation"].value("weight_form", 0.5);
        item.derivation = std::move(d);
      }
      if (ji.contains("feedback"))
        for (auto it = ji["feedback"].begin(); it != ji["feedback"].end(); ++it)
          item.feedback[it.key()] = it.value().get<std::string>();
      bank.items.push_back(std::move(item));
    }
    return bank;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bank: ") + e.what(), 0);
  }
}

std::string bank_to_markdown(const QuestionBank& bank) {
  std::string out = "# Question bank: " + bank.proof_id + "\n\n";
  out += "- seed: " + std::to_string(bank.seed) + "\n";
  out += "- version: " + std::to_string(bank.version) + "\n";
  out += "- items: " + std::to_string(bank.items.size()) + "\n\n";
  out += "## Proof under assessment\n\n```\n" + bank.proof_display + "```\n\n";
  for (const auto& item : bank.items) {
    out += "## " + item.id + "\n\n";
    out += "- template: " + item.template_id + " | checklist: " + item.checklist_ref +
           " | type: " + response_type_name(item.response_type) + "\n\n";
    out += item.stem + "\n\n";
    if (!item.options.empty()) {
      for (const auto& o : item.options) {
        out += "- (" + o.id + ") " + o.text;
        if (o.is_key) out += "  [key]";
        out += "\n";
      }
      out += "\n";
    }
    if (!item.key_lines.empty()) {
      out += "Key line(s): ";
      for (std::size_t i = 0; i < item.key_lines.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(item.key_lines[i]);
      }
      out += "\n\n";
    }
    if (!item.key_answer.empty()) out += "Key answer: `" + item.key_answer + "`\n\n";
    if (item.derivation) {
      out += "Derivation: start `" + item.derivation->start + "`, target `" +
             item.derivation->target + "`, weights " +
             std::to_string(item.derivation->weight_equivalence) + "/" +
             std::to_string(item.derivation->weight_form) + "\n\n";
    }
    if (!item.feedback.empty()) {
      out += "Feedback:\n";
      for (const auto& [cls, text] : item.feedback) out += "- " + cls + ": " + text + "\n";
      out += "\n";
    }
  }
  return out;
}

// -------------------------------------------------------------- fading ---

namespace {

FadedExample make_level(const std::string& problem, const std::vector<SolutionStep>& steps,
                        int level, std::set<std::size_t> hidden, const std::string& strategy) {
  FadedExample ex;
  ex.problem_statement = problem;
  ex.steps = steps;
  ex.fade_level = level;
  ex.hidden_steps = std::move(hidden);
  ex.strategy = strategy;
  return ex;
}

} // namespace

std::vector<FadedExample> fade(const std::string& problem,
                               const std::vector<SolutionStep>& steps, int levels) {
  if (levels < 0) throw std::invalid_argument("levels must be non-negative");
  if (static_cast<std::size_t>(levels) > steps.size())
    throw TooManyLevels("cannot fade " + std::to_string(levels) + " levels out of " +
                        std::to_string(steps.size()) + " steps");
  std::vector<FadedExample> out;
  for (int k = 0; k <= levels; ++k) {
    std::set<std::size_t> hidden;
    for (std::size_t i = steps.size() - static_cast<std::size_t>(k); i < steps.size(); ++i)
      hidden.insert(i);
    out.push_back(make_level(problem, steps, k, std::move(hidden), "backward"));
  }
  return out;
}

std::vector<FadedExample> fade(const std::string& problem,
                               const std::vector<SolutionStep>& steps,
                               const std::vector<std::set<std::size_t>>& schedule) {
  std::vector<FadedExample> out;
  out.push_back(make_level(problem, steps, 0, {}, "custom"));
  std::set<std::size_t> prev;
  int level = 0;
  for (const auto& hidden : schedule) {
    ++level;
    for (std::size_t idx : hidden)
      if (idx >= steps.size())
        throw std::invalid_argument("hidden step index " + std::to_string(idx) +
                                    " out of range");
    if (!std::includes(hidden.begin(), hidden.end(), prev.begin(), prev.end()) ||
        hidden.size() <= prev.size())
      throw MonotonicityViolation("hidden set at level " + std::to_string(level) +
                                  " must strictly contain the previous level's");
    out.push_back(make_level(problem, steps, level, hidden, "custom"));
    prev = hidden;
  }
  return out;
}

} // namespace proofcomp
