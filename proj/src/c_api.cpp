#include "proofcomp.h"

#include "proofcomp/analytics.hpp"
#include "proofcomp/canonical.hpp"
#include "proofcomp/dsl.hpp"
#include "proofcomp/grader.hpp"
#include "proofcomp/questions.hpp"

#include "json.hpp"

#include <cstdlib>
#include <cstring>
#include <string>

using nlohmann::json;

struct pc_proof {
  proofcomp::Proof value;
};
struct pc_bank {
  proofcomp::QuestionBank value;
};
struct pc_expr {
  proofcomp::Answer value;
};

namespace {

#define PC_EXPORT __attribute__((visibility("default")))

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

const char* kind_of(pc_status code) {
  switch (code) {
    case PC_ERR_USAGE: return "usage";
    case PC_ERR_PARSE: return "parse";
    case PC_ERR_REFERENCE: return "reference";
    case PC_ERR_IO: return "io";
    case PC_ERR_UNDECIDABLE: return "undecidable";
    case PC_ERR_STATE: return "state";
    default: return "internal";
  }
}

pc_status fail(char** err, pc_status code, const std::string& message) {
  if (err) {
    json j = {{"code", static_cast<int>(code)},
              {"kind", kind_of(code)},
              {"message", message}};
    *err = dup_string(j.dump());
  }
  return code;
}

template <typename F>
pc_status wrap(char** err, F&& body) {
  if (err) *err = nullptr;
  try {
    return body();
  } catch (const proofcomp::ParseError& e) {
    return fail(err, PC_ERR_PARSE, e.what());
  } catch (const proofcomp::ReferenceError& e) {
    return fail(err, PC_ERR_REFERENCE, e.what());
  } catch (const proofcomp::UnknownItem& e) {
    return fail(err, PC_ERR_REFERENCE, e.what());
  } catch (const proofcomp::UndecidableError& e) {
    return fail(err, PC_ERR_UNDECIDABLE, e.what());
  } catch (const proofcomp::NonConcreteBound& e) {
    return fail(err, PC_ERR_STATE, e.what());
  } catch (const proofcomp::EvalError& e) {
    return fail(err, PC_ERR_STATE, e.what());
  } catch (const proofcomp::NoWarrantPresent& e) {
    return fail(err, PC_ERR_STATE, e.what());
  } catch (const proofcomp::MixedBankVersions& e) {
    return fail(err, PC_ERR_STATE, e.what());
  } catch (const proofcomp::TooManyLevels& e) {
    return fail(err, PC_ERR_USAGE, e.what());
  } catch (const proofcomp::MonotonicityViolation& e) {
    return fail(err, PC_ERR_USAGE, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(err, PC_ERR_USAGE, e.what());
  } catch (const std::exception& e) {
    return fail(err, PC_ERR_INTERNAL, e.what());
  }
}

pc_status require(char** err, bool ok, const char* what) {
  if (ok) return PC_OK;
  return fail(err, PC_ERR_USAGE, std::string(what) + " must not be NULL");
}

json grade_result_json(const proofcomp::GradeResult& r) {
  json j;
  j["item_id"] = r.item_id;
  j["response_type"] = proofcomp::response_type_name(r.response_type);
  j["graded"] = r.graded;
  j["score"] = r.score;
  j["class"] = r.answer_class;
  j["flags"] = r.flags;
  j["feedback"] = r.feedback;
  j["bank_version"] = r.bank_version;
  j["selected"] = r.selected;
  return j;
}

std::vector<proofcomp::ResponseRecord> parse_log(const std::string& text,
                                                 const std::string& format) {
  if (format == "csv") return proofcomp::parse_csv_responses(text);
  if (format == "jsonl") return proofcomp::parse_jsonl_responses(text);
  throw std::invalid_argument("unknown log format '" + format + "' (csv or jsonl)");
}

template <typename F, typename G>
pc_status compare_answers(const pc_expr* a, const pc_expr* b, int* out, char** err,
                          F&& on_exprs, G&& on_equations) {
  if (pc_status s = require(err, a && b && out, "a/b/out")) return s;
  return wrap(err, [&]() {
    bool a_eq = std::holds_alternative<proofcomp::Equation>(a->value);
    bool b_eq = std::holds_alternative<proofcomp::Equation>(b->value);
    if (a_eq != b_eq)
      throw std::invalid_argument("cannot compare an equation with a bare expression");
    bool same = a_eq ? on_equations(std::get<proofcomp::Equation>(a->value),
                                    std::get<proofcomp::Equation>(b->value))
                     : on_exprs(std::get<proofcomp::ExprPtr>(a->value),
                                std::get<proofcomp::ExprPtr>(b->value));
    *out = same ? 1 : 0;
    return PC_OK;
  });
}

} // namespace

extern "C" {

PC_EXPORT const char* pc_version(void) { return "1.0.0"; }

PC_EXPORT void pc_string_free(char* s) { std::free(s); }

/* --------------------------------------------------------------- proofs */

PC_EXPORT pc_status pc_proof_parse(const char* dsl_text, pc_proof** out, char** err) {
  if (pc_status s = require(err, dsl_text && out, "dsl_text/out")) return s;
  *out = nullptr;
  return wrap(err, [&]() {
    auto handle = new pc_proof{proofcomp::parse_proof(dsl_text)};
    *out = handle;
    return PC_OK;
  });
}

PC_EXPORT void pc_proof_free(pc_proof* proof) { delete proof; }

PC_EXPORT pc_status pc_proof_validate(const pc_proof* proof, char** report_json,
                                      char** err) {
  if (pc_status s = require(err, proof && report_json, "proof/report_json")) return s;
  return wrap(err, [&]() {
    json arr = json::array();
    for (const auto& issue : proofcomp::validate(proof->value)) {
      arr.push_back({{"code", issue.code},
                     {"message", issue.message},
                     {"statement", issue.statement}});
    }
    *report_json = dup_string(arr.dump(2) + "\n");
    return PC_OK;
  });
}

PC_EXPORT pc_status pc_proof_render(const pc_proof* proof, int structured, char** out,
                                    char** err) {
  if (pc_status s = require(err, proof && out, "proof/out")) return s;
  return wrap(err, [&]() {
    auto style = structured ? proofcomp::RenderStyle::Structured
                            : proofcomp::RenderStyle::Plain;
    *out = dup_string(proofcomp::render_numbered(proof->value, style));
    return PC_OK;
  });
}

PC_EXPORT pc_status pc_proof_render_display(const pc_proof* proof, char** out,
                                            char** err) {
  if (pc_status s = require(err, proof && out, "proof/out")) return s;
  return wrap(err, [&]() {
    *out = dup_string(proofcomp::render_display(proof->value));
    return PC_OK;
  });
}

PC_EXPORT pc_status pc_proof_outline(const pc_proof* proof, char** out, char** err) {
  if (pc_status s = require(err, proof && out, "proof/out")) return s;
  return wrap(err, [&]() {
    *out = dup_string(proofcomp::structure_outline(proof->value));
    return PC_OK;
  });
}

PC_EXPORT pc_status pc_proof_hypothesis_usage(const pc_proof* proof, char** out,
                                              char** err) {
  if (pc_status s = require(err, proof && out, "proof/out")) return s;
  return wrap(err, [&]() {
    json j = json::object();
    for (const auto& [atom, lines] : proofcomp::hypothesis_usage(proof->value))
      j[atom] = lines;
    *out = dup_string(j.dump(2) + "\n");
    return PC_OK;
  });
}

PC_EXPORT pc_status pc_proof_omit_warrant(pc_proof* proof, int statement, char** err) {
  if (pc_status s = require(err, proof != nullptr, "proof")) return s;
  return wrap(err, [&]() {
    proof->value = proofcomp::omit_warrant(proof->value, statement);
    return PC_OK;
  });
}

/* ----------------------------------------------------------- generation */

PC_EXPORT pc_status pc_generate(const pc_proof* proof, const char* config_json,
                                pc_bank** out, char** skips_json, char** err) {
  if (pc_status s = require(err, proof && config_json && out, "proof/config_json/out"))
    return s;
  *out = nullptr;
  if (skips_json) *skips_json = nullptr;
  return wrap(err, [&]() {
    proofcomp::GenerationConfig cfg = proofcomp::parse_generation_config(config_json);
    std::optional<proofcomp::CombinationTable> table;
    if (cfg.table)
      table = proofcomp::combination_table(cfg.table->properties, cfg.table->rules,
                                           cfg.table->witnesses);
    proofcomp::GenerationResult result = proofcomp::generate(proof->value, table, cfg);
    if (skips_json) {
      json arr = json::array();
      for (const auto& skip : result.skips) {
        arr.push_back({{"checklist_item", skip.checklist_item},
                       {"template_id", skip.template_id},
                       {"reason", skip.reason}});
      }
      *skips_json = dup_string(arr.dump(2) + "\n");
    }
    *out = new pc_bank{std::move(result.bank)};
    return PC_OK;
  });
}

PC_EXPORT pc_status pc_bank_from_json(const char* json_text, pc_bank** out, char** err) {
  if (pc_status s = require(err, json_text && out, "json_text/out")) return s;
  *out = nullptr;
  return wrap(err, [&]() {
    *out = new pc_bank{proofcomp::bank_from_json(json_text)};
    return PC_OK;
  });
}

PC_EXPORT pc_status pc_bank_to_json(const pc_bank* bank, char** out, char** err) {
  if (pc_status s = require(err, bank && out, "bank/out")) return s;
  return wrap(err, [&]() {
    *out = dup_string(proofcomp::bank_to_json(bank->value));
    return PC_OK;
  });
}

PC_EXPORT pc_status pc_bank_to_markdown(const pc_bank* bank, char** out, char** err) {
  if (pc_status s = require(err, bank && out, "bank/out")) return s;
  return wrap(err, [&]() {
    *out = dup_string(proofcomp::bank_to_markdown(bank->value));
    return PC_OK;
  });
}

PC_EXPORT void pc_bank_free(pc_bank* bank) { delete bank; }

/* -------------------------------------------------------------- grading */

PC_EXPORT pc_status pc_grade(const pc_bank* bank, const char* item_id, const char* answer,
                             char** result_json, char** err) {
  if (pc_status s = require(err, bank && item_id && answer && result_json,
                            "bank/item_id/answer/result_json"))
    return s;
  return wrap(err, [&]() {
    proofcomp::GradeResult r = proofcomp::grade_item(bank->value, item_id, answer);
    *result_json = dup_string(grade_result_json(r).dump(2) + "\n");
    return PC_OK;
  });
}

PC_EXPORT pc_status pc_grade_log(const pc_bank* bank, const char* log_text,
                                 const char* format, char** results_json, char** err) {
  if (pc_status s = require(err, bank && log_text && format && results_json,
                            "bank/log_text/format/results_json"))
    return s;
  return wrap(err, [&]() {
    auto records = parse_log(log_text, format);
    auto graded = proofcomp::grade_responses(bank->value, records);
    json arr = json::array();
    for (const auto& g : graded) {
      json j = grade_result_json(g.result);
      j["student_id"] = g.record.student_id;
      j["timestamp"] = g.record.timestamp;
      arr.push_back(std::move(j));
    }
    *results_json = dup_string(arr.dump(2) + "\n");
    return PC_OK;
  });
}

PC_EXPORT pc_status pc_bank_add_feedback(pc_bank* bank, const char* item_id,
                                         const char* answer_class, const char* text,
                                         char** err) {
  if (pc_status s = require(err, bank && item_id && answer_class && text,
                            "bank/item_id/answer_class/text"))
    return s;
  return wrap(err, [&]() {
    proofcomp::register_feedback(bank->value, item_id, answer_class, text);
    return PC_OK;
  });
}

/* ------------------------------------------------------------ analytics */

PC_EXPORT pc_status pc_analyze(const pc_bank* bank, const char* log_text,
                               const char* format, const char* out_format, char** out,
                               char** err) {
  if (pc_status s = require(err, bank && log_text && format && out_format && out,
                            "bank/log_text/format/out_format/out"))
    return s;
  return wrap(err, [&]() {
    auto records = parse_log(log_text, format);
    auto graded = proofcomp::grade_responses(bank->value, records);
    auto stats = proofcomp::compute_stats(bank->value, graded);
    std::string of = out_format;
    if (of == "json")
      *out = dup_string(proofcomp::stats_to_json(stats));
    else if (of == "markdown")
      *out = dup_string(proofcomp::stats_to_markdown(stats));
    else
      throw std::invalid_argument("unknown output format '" + of + "' (json or markdown)");
    return PC_OK;
  });
}

/* ---------------------------------------------------------- expressions */

PC_EXPORT pc_status pc_expr_parse(const char* text, pc_expr** out, char** err) {
  if (pc_status s = require(err, text && out, "text/out")) return s;
  *out = nullptr;
  return wrap(err, [&]() {
    *out = new pc_expr{proofcomp::parse_answer(text)};
    return PC_OK;
  });
}

PC_EXPORT void pc_expr_free(pc_expr* expr) { delete expr; }

PC_EXPORT pc_status pc_expr_render(const pc_expr* expr, char** out, char** err) {
  if (pc_status s = require(err, expr && out, "expr/out")) return s;
  return wrap(err, [&]() {
    if (std::holds_alternative<proofcomp::Equation>(expr->value))
      *out = dup_string(proofcomp::render(std::get<proofcomp::Equation>(expr->value)));
    else
      *out = dup_string(proofcomp::render(std::get<proofcomp::ExprPtr>(expr->value)));
    return PC_OK;
  });
}

PC_EXPORT pc_status pc_expr_equivalent(const pc_expr* a, const pc_expr* b, int* out,
                                       char** err) {
  return compare_answers(
      a, b, out, err,
      [](const proofcomp::ExprPtr& x, const proofcomp::ExprPtr& y) {
        return proofcomp::equivalent(x, y);
      },
      [](const proofcomp::Equation& x, const proofcomp::Equation& y) {
        return proofcomp::equivalent(x, y);
      });
}

PC_EXPORT pc_status pc_expr_matches_form(const pc_expr* a, const pc_expr* b, int* out,
                                         char** err) {
  return compare_answers(
      a, b, out, err,
      [](const proofcomp::ExprPtr& x, const proofcomp::ExprPtr& y) {
        return proofcomp::matches_form(x, y);
      },
      [](const proofcomp::Equation& x, const proofcomp::Equation& y) {
        return proofcomp::matches_form(x, y);
      });
}

PC_EXPORT pc_status pc_expr_substitute(const pc_expr* expr, const char* var,
                                       const pc_expr* value, pc_expr** out, char** err) {
  if (pc_status s = require(err, expr && var && value && out, "expr/var/value/out"))
    return s;
  *out = nullptr;
  return wrap(err, [&]() {
    if (!std::holds_alternative<proofcomp::ExprPtr>(value->value))
      throw std::invalid_argument("substitution value must be an expression");
    const auto& v = std::get<proofcomp::ExprPtr>(value->value);
    if (std::holds_alternative<proofcomp::Equation>(expr->value)) {
      const auto& eq = std::get<proofcomp::Equation>(expr->value);
      *out = new pc_expr{proofcomp::Equation{proofcomp::substitute(eq.lhs, var, v),
                                             proofcomp::substitute(eq.rhs, var, v)}};
    } else {
      *out = new pc_expr{
          proofcomp::substitute(std::get<proofcomp::ExprPtr>(expr->value), var, v)};
    }
    return PC_OK;
  });
}

PC_EXPORT pc_status pc_expr_expand_sum(const pc_expr* expr, pc_expr** out, char** err) {
  if (pc_status s = require(err, expr && out, "expr/out")) return s;
  *out = nullptr;
  return wrap(err, [&]() {
    if (std::holds_alternative<proofcomp::Equation>(expr->value)) {
      const auto& eq = std::get<proofcomp::Equation>(expr->value);
      *out = new pc_expr{proofcomp::Equation{proofcomp::expand_sum(eq.lhs),
                                             proofcomp::expand_sum(eq.rhs)}};
    } else {
      *out = new pc_expr{proofcomp::expand_sum(std::get<proofcomp::ExprPtr>(expr->value))};
    }
    return PC_OK;
  });
}

/* --------------------------------------------------------------- fading */

PC_EXPORT pc_status pc_fade(const char* spec_json, char** out_json, char** err) {
  if (pc_status s = require(err, spec_json && out_json, "spec_json/out_json")) return s;
  return wrap(err, [&]() {
    json spec;
    try {
      spec = json::parse(spec_json);
    } catch (const json::exception& e) {
      throw proofcomp::ParseError(std::string("fade spec: ") + e.what(), 0);
    }
    std::string problem;
    std::vector<proofcomp::SolutionStep> steps;
    std::vector<proofcomp::FadedExample> faded;
    try {
      problem = spec.at("problem").get<std::string>();
      for (const auto& step : spec.at("steps")) {
        steps.push_back({step.at("prose").get<std::string>(),
                         step.value("math", std::string())});
      }
      if (spec.contains("schedule")) {
        std::vector<std::set<std::size_t>> schedule;
        for (const auto& level : spec["schedule"]) {
          std::set<std::size_t> hidden;
          for (const auto& idx : level) hidden.insert(idx.get<std::size_t>());
          schedule.push_back(std::move(hidden));
        }
        faded = proofcomp::fade(problem, steps, schedule);
      } else {
        faded = proofcomp::fade(problem, steps, spec.value("levels", 0));
      }
    } catch (const json::exception& e) {
      throw proofcomp::ParseError(std::string("fade spec: ") + e.what(), 0);
    }
    json arr = json::array();
    for (const auto& ex : faded) {
      json steps_json = json::array();
      for (std::size_t i = 0; i < ex.steps.size(); ++i) {
        steps_json.push_back({{"prose", ex.steps[i].prose},
                              {"math", ex.steps[i].math},
                              {"hidden", ex.hidden_steps.count(i) > 0}});
      }
      arr.push_back({{"fade_level", ex.fade_level},
                     {"strategy", ex.strategy},
                     {"problem", ex.problem_statement},
                     {"steps", std::move(steps_json)}});
    }
    *out_json = dup_string(arr.dump(2) + "\n");
    return PC_OK;
  });
}

} /* extern "C" */
