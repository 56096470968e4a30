#include "proofcomp/analytics.hpp"

#include "json.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace proofcomp {

using nlohmann::json;

std::string format_percent(int count, int base) {
  if (base <= 0) return "0.00";
  long long centi = (20000LL * count + base) / (2LL * base);
  std::string frac = std::to_string(centi % 100);
  if (frac.size() < 2) frac = "0" + frac;
  return std::to_string(centi / 100) + "." + frac;
}

namespace {

bool is_invalid_class(const std::string& cls) {
  return cls == "invalid" || cls == "unparseable";
}

ItemStats summarize(const QuestionItem& item, const std::vector<const GradeResult*>& rs) {
  ItemStats s;
  s.item_id = item.id;
  s.response_type = item.response_type;
  s.attempts = static_cast<int>(rs.size());

  std::map<std::string, int> class_counts;
  std::vector<double> scores;
  for (const GradeResult* r : rs) {
    ++class_counts[r->answer_class];
    if (r->answer_class == "no-response") {
      ++s.blank;
      continue;
    }
    ++s.respondents;
    scores.push_back(r->score);
    if (!r->graded) continue; // free text: a respondent, nothing more
    if (r->answer_class == "correct")
      ++s.correct;
    else if (is_invalid_class(r->answer_class))
      ++s.invalid;
    else
      ++s.incorrect;
  }

  // summed smallest-first so the mean is identical for any record order
  std::sort(scores.begin(), scores.end());
  double total = 0.0;
  for (double v : scores) total += v;
  s.mean_score = s.respondents ? total / s.respondents : 0.0;

  for (const auto& [cls, count] : class_counts)
    s.classes.push_back({cls, count, item.feedback.count(cls) > 0});
  std::stable_sort(s.classes.begin(), s.classes.end(),
                   [](const ClassCount& a, const ClassCount& b) {
                     if (a.count != b.count) return a.count > b.count;
                     return a.answer_class < b.answer_class;
                   });

  if (item.response_type == ResponseType::McqSingle ||
      item.response_type == ResponseType::McqMulti) {
    for (const auto& opt : item.options) {
      OptionStats os;
      os.option_id = opt.id;
      os.is_key = opt.is_key;
      for (const GradeResult* r : rs) {
        bool picked = std::find(r->selected.begin(), r->selected.end(), opt.id) !=
                      r->selected.end();
        if (picked) ++os.selected_total;
        if (r->graded && r->answer_class != "correct" && r->answer_class != "no-response" &&
            !is_invalid_class(r->answer_class)) {
          if (picked)
            ++os.selected_incorrect;
          else
            ++os.not_selected_incorrect;
        }
      }
      s.options.push_back(os);
    }
  }
  return s;
}

} // namespace

CohortStats compute_stats(const QuestionBank& bank,
                          const std::vector<GradedResponse>& graded) {
  CohortStats stats;
  stats.proof_id = bank.proof_id;
  stats.bank_version = bank.version;
  stats.total_records = static_cast<int>(graded.size());

  std::map<std::string, std::vector<const GradeResult*>> by_item;
  for (const auto& g : graded) {
    if (g.result.bank_version != bank.version)
      throw MixedBankVersions("result for '" + g.result.item_id + "' was graded at version " +
                              std::to_string(g.result.bank_version) + ", bank is at " +
                              std::to_string(bank.version));
    by_item[g.result.item_id].push_back(&g.result);
  }

  for (const auto& item : bank.items) {
    auto it = by_item.find(item.id);
    if (it == by_item.end()) continue;
    stats.items.push_back(summarize(item, it->second));
  }
  return stats;
}

std::vector<DistractorEntry> distractor_report(const CohortStats& stats) {
  std::vector<DistractorEntry> out;
  for (const auto& item : stats.items) {
    for (const auto& cls : item.classes) {
      if (cls.answer_class == "correct" || cls.answer_class == "no-response" ||
          cls.answer_class == "ungraded" || is_invalid_class(cls.answer_class))
        continue;
      out.push_back({item.item_id, cls.answer_class, cls.count, cls.has_feedback});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const DistractorEntry& a,
                                              const DistractorEntry& b) {
    if (a.count != b.count) return a.count > b.count;
    if (a.item_id != b.item_id) return a.item_id < b.item_id;
    return a.answer_class < b.answer_class;
  });
  return out;
}

std::string stats_to_markdown(const CohortStats& stats) {
  std::string out = "# Cohort statistics: " + stats.proof_id + "\n\n";
  out += "- bank version: " + std::to_string(stats.bank_version) + "\n";
  out += "- records: " + std::to_string(stats.total_records) + "\n\n";
  for (const auto& item : stats.items) {
    out += "## " + item.item_id + " (" + response_type_name(item.response_type) + ")\n\n";
    out += "| measure | count | of attempts | of respondents |\n|---|---|---|---|\n";
    auto row = [&](const std::string& name, int count) {
      out += "| " + name + " | " + std::to_string(count) + " | " +
             format_percent(count, item.attempts) + " | " +
             format_percent(count, item.respondents) + " |\n";
    };
    out += "| attempts | " + std::to_string(item.attempts) + " | 100.00 | - |\n";
    row("respondents", item.respondents);
    row("correct", item.correct);
    row("incorrect", item.incorrect);
    row("invalid", item.invalid);
    row("blank", item.blank);
    out += "\n";

    if (!item.classes.empty()) {
      out += "| answer class | count | of attempts | of respondents | feedback |\n";
      out += "|---|---|---|---|---|\n";
      for (const auto& cls : item.classes) {
        out += "| " + cls.answer_class + " | " + std::to_string(cls.count) + " | " +
               format_percent(cls.count, item.attempts) + " | " +
               format_percent(cls.count, item.respondents) + " | " +
               (cls.has_feedback ? "yes" : "no") + " |\n";
      }
      out += "\n";
    }

    if (!item.options.empty()) {
      out += "| option | key | picked | of attempts | picked when wrong | skipped when "
             "wrong |\n|---|---|---|---|---|---|\n";
      for (const auto& os : item.options) {
        out += "| " + os.option_id + " | " + (os.is_key ? "yes" : "no") + " | " +
               std::to_string(os.selected_total) + " | " +
               format_percent(os.selected_total, item.attempts) + " | " +
               std::to_string(os.selected_incorrect) + " (" +
               format_percent(os.selected_incorrect, item.attempts) + ") | " +
               std::to_string(os.not_selected_incorrect) + " (" +
               format_percent(os.not_selected_incorrect, item.attempts) + ") |\n";
      }
      out += "\n";
    }
  }

  auto distractors = distractor_report(stats);
  if (!distractors.empty()) {
    out += "## Distractors by reach\n\n";
    out += "| item | answer class | count | feedback |\n|---|---|---|---|\n";
    for (const auto& d : distractors) {
      out += "| " + d.item_id + " | " + d.answer_class + " | " + std::to_string(d.count) +
             " | " + (d.has_feedback ? "yes" : "no") + " |\n";
    }
    out += "\n";
  }
  return out;
}

std::string stats_to_json(const CohortStats& stats) {
  json j;
  j["proof_id"] = stats.proof_id;
  j["bank_version"] = stats.bank_version;
  j["records"] = stats.total_records;
  j["items"] = json::array();
  for (const auto& item : stats.items) {
    json ji;
    ji["item_id"] = item.item_id;
    ji["response_type"] = response_type_name(item.response_type);
    ji["attempts"] = item.attempts;
    ji["respondents"] = item.respondents;
    ji["correct"] = item.correct;
    ji["incorrect"] = item.incorrect;
    ji["invalid"] = item.invalid;
    ji["blank"] = item.blank;
    ji["mean_score"] = item.mean_score;
    ji["correct_pct_attempts"] = format_percent(item.correct, item.attempts);
    ji["correct_pct_respondents"] = format_percent(item.correct, item.respondents);
    ji["classes"] = json::array();
    for (const auto& cls : item.classes) {
      ji["classes"].push_back({{"class", cls.answer_class},
                               {"count", cls.count},
                               {"pct_attempts", format_percent(cls.count, item.attempts)},
                               {"pct_respondents",
                                format_percent(cls.count, item.respondents)},
                               {"has_feedback", cls.has_feedback}});
    }
    if (!item.options.empty()) {
      ji["options"] = json::array();
      for (const auto& os : item.options) {
        ji["options"].push_back(
            {{"id", os.option_id},
             {"key", os.is_key},
             {"selected_total", os.selected_total},
             {"selected_total_pct_attempts",
              format_percent(os.selected_total, item.attempts)},
             {"selected_incorrect", os.selected_incorrect},
             {"selected_incorrect_pct_attempts",
              format_percent(os.selected_incorrect, item.attempts)},
             {"not_selected_incorrect", os.not_selected_incorrect},
             {"not_selected_incorrect_pct_attempts",
              format_percent(os.not_selected_incorrect, item.attempts)}});
      }
    }
    j["items"].push_back(std::move(ji));
  }
  auto distractors = distractor_report(stats);
  j["distractors"] = json::array();
  for (const auto& d : distractors) {
    j["distractors"].push_back({{"item_id", d.item_id},
                                {"class", d.answer_class},
                                {"count", d.count},
                                {"has_feedback", d.has_feedback}});
  }
  return j.dump(2) + "\n";
}

} // namespace proofcomp
