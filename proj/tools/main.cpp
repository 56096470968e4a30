// Command-line front end.  Everything goes through the C API in proofcomp.h;
// this file never touches the C++ core directly.
#include "proofcomp.h"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

using nlohmann::json;

namespace {

// Fatal condition: `code` becomes the exit status, `message_json` goes to
// stderr.  pc_* failures already carry JSON; local failures synthesize it.
struct Fail {
  int code;
  std::string message_json;
};

const char* kind_of(int code) {
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

[[noreturn]] void fail(int code, const std::string& message) {
  json j = {{"code", code}, {"kind", kind_of(code)}, {"message", message}};
  throw Fail{code, j.dump()};
}

// Owns a char* handed out by the library.
struct CStr {
  char* ptr = nullptr;
  ~CStr() { pc_string_free(ptr); }
  std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

void check(pc_status status, CStr& err) {
  if (status == PC_OK) return;
  std::string message = err.ptr
      ? err.str()
      : json{{"code", (int)status}, {"kind", kind_of(status)}, {"message", ""}}.dump();
  throw Fail{static_cast<int>(status), message};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) fail(PC_ERR_IO, "cannot read '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Writes to stdout when path is empty, otherwise atomically via temp+rename
// so a crash never leaves a half-written file behind.
void write_out(const std::string& content, const std::string& path) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out.good()) fail(PC_ERR_IO, "cannot write '" + tmp + "'");
    out << content;
    if (!out.good()) fail(PC_ERR_IO, "failed writing '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    fail(PC_ERR_IO, "cannot rename '" + tmp + "' to '" + path + "'");
  }
}

struct ProofHandle {
  pc_proof* ptr = nullptr;
  ~ProofHandle() { pc_proof_free(ptr); }
};
struct BankHandle {
  pc_bank* ptr = nullptr;
  ~BankHandle() { pc_bank_free(ptr); }
};

ProofHandle load_proof(const std::string& path) {
  std::string dsl = slurp(path);
  ProofHandle proof;
  CStr err;
  check(pc_proof_parse(dsl.c_str(), &proof.ptr, &err.ptr), err);
  return proof;
}

BankHandle load_bank(const std::string& path) {
  std::string text = slurp(path);
  BankHandle bank;
  CStr err;
  check(pc_bank_from_json(text.c_str(), &bank.ptr, &err.ptr), err);
  return bank;
}

// csv/jsonl from the file extension unless --format said otherwise.
std::string log_format(const std::string& explicit_format, const std::string& path) {
  if (!explicit_format.empty()) return explicit_format;
  if (path.size() >= 6 && path.compare(path.size() - 6, 6, ".jsonl") == 0)
    return "jsonl";
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) return "csv";
  fail(PC_ERR_USAGE,
       "cannot infer the log format from '" + path + "'; pass --format csv|jsonl");
}

// Seed priority: PROOFCOMP_SEED env, then --seed, then the config file.
std::string apply_seed(std::string config_text, std::optional<uint64_t> seed_flag) {
  std::optional<uint64_t> seed = seed_flag;
  if (const char* env = std::getenv("PROOFCOMP_SEED")) {
    try {
      size_t used = 0;
      unsigned long long v = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
      seed = v;
    } catch (const std::exception&) {
      fail(PC_ERR_USAGE, std::string("PROOFCOMP_SEED is not an integer: '") + env + "'");
    }
  }
  if (!seed) return config_text;
  json cfg;
  try {
    cfg = json::parse(config_text);
  } catch (const json::exception& e) {
    fail(PC_ERR_PARSE, std::string("config: ") + e.what());
  }
  if (!cfg.is_object()) fail(PC_ERR_PARSE, "config: top level must be an object");
  cfg["seed"] = *seed;
  return cfg.dump();
}

int run(int argc, char** argv) {
  CLI::App app{"Encode annotated proofs, generate comprehension questions, "
               "grade responses, and summarize cohorts."};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pc_version()));

  std::string proof_path, bank_path, config_path, log_path, spec_path;
  std::string out_path, skips_path, format, out_format = "markdown";
  std::string what = "display", item_id, answer, answer_class, feedback_text;
  std::optional<uint64_t> seed;
  bool as_markdown = false;

  auto* validate = app.add_subcommand(
      "validate", "Parse a proof document and print its validation report");
  validate->add_option("proof", proof_path, "proof document")->required();
  validate->add_option("-o,--output", out_path, "write the report here");

  auto* exp = app.add_subcommand("export", "Render a proof document");
  exp->add_option("proof", proof_path, "proof document")->required();
  exp->add_option("--what", what, "plain|structured|display|outline|usage")
      ->check(CLI::IsMember({"plain", "structured", "display", "outline", "usage"}));
  exp->add_option("-o,--output", out_path, "write the rendering here");

  auto* gen = app.add_subcommand(
      "generate", "Generate a question bank from a proof and a config");
  gen->add_option("proof", proof_path, "proof document")->required();
  gen->add_option("-c,--config", config_path, "generation config (JSON)");
  gen->add_option("--seed", seed, "override the config seed");
  gen->add_flag("--markdown", as_markdown, "emit review markdown instead of JSON");
  gen->add_option("--skips", skips_path, "write the skip log (JSON) here");
  gen->add_option("-o,--output", out_path, "write the bank here");

  auto* fade = app.add_subcommand(
      "fade", "Produce a fading sequence from a worked-example spec");
  fade->add_option("spec", spec_path, "fade spec (JSON)")->required();
  fade->add_option("-o,--output", out_path, "write the sequence here");

  auto* grade = app.add_subcommand("grade", "Grade one answer or a response log");
  grade->add_option("bank", bank_path, "question bank (JSON)")->required();
  auto* log_opt = grade->add_option("--log", log_path, "response log (csv/jsonl)");
  grade->add_option("--format", format, "log format: csv|jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  auto* item_opt =
      grade->add_option("--item", item_id, "grade a single item id")->excludes(log_opt);
  grade->add_option("--answer", answer, "answer text for --item")->needs(item_opt);
  grade->add_option("-o,--output", out_path, "write results here");

  auto* analyze = app.add_subcommand(
      "analyze", "Grade a response log and print cohort statistics");
  analyze->add_option("bank", bank_path, "question bank (JSON)")->required();
  analyze->add_option("--log", log_path, "response log (csv/jsonl)")->required();
  analyze->add_option("--format", format, "log format: csv|jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  analyze->add_option("--out-format", out_format, "json|markdown")
      ->check(CLI::IsMember({"json", "markdown"}));
  analyze->add_option("-o,--output", out_path, "write the report here");

  auto* feedback = app.add_subcommand(
      "feedback", "Attach feedback to an answer class (bumps the bank version)");
  feedback->add_option("bank", bank_path, "question bank (JSON)")->required();
  feedback->add_option("--item", item_id, "item id")->required();
  feedback->add_option("--class", answer_class, "answer class")->required();
  feedback->add_option("--text", feedback_text, "feedback text")->required();
  feedback->add_option("-o,--output", out_path,
                       "write the updated bank here (default: in place)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e); // prints help text or the flag error
    return rc == 0 ? 0 : PC_ERR_USAGE;
  }

  if (*validate) {
    ProofHandle proof = load_proof(proof_path);
    CStr report, err;
    check(pc_proof_validate(proof.ptr, &report.ptr, &err.ptr), err);
    write_out(report.str(), out_path);
  } else if (*exp) {
    ProofHandle proof = load_proof(proof_path);
    CStr out, err;
    if (what == "display")
      check(pc_proof_render_display(proof.ptr, &out.ptr, &err.ptr), err);
    else if (what == "outline")
      check(pc_proof_outline(proof.ptr, &out.ptr, &err.ptr), err);
    else if (what == "usage")
      check(pc_proof_hypothesis_usage(proof.ptr, &out.ptr, &err.ptr), err);
    else
      check(pc_proof_render(proof.ptr, what == "structured" ? 1 : 0, &out.ptr, &err.ptr),
            err);
    std::string text = out.str();
    if (!text.empty() && text.back() != '\n') text += '\n';
    write_out(text, out_path);
  } else if (*gen) {
    ProofHandle proof = load_proof(proof_path);
    std::string cfg = config_path.empty() ? std::string("{}") : slurp(config_path);
    cfg = apply_seed(std::move(cfg), seed);
    BankHandle bank;
    CStr skips, err;
    check(pc_generate(proof.ptr, cfg.c_str(), &bank.ptr, &skips.ptr, &err.ptr), err);
    if (!skips_path.empty()) write_out(skips.str(), skips_path);
    CStr out;
    CStr err2;
    if (as_markdown)
      check(pc_bank_to_markdown(bank.ptr, &out.ptr, &err2.ptr), err2);
    else
      check(pc_bank_to_json(bank.ptr, &out.ptr, &err2.ptr), err2);
    write_out(out.str(), out_path);
  } else if (*fade) {
    std::string spec = slurp(spec_path);
    CStr out, err;
    check(pc_fade(spec.c_str(), &out.ptr, &err.ptr), err);
    write_out(out.str(), out_path);
  } else if (*grade) {
    BankHandle bank = load_bank(bank_path);
    CStr out, err;
    if (item_opt->count()) {
      check(pc_grade(bank.ptr, item_id.c_str(), answer.c_str(), &out.ptr, &err.ptr),
            err);
    } else if (log_opt->count()) {
      std::string log_text = slurp(log_path);
      std::string fmt = log_format(format, log_path);
      check(pc_grade_log(bank.ptr, log_text.c_str(), fmt.c_str(), &out.ptr, &err.ptr),
            err);
    } else {
      fail(PC_ERR_USAGE, "grade needs either --log or --item/--answer");
    }
    write_out(out.str(), out_path);
  } else if (*analyze) {
    BankHandle bank = load_bank(bank_path);
    std::string log_text = slurp(log_path);
    std::string fmt = log_format(format, log_path);
    CStr out, err;
    check(pc_analyze(bank.ptr, log_text.c_str(), fmt.c_str(), out_format.c_str(),
                     &out.ptr, &err.ptr),
          err);
    write_out(out.str(), out_path);
  } else if (*feedback) {
    BankHandle bank = load_bank(bank_path);
    CStr err;
    check(pc_bank_add_feedback(bank.ptr, item_id.c_str(), answer_class.c_str(),
                               feedback_text.c_str(), &err.ptr),
          err);
    CStr out, err2;
    check(pc_bank_to_json(bank.ptr, &out.ptr, &err2.ptr), err2);
    write_out(out.str(), out_path.empty() ? bank_path : out_path);
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Fail& f) {
    std::cerr << f.message_json << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << json{{"code", (int)PC_ERR_INTERNAL},
                      {"kind", "internal"},
                      {"message", e.what()}}
                     .dump()
              << "\n";
    return PC_ERR_INTERNAL;
  }
}
