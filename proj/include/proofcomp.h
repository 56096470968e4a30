#ifndef PROOFCOMP_H
#define PROOFCOMP_H

/*
 * C interface to the proof-comprehension toolkit.
 *
 * Conventions:
 *   - Every function that can fail returns a pc_status and takes a trailing
 *     `char** err`.  On failure the status names the category and, when err
 *     is non-NULL, *err receives a malloc'd JSON object
 *     {"code":N,"kind":"parse","message":"..."} describing the problem.
 *   - Strings handed out by the library (*out, *err) are malloc'd; release
 *     them with pc_string_free.  Handles have their own _free functions.
 *   - All text is UTF-8.  NULL is never a valid handle or required argument.
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pc_status {
  PC_OK = 0,
  PC_ERR_USAGE = 1,       /* bad arguments or misused handle */
  PC_ERR_PARSE = 2,       /* malformed document, expression, config, or log */
  PC_ERR_REFERENCE = 3,   /* names something that does not exist */
  PC_ERR_IO = 4,          /* reserved for callers doing file I/O */
  PC_ERR_UNDECIDABLE = 5, /* equivalence could not be decided */
  PC_ERR_STATE = 6,       /* operation impossible in the current state */
  PC_ERR_INTERNAL = 7
} pc_status;

typedef struct pc_proof pc_proof; /* a parsed, annotated proof document */
typedef struct pc_bank pc_bank;   /* a generated question bank */
typedef struct pc_expr pc_expr;   /* an expression or an equation */

/* Library semantic version, static storage; do not free. */
const char* pc_version(void);

/* Frees any string the library returned through a char** out-parameter. */
void pc_string_free(char* s);

/* --------------------------------------------------------------- proofs */

pc_status pc_proof_parse(const char* dsl_text, pc_proof** out, char** err);
void pc_proof_free(pc_proof* proof);

/* Annotation-quality findings as a JSON array of
 * {"code","message","statement"}; an empty array means a clean proof. */
pc_status pc_proof_validate(const pc_proof* proof, char** report_json, char** err);

/* Canonical numbered document; structured=1 adds structure banners. */
pc_status pc_proof_render(const pc_proof* proof, int structured, char** out, char** err);

/* Reader-facing prose rendering (annotations and math markers stripped). */
pc_status pc_proof_render_display(const pc_proof* proof, char** out, char** err);

/* Indented structure outline, one node per line. */
pc_status pc_proof_outline(const pc_proof* proof, char** out, char** err);

/* JSON object: hypothesis atom -> array of statement numbers using it. */
pc_status pc_proof_hypothesis_usage(const pc_proof* proof, char** json, char** err);

/* Hides the visible warrant/backing of one statement (for faded variants).
 * PC_ERR_STATE when the statement has nothing visible to hide. */
pc_status pc_proof_omit_warrant(pc_proof* proof, int statement, char** err);

/* ----------------------------------------------------------- generation */

/* Generates a question bank.  config_json uses the documented generation
 * config format ("{}" for defaults).  When skips_json is non-NULL it
 * receives a JSON array of {"checklist_item","template_id","reason"} for
 * checklist entries that produced no items. */
pc_status pc_generate(const pc_proof* proof, const char* config_json, pc_bank** out,
                      char** skips_json, char** err);

pc_status pc_bank_from_json(const char* json_text, pc_bank** out, char** err);
pc_status pc_bank_to_json(const pc_bank* bank, char** out, char** err);
pc_status pc_bank_to_markdown(const pc_bank* bank, char** out, char** err);
void pc_bank_free(pc_bank* bank);

/* -------------------------------------------------------------- grading */

/* Grades one answer; result_json holds {"item_id","response_type","graded",
 * "score","class","flags","feedback","bank_version","selected"}. */
pc_status pc_grade(const pc_bank* bank, const char* item_id, const char* answer,
                   char** result_json, char** err);

/* Grades a whole response log ("csv" or "jsonl"); results_json holds an
 * array of records, each the pc_grade object plus student_id/timestamp. */
pc_status pc_grade_log(const pc_bank* bank, const char* log_text, const char* format,
                       char** results_json, char** err);

/* Attaches feedback for an answer class and bumps the bank version. */
pc_status pc_bank_add_feedback(pc_bank* bank, const char* item_id,
                               const char* answer_class, const char* text, char** err);

/* ------------------------------------------------------------ analytics */

/* Parses a response log, grades it, and aggregates cohort statistics.
 * format is "csv" or "jsonl"; out_format is "json" or "markdown". */
pc_status pc_analyze(const pc_bank* bank, const char* log_text, const char* format,
                     const char* out_format, char** out, char** err);

/* ---------------------------------------------------------- expressions */

/* Parses an expression, or an equation when the text contains '='. */
pc_status pc_expr_parse(const char* text, pc_expr** out, char** err);
void pc_expr_free(pc_expr* expr);

pc_status pc_expr_render(const pc_expr* expr, char** out, char** err);

/* Mathematical equivalence (1) or inequivalence (0).  Comparing an equation
 * with a bare expression is PC_ERR_USAGE; PC_ERR_UNDECIDABLE when the
 * engine cannot decide. */
pc_status pc_expr_equivalent(const pc_expr* a, const pc_expr* b, int* out, char** err);

/* Structural identity up to canonical ordering; same kind rule as above. */
pc_status pc_expr_matches_form(const pc_expr* a, const pc_expr* b, int* out, char** err);

/* Substitutes value for every free occurrence of var. */
pc_status pc_expr_substitute(const pc_expr* expr, const char* var, const pc_expr* value,
                             pc_expr** out, char** err);

/* Unrolls concrete-bound sums; PC_ERR_STATE if a bound is not concrete. */
pc_status pc_expr_expand_sum(const pc_expr* expr, pc_expr** out, char** err);

/* --------------------------------------------------------------- fading */

/* spec_json: {"problem": "...", "steps": [{"prose": "...", "math": "..."}],
 * and either "levels": N (backward fading) or "schedule": [[...], ...]
 * (custom fading; each array lists the 0-based hidden step indices)}.
 * out_json: array of {"fade_level","strategy","problem","steps":[{"prose",
 * "math","hidden"}]}. */
pc_status pc_fade(const char* spec_json, char** out_json, char** err);

#ifdef __cplusplus
}
#endif

#endif /* PROOFCOMP_H */
