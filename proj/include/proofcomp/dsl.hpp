#pragma once

#include "proofcomp/proof.hpp"

namespace proofcomp {

// omit_warrant() was asked to hide a warrant that is not there (or was
// already hidden).
struct NoWarrantPresent : std::runtime_error {
  explicit NoWarrantPresent(const std::string& msg) : std::runtime_error(msg) {}
};

// Parse a proof document (format reference: docs/dsl.md).  Throws ParseError
// for malformed syntax -- its pos field carries the 1-based line number --
// and ReferenceError when an id or statement reference does not resolve.
Proof parse_proof(const std::string& document);

enum class RenderStyle { Plain, Structured };

// Canonical document text: parse_proof(render_numbered(p)) reproduces p,
// annotations included.  Structured style additionally writes a comment
// banner above each statement that opens a structure span.
std::string render_numbered(const Proof& proof, RenderStyle style = RenderStyle::Plain);

// Student-facing text: theorem header and the numbered statements only, with
// annotations dropped and backticks stripped.
std::string render_display(const Proof& proof);

// Copy of the proof with statement n's warrant and backing moved into the
// hidden omitted slots -- the fading primitive.  Throws NoWarrantPresent if
// the statement has nothing visible to hide (including when it was already
// applied), and ReferenceError for an unknown statement number.
Proof omit_warrant(const Proof& proof, int statement_number);

} // namespace proofcomp
