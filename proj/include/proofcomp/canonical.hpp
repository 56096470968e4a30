#pragma once

#include "proofcomp/expr.hpp"

namespace proofcomp {

// The equivalence decision could not be made: a denominator is identically
// zero, a sum cannot be brought to concrete bounds, or the problem blows past
// the engine's size limits.  Callers treat this as "cannot grade", never as
// "wrong answer".
struct UndecidableError : std::runtime_error {
  explicit UndecidableError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidRewriteRule : std::runtime_error {
  explicit InvalidRewriteRule(const std::string& msg) : std::runtime_error(msg) {}
};

// Ground function-power rewrite: pattern is f(args...) or f(args...)^m with
// variable-free args, replacement is an integer-coefficient polynomial whose
// degree in f(args...) is < m (so rewriting terminates).  Example:
// sqrt(-1)^2 ~> -1.
struct RewriteRule {
  std::string id;
  ExprPtr pattern;
  ExprPtr replacement;
};

// Algebraic equivalence as rational functions: both sides are canonicalized
// to polynomial fractions over shared atoms (variables and function
// applications keyed by canonicalized arguments) and compared by
// cross-multiplication.  Concrete-bound sums are expanded exactly; a sum
// whose bounds contain free variables is decided by instantiating those
// variables (at most 3) jointly at 1..6 and comparing every instance --
// exact for closed forms of degree <= 5 per instantiated variable.
bool equivalent(const ExprPtr& a, const ExprPtr& b,
                const std::vector<RewriteRule>& rules = {});

// Equations are equivalent when their sides match pairwise (either
// orientation): "lhs = rhs" and "rhs = lhs" state the same identity, but a
// rearrangement like "lhs - rhs = 0" does not count.
bool equivalent(const Equation& a, const Equation& b,
                const std::vector<RewriteRule>& rules = {});

// Structural identity modulo construction-time normalization only: this is
// the strict "written in exactly this form" test, so (k+1)+1 does not match
// k+2 even though the two are equivalent.
bool matches_form(const ExprPtr& a, const ExprPtr& b);
bool matches_form(const Equation& a, const Equation& b);

} // namespace proofcomp
