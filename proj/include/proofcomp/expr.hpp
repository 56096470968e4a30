#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace proofcomp {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

enum class ExprKind { Integer, Variable, Add, Mul, Neg, Div, Pow, Sum, FunctionApp };

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Immutable expression node.  Trees are normalized on construction:
// Add/Mul are n-ary, flattened, and operand-sorted under a fixed structural
// order; Neg(Neg(x)) collapses and Neg(integer) folds into the literal.
// Nothing else is simplified here, so structurally distinct but equal forms
// (e.g. (k+1)+1 vs k+2) stay distinct -- that distinction is what
// matches_form() tests, while equivalent() works modulo algebra.
class Expr {
public:
  ExprKind kind;
  BigInt value;              // Integer
  std::string name;          // Variable / FunctionApp name / Sum index
  long long exponent = 0;    // Pow (concrete integer exponent only)
  std::vector<ExprPtr> args; // Add/Mul operands; Neg{x}; Div{num,den};
                             // Pow{base}; Sum{body,lower,upper}; FunctionApp args

  static ExprPtr integer(BigInt v);
  static ExprPtr integer(long long v);
  static ExprPtr variable(std::string name);
  static ExprPtr add(std::vector<ExprPtr> operands);
  static ExprPtr mul(std::vector<ExprPtr> operands);
  static ExprPtr neg(ExprPtr x);
  static ExprPtr div(ExprPtr num, ExprPtr den);
  static ExprPtr pow(ExprPtr base, long long exponent);
  static ExprPtr sum(ExprPtr body, std::string index, ExprPtr lower, ExprPtr upper);
  static ExprPtr func(std::string name, std::vector<ExprPtr> args);
};

// Total structural order used for canonical operand sorting; returns <0, 0, >0.
int compare(const ExprPtr& a, const ExprPtr& b);
bool equal(const ExprPtr& a, const ExprPtr& b);

struct Equation {
  ExprPtr lhs;
  ExprPtr rhs;
};
bool equal(const Equation& a, const Equation& b);

using Answer = std::variant<ExprPtr, Equation>;

// Parse failure; pos is a 0-based byte offset into the input line.
struct ParseError : std::runtime_error {
  size_t pos;
  std::vector<std::string> expected;
  ParseError(const std::string& msg, size_t pos, std::vector<std::string> expected = {});
};

// expand_sum met a bound that does not evaluate to a concrete integer.
struct NonConcreteBound : std::runtime_error {
  explicit NonConcreteBound(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when evaluation/expansion hits an undefined operation
// (division by zero in a ground term, or an absurdly large expansion).
struct EvalError : std::runtime_error {
  explicit EvalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Linear syntax: + - * / ^, parentheses, name(args...), sum(body,k,lo,hi).
// Multiplication is always explicit; '^' takes a concrete integer exponent.
ExprPtr parse_expr(const std::string& text);
Equation parse_equation(const std::string& text);
Answer parse_answer(const std::string& text); // Equation iff the text contains '='

std::string render(const ExprPtr& e);
std::string render(const Equation& eq);

// Capture-avoiding substitution: a Sum index shadows the variable inside the
// body; the index is renamed if the replacement would capture it.
ExprPtr substitute(const ExprPtr& e, const std::string& var, const ExprPtr& value);

std::set<std::string> free_vars(const ExprPtr& e);
bool contains_sum(const ExprPtr& e);

// Replace every Sum whose bounds evaluate to concrete integers with the
// explicit sum of instantiated terms (ground terms are constant-folded, so
// sum(k^2,k,1,3) becomes 1+4+9).  An empty range (upper < lower) yields 0.
ExprPtr expand_sum(const ExprPtr& e);

// Variables that appear free inside some Sum's lower/upper bound.
std::set<std::string> sum_bound_free_vars(const ExprPtr& e);

// Exact evaluation of a ground (variable/function/sum free) expression.
BigRat eval_ground(const ExprPtr& e);

} // namespace proofcomp
