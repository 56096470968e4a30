#pragma once

#include "proofcomp/expr.hpp" // ParseError

#include <memory>
#include <string>
#include <vector>

namespace proofcomp {

enum class LogicKind { Atom, Not, And, Or, Implies, Iff, ForAll, Exists };

class LogicNode;
using LogicPtr = std::shared_ptr<const LogicNode>;

// Immutable propositional/quantified statement.  And/Or are n-ary and
// flattened (operand order is preserved -- statements read in the order they
// were written); Not(Not(x)) collapses at construction.
class LogicNode {
public:
  LogicKind kind;
  std::string label; // Atom label, or quantifier variable
  std::string text;  // optional human-readable reading of an Atom
  std::vector<LogicPtr> args;

  static LogicPtr atom(std::string label, std::string text = "");
  static LogicPtr negation(LogicPtr x);
  static LogicPtr conj(std::vector<LogicPtr> xs);
  static LogicPtr disj(std::vector<LogicPtr> xs);
  static LogicPtr implies(LogicPtr a, LogicPtr b);
  static LogicPtr iff(LogicPtr a, LogicPtr b);
  static LogicPtr forall(std::string var, LogicPtr body);
  static LogicPtr exists(std::string var, LogicPtr body);
};

bool equal(const LogicPtr& a, const LogicPtr& b);

struct NotAnImplication : std::runtime_error {
  explicit NotAnImplication(const std::string& msg) : std::runtime_error(msg) {}
};

// Negation pushed all the way inward: quantifiers flip, De Morgan applies,
// "not (A implies B)" becomes "A and not B", and "not (A iff B)" becomes
// "(A and not B) or (not A and B)".  Only atoms end up under a Not.
LogicPtr negate(const LogicPtr& s);

// Both require an Implies at the top level.
LogicPtr contrapositive(const LogicPtr& s); // if A then B  ~~>  if not B then not A
LogicPtr converse(const LogicPtr& s);       // if A then B  ~~>  if B then A

// Prefix serialization: implies(and(bounded,increasing),convergent).
// Atoms serialize as a bare label, or atom(label,"reading") when they carry
// display text.  parse_logic accepts exactly this grammar.
std::string to_text(const LogicPtr& s);
LogicPtr parse_logic(const std::string& text);

// Readable rendering for question stems/options: atoms print their display
// text (falling back to the label), connectives print as English.
std::string pretty(const LogicPtr& s);

} // namespace proofcomp
