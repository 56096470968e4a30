#include "proofcomp/expr.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace proofcomp {

namespace {

int kind_rank(ExprKind k) {
  switch (k) {
    case ExprKind::Integer: return 0;
    case ExprKind::Variable: return 1;
    case ExprKind::FunctionApp: return 2;
    case ExprKind::Pow: return 3;
    case ExprKind::Neg: return 4;
    case ExprKind::Mul: return 5;
    case ExprKind::Add: return 6;
    case ExprKind::Div: return 7;
    case ExprKind::Sum: return 8;
  }
  return 9;
}

std::shared_ptr<Expr> make_node(ExprKind k) {
  auto n = std::make_shared<Expr>();
  n->kind = k;
  return n;
}

} // namespace

int compare(const ExprPtr& a, const ExprPtr& b) {
  if (a.get() == b.get()) return 0;
  int ra = kind_rank(a->kind), rb = kind_rank(b->kind);
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (a->kind) {
    case ExprKind::Integer:
      if (a->value == b->value) return 0;
      return a->value < b->value ? -1 : 1;
    case ExprKind::Variable:
      return a->name.compare(b->name);
    case ExprKind::Pow: {
      int c = compare(a->args[0], b->args[0]);
      if (c != 0) return c;
      if (a->exponent == b->exponent) return 0;
      return a->exponent < b->exponent ? -1 : 1;
    }
    default: {
      int c = a->name.compare(b->name);
      if (c != 0) return c;
      if (a->args.size() != b->args.size())
        return a->args.size() < b->args.size() ? -1 : 1;
      for (size_t i = 0; i < a->args.size(); ++i) {
        c = compare(a->args[i], b->args[i]);
        if (c != 0) return c;
      }
      return 0;
    }
  }
}

bool equal(const ExprPtr& a, const ExprPtr& b) { return compare(a, b) == 0; }

bool equal(const Equation& a, const Equation& b) {
  return equal(a.lhs, b.lhs) && equal(a.rhs, b.rhs);
}

ExprPtr Expr::integer(BigInt v) {
  auto n = make_node(ExprKind::Integer);
  n->value = std::move(v);
  return n;
}

ExprPtr Expr::integer(long long v) { return integer(BigInt(v)); }

ExprPtr Expr::variable(std::string name) {
  auto n = make_node(ExprKind::Variable);
  n->name = std::move(name);
  return n;
}

static std::vector<ExprPtr> flatten(ExprKind k, std::vector<ExprPtr> operands) {
  std::vector<ExprPtr> out;
  for (auto& op : operands) {
    if (op->kind == k)
      out.insert(out.end(), op->args.begin(), op->args.end());
    else
      out.push_back(std::move(op));
  }
  return out;
}

ExprPtr Expr::add(std::vector<ExprPtr> operands) {
  auto ops = flatten(ExprKind::Add, std::move(operands));
  if (ops.empty()) return integer(0);
  if (ops.size() == 1) return ops[0];
  std::stable_sort(ops.begin(), ops.end(),
                   [](const ExprPtr& a, const ExprPtr& b) { return compare(a, b) < 0; });
  auto n = make_node(ExprKind::Add);
  n->args = std::move(ops);
  return n;
}

ExprPtr Expr::mul(std::vector<ExprPtr> operands) {
  auto ops = flatten(ExprKind::Mul, std::move(operands));
  if (ops.empty()) return integer(1);
  if (ops.size() == 1) return ops[0];
  std::stable_sort(ops.begin(), ops.end(),
                   [](const ExprPtr& a, const ExprPtr& b) { return compare(a, b) < 0; });
  auto n = make_node(ExprKind::Mul);
  n->args = std::move(ops);
  return n;
}

ExprPtr Expr::neg(ExprPtr x) {
  if (x->kind == ExprKind::Neg) return x->args[0];
  if (x->kind == ExprKind::Integer) return integer(-x->value);
  auto n = make_node(ExprKind::Neg);
  n->args = {std::move(x)};
  return n;
}

ExprPtr Expr::div(ExprPtr num, ExprPtr den) {
  auto n = make_node(ExprKind::Div);
  n->args = {std::move(num), std::move(den)};
  return n;
}

ExprPtr Expr::pow(ExprPtr base, long long exponent) {
  auto n = make_node(ExprKind::Pow);
  n->args = {std::move(base)};
  n->exponent = exponent;
  return n;
}

ExprPtr Expr::sum(ExprPtr body, std::string index, ExprPtr lower, ExprPtr upper) {
  auto n = make_node(ExprKind::Sum);
  n->name = std::move(index);
  n->args = {std::move(body), std::move(lower), std::move(upper)};
  return n;
}

ExprPtr Expr::func(std::string name, std::vector<ExprPtr> args) {
  auto n = make_node(ExprKind::FunctionApp);
  n->name = std::move(name);
  n->args = std::move(args);
  return n;
}

// ------------------------------------------------------------- parsing ---

ParseError::ParseError(const std::string& msg, size_t pos_, std::vector<std::string> expected_)
    : std::runtime_error(msg + " (at position " + std::to_string(pos_) + ")"),
      pos(pos_),
      expected(std::move(expected_)) {}

namespace {

constexpr long long kMaxExponent = 512;
constexpr long long kMaxSumTerms = 65536;

struct Token {
  enum Type { Int, Name, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, Equals, End };
  Type type;
  std::string text;
  size_t pos;
};

class Lexer {
public:
  explicit Lexer(const std::string& src) : src_(src) { next(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    next();
    return t;
  }

private:
  void next() {
    while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
    size_t start = i_;
    if (i_ >= src_.size()) {
      tok_ = {Token::End, "", start};
      return;
    }
    char c = src_[i_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i_;
      while (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) ++j;
      tok_ = {Token::Int, src_.substr(i_, j - i_), start};
      i_ = j;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i_;
      while (j < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_'))
        ++j;
      tok_ = {Token::Name, src_.substr(i_, j - i_), start};
      i_ = j;
      return;
    }
    Token::Type t;
    switch (c) {
      case '+': t = Token::Plus; break;
      case '-': t = Token::Minus; break;
      case '*': t = Token::Star; break;
      case '/': t = Token::Slash; break;
      case '^': t = Token::Caret; break;
      case '(': t = Token::LParen; break;
      case ')': t = Token::RParen; break;
      case ',': t = Token::Comma; break;
      case '=': t = Token::Equals; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", start);
    }
    tok_ = {t, std::string(1, c), start};
    ++i_;
  }

  const std::string& src_;
  size_t i_ = 0;
  Token tok_{Token::End, "", 0};
};

class Parser {
public:
  explicit Parser(const std::string& src) : lex_(src) {}

  ExprPtr parse_full_expr() {
    ExprPtr e = expr();
    expect_end();
    return e;
  }

  Equation parse_full_equation() {
    ExprPtr lhs = expr();
    if (lex_.peek().type != Token::Equals)
      throw ParseError("expected '='", lex_.peek().pos, {"="});
    lex_.take();
    ExprPtr rhs = expr();
    expect_end();
    return Equation{lhs, rhs};
  }

  Answer parse_full_answer() {
    ExprPtr lhs = expr();
    if (lex_.peek().type == Token::Equals) {
      lex_.take();
      ExprPtr rhs = expr();
      expect_end();
      return Equation{lhs, rhs};
    }
    expect_end();
    return lhs;
  }

private:
  void expect_end() {
    const Token& t = lex_.peek();
    if (t.type != Token::End)
      throw ParseError("unexpected trailing input '" + t.text + "'", t.pos, {"end of input"});
  }

  ExprPtr expr() {
    std::vector<ExprPtr> ops;
    ops.push_back(term());
    while (true) {
      Token::Type t = lex_.peek().type;
      if (t == Token::Plus) {
        lex_.take();
        ops.push_back(term());
      } else if (t == Token::Minus) {
        lex_.take();
        ops.push_back(Expr::neg(term()));
      } else {
        break;
      }
    }
    return Expr::add(std::move(ops));
  }

  ExprPtr term() {
    ExprPtr left = factor();
    std::vector<ExprPtr> product{left};
    while (true) {
      Token::Type t = lex_.peek().type;
      if (t == Token::Star) {
        lex_.take();
        product.push_back(factor());
      } else if (t == Token::Slash) {
        lex_.take();
        ExprPtr den = factor();
        ExprPtr num = Expr::mul(std::move(product));
        product = {Expr::div(num, den)};
      } else {
        break;
      }
    }
    return Expr::mul(std::move(product));
  }

  ExprPtr factor() {
    if (lex_.peek().type == Token::Minus) {
      lex_.take();
      return Expr::neg(factor());
    }
    return power();
  }

  ExprPtr power() {
    ExprPtr base = primary();
    if (lex_.peek().type == Token::Caret) {
      lex_.take();
      long long e = exponent();
      return Expr::pow(base, e);
    }
    return base;
  }

  long long exponent() {
    bool parens = false;
    if (lex_.peek().type == Token::LParen) {
      parens = true;
      lex_.take();
    }
    bool negative = false;
    if (lex_.peek().type == Token::Minus) {
      negative = true;
      lex_.take();
    }
    const Token t = lex_.peek();
    if (t.type != Token::Int)
      throw ParseError("exponent must be a concrete integer", t.pos, {"integer"});
    lex_.take();
    long long v = 0;
    for (char c : t.text) {
      v = v * 10 + (c - '0');
      if (v > kMaxExponent)
        throw ParseError("exponent too large (limit " + std::to_string(kMaxExponent) + ")", t.pos);
    }
    if (parens) {
      if (lex_.peek().type != Token::RParen)
        throw ParseError("expected ')'", lex_.peek().pos, {")"});
      lex_.take();
    }
    return negative ? -v : v;
  }

  ExprPtr primary() {
    const Token t = lex_.peek();
    switch (t.type) {
      case Token::Int: {
        lex_.take();
        return Expr::integer(BigInt(t.text));
      }
      case Token::Name: {
        lex_.take();
        if (lex_.peek().type != Token::LParen) return Expr::variable(t.text);
        lex_.take();
        std::vector<ExprPtr> args;
        if (lex_.peek().type != Token::RParen) {
          args.push_back(expr());
          while (lex_.peek().type == Token::Comma) {
            lex_.take();
            args.push_back(expr());
          }
        }
        if (lex_.peek().type != Token::RParen)
          throw ParseError("expected ')' or ','", lex_.peek().pos, {")", ","});
        lex_.take();
        if (t.text == "sum") return make_sum(std::move(args), t.pos);
        if (args.empty())
          throw ParseError("function '" + t.text + "' needs at least one argument", t.pos);
        return Expr::func(t.text, std::move(args));
      }
      case Token::LParen: {
        lex_.take();
        ExprPtr e = expr();
        if (lex_.peek().type != Token::RParen)
          throw ParseError("expected ')'", lex_.peek().pos, {")"});
        lex_.take();
        return e;
      }
      default:
        throw ParseError("expected a number, name, or '('", t.pos, {"integer", "name", "("});
    }
  }

  ExprPtr make_sum(std::vector<ExprPtr> args, size_t pos) {
    if (args.size() != 4)
      throw ParseError("sum takes exactly 4 arguments: sum(body, index, lower, upper)", pos);
    if (args[1]->kind != ExprKind::Variable)
      throw ParseError("sum index must be a plain variable", pos);
    return Expr::sum(args[0], args[1]->name, args[2], args[3]);
  }

  Lexer lex_;
};

} // namespace

ExprPtr parse_expr(const std::string& text) { return Parser(text).parse_full_expr(); }

Equation parse_equation(const std::string& text) { return Parser(text).parse_full_equation(); }

Answer parse_answer(const std::string& text) { return Parser(text).parse_full_answer(); }

// ----------------------------------------------------------- rendering ---

namespace {

// Wrap operands only where reparsing would change the tree.
void render_rec(const ExprPtr& e, std::string& out);

void render_wrapped(const ExprPtr& e, std::string& out, bool need_parens) {
  if (need_parens) {
    out += '(';
    render_rec(e, out);
    out += ')';
  } else {
    render_rec(e, out);
  }
}

bool is_negative_literal(const ExprPtr& e) {
  return e->kind == ExprKind::Integer && e->value < 0;
}

void render_rec(const ExprPtr& e, std::string& out) {
  switch (e->kind) {
    case ExprKind::Integer:
      out += e->value.str();
      return;
    case ExprKind::Variable:
      out += e->name;
      return;
    case ExprKind::FunctionApp: {
      out += e->name;
      out += '(';
      for (size_t i = 0; i < e->args.size(); ++i) {
        if (i) out += ',';
        render_rec(e->args[i], out);
      }
      out += ')';
      return;
    }
    case ExprKind::Add: {
      for (size_t i = 0; i < e->args.size(); ++i) {
        const ExprPtr& op = e->args[i];
        if (i == 0) {
          render_rec(op, out);
        } else if (op->kind == ExprKind::Neg) {
          out += '-';
          // The negated payload is a factor position: parenthesize Add (and
          // Mul/Div, where '-a*b' would rebind as (-a)*b).
          ExprKind k = op->args[0]->kind;
          render_wrapped(op->args[0], out,
                         k == ExprKind::Add || k == ExprKind::Mul || k == ExprKind::Div);
        } else if (is_negative_literal(op)) {
          out += '-';
          out += BigInt(-op->value).str();
        } else {
          out += '+';
          render_rec(op, out);
        }
      }
      return;
    }
    case ExprKind::Mul: {
      for (size_t i = 0; i < e->args.size(); ++i) {
        const ExprPtr& op = e->args[i];
        if (i) out += '*';
        bool parens = op->kind == ExprKind::Add || op->kind == ExprKind::Div ||
                      (i > 0 && (op->kind == ExprKind::Neg || is_negative_literal(op)));
        render_wrapped(op, out, parens);
      }
      return;
    }
    case ExprKind::Neg: {
      out += '-';
      ExprKind k = e->args[0]->kind;
      render_wrapped(e->args[0], out,
                     k == ExprKind::Add || k == ExprKind::Mul || k == ExprKind::Div);
      return;
    }
    case ExprKind::Div: {
      const ExprPtr& num = e->args[0];
      const ExprPtr& den = e->args[1];
      render_wrapped(num, out, num->kind == ExprKind::Add);
      out += '/';
      render_wrapped(den, out,
                     den->kind == ExprKind::Add || den->kind == ExprKind::Mul ||
                         den->kind == ExprKind::Div || den->kind == ExprKind::Neg ||
                         is_negative_literal(den));
      return;
    }
    case ExprKind::Pow: {
      const ExprPtr& base = e->args[0];
      bool parens = !(base->kind == ExprKind::Variable || base->kind == ExprKind::FunctionApp ||
                      base->kind == ExprKind::Sum ||
                      (base->kind == ExprKind::Integer && base->value >= 0));
      render_wrapped(base, out, parens);
      out += '^';
      if (e->exponent < 0) {
        out += "(-" + std::to_string(-e->exponent) + ")";
      } else {
        out += std::to_string(e->exponent);
      }
      return;
    }
    case ExprKind::Sum: {
      out += "sum(";
      render_rec(e->args[0], out);
      out += ',';
      out += e->name;
      out += ',';
      render_rec(e->args[1], out);
      out += ',';
      render_rec(e->args[2], out);
      out += ')';
      return;
    }
  }
}

} // namespace

std::string render(const ExprPtr& e) {
  std::string out;
  render_rec(e, out);
  return out;
}

std::string render(const Equation& eq) { return render(eq.lhs) + " = " + render(eq.rhs); }

// -------------------------------------------------- substitution et al ---

namespace {

ExprPtr rebuild(const ExprPtr& e, std::vector<ExprPtr> new_args) {
  switch (e->kind) {
    case ExprKind::Add: return Expr::add(std::move(new_args));
    case ExprKind::Mul: return Expr::mul(std::move(new_args));
    case ExprKind::Neg: return Expr::neg(new_args[0]);
    case ExprKind::Div: return Expr::div(new_args[0], new_args[1]);
    case ExprKind::Pow: return Expr::pow(new_args[0], e->exponent);
    case ExprKind::Sum: return Expr::sum(new_args[0], e->name, new_args[1], new_args[2]);
    case ExprKind::FunctionApp: return Expr::func(e->name, std::move(new_args));
    default: return e;
  }
}

void collect_free_vars(const ExprPtr& e, std::set<std::string>& bound,
                       std::set<std::string>& out) {
  switch (e->kind) {
    case ExprKind::Integer: return;
    case ExprKind::Variable:
      if (!bound.count(e->name)) out.insert(e->name);
      return;
    case ExprKind::Sum: {
      collect_free_vars(e->args[1], bound, out);
      collect_free_vars(e->args[2], bound, out);
      bool was_bound = bound.count(e->name) > 0;
      bound.insert(e->name);
      collect_free_vars(e->args[0], bound, out);
      if (!was_bound) bound.erase(e->name);
      return;
    }
    default:
      for (const auto& a : e->args) collect_free_vars(a, bound, out);
      return;
  }
}

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
  std::string candidate = base + "_";
  while (taken.count(candidate)) candidate += "_";
  return candidate;
}

} // namespace

std::set<std::string> free_vars(const ExprPtr& e) {
  std::set<std::string> bound, out;
  collect_free_vars(e, bound, out);
  return out;
}

ExprPtr substitute(const ExprPtr& e, const std::string& var, const ExprPtr& value) {
  switch (e->kind) {
    case ExprKind::Integer:
      return e;
    case ExprKind::Variable:
      return e->name == var ? value : e;
    case ExprKind::Sum: {
      ExprPtr lower = substitute(e->args[1], var, value);
      ExprPtr upper = substitute(e->args[2], var, value);
      if (e->name == var) // index shadows the substituted variable in the body
        return Expr::sum(e->args[0], e->name, lower, upper);
      ExprPtr body = e->args[0];
      std::string index = e->name;
      if (free_vars(value).count(index)) {
        // Rename the bound index so the replacement is not captured.
        std::set<std::string> taken = free_vars(body);
        auto vv = free_vars(value);
        taken.insert(vv.begin(), vv.end());
        taken.insert(var);
        std::string renamed = fresh_name(index, taken);
        body = substitute(body, index, Expr::variable(renamed));
        index = renamed;
      }
      return Expr::sum(substitute(body, var, value), index, lower, upper);
    }
    default: {
      std::vector<ExprPtr> new_args;
      new_args.reserve(e->args.size());
      for (const auto& a : e->args) new_args.push_back(substitute(a, var, value));
      return rebuild(e, std::move(new_args));
    }
  }
}

bool contains_sum(const ExprPtr& e) {
  if (e->kind == ExprKind::Sum) return true;
  for (const auto& a : e->args)
    if (contains_sum(a)) return true;
  return false;
}

std::set<std::string> sum_bound_free_vars(const ExprPtr& e) {
  std::set<std::string> out;
  struct Walk {
    std::set<std::string> bound;
    std::set<std::string>& out;
    void operator()(const ExprPtr& n) {
      if (n->kind == ExprKind::Sum) {
        std::set<std::string> b = bound; // bounds live outside the index scope
        collect_free_vars(n->args[1], b, out);
        b = bound;
        collect_free_vars(n->args[2], b, out);
        (*this)(n->args[1]);
        (*this)(n->args[2]);
        bool was_bound = bound.count(n->name) > 0;
        bound.insert(n->name);
        (*this)(n->args[0]);
        if (!was_bound) bound.erase(n->name);
        return;
      }
      for (const auto& a : n->args) (*this)(a);
    }
  } walk{{}, out};
  walk(e);
  return out;
}

// ------------------------------------------------ evaluation/expansion ---

BigRat eval_ground(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Integer:
      return BigRat(e->value);
    case ExprKind::Add: {
      BigRat acc = 0;
      for (const auto& a : e->args) acc += eval_ground(a);
      return acc;
    }
    case ExprKind::Mul: {
      BigRat acc = 1;
      for (const auto& a : e->args) acc *= eval_ground(a);
      return acc;
    }
    case ExprKind::Neg:
      return -eval_ground(e->args[0]);
    case ExprKind::Div: {
      BigRat den = eval_ground(e->args[1]);
      if (den == 0) throw EvalError("division by zero");
      return eval_ground(e->args[0]) / den;
    }
    case ExprKind::Pow: {
      BigRat base = eval_ground(e->args[0]);
      long long ex = e->exponent;
      if (ex < 0) {
        if (base == 0) throw EvalError("division by zero");
        base = BigRat(1) / base;
        ex = -ex;
      }
      BigRat acc = 1;
      for (long long i = 0; i < ex; ++i) acc *= base;
      return acc;
    }
    default:
      throw EvalError("expression is not ground");
  }
}

namespace {

bool is_ground_arith(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Integer: return true;
    case ExprKind::Variable:
    case ExprKind::FunctionApp:
    case ExprKind::Sum: return false;
    default:
      for (const auto& a : e->args)
        if (!is_ground_arith(a)) return false;
      return true;
  }
}

ExprPtr rat_to_expr(const BigRat& r) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return Expr::integer(num);
  return Expr::div(Expr::integer(num), Expr::integer(den));
}

// Bottom-up constant folding of pure-arithmetic subtrees; used only inside
// expand_sum so instantiated terms come out as literals (k^2 at k=2 -> 4).
ExprPtr fold_ground(const ExprPtr& e) {
  if (e->kind == ExprKind::Integer || e->kind == ExprKind::Variable) return e;
  if (is_ground_arith(e)) return rat_to_expr(eval_ground(e));
  std::vector<ExprPtr> new_args;
  new_args.reserve(e->args.size());
  for (const auto& a : e->args) new_args.push_back(fold_ground(a));
  return rebuild(e, std::move(new_args));
}

BigInt bound_to_int(const ExprPtr& e, const char* which) {
  if (!is_ground_arith(e))
    throw NonConcreteBound(std::string(which) + " bound is not a concrete integer: " + render(e));
  BigRat v = eval_ground(e);
  if (boost::multiprecision::denominator(v) != 1)
    throw NonConcreteBound(std::string(which) + " bound is not an integer: " + render(e));
  return boost::multiprecision::numerator(v);
}

} // namespace

ExprPtr expand_sum(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Integer:
    case ExprKind::Variable:
      return e;
    case ExprKind::Sum: {
      ExprPtr lower = expand_sum(e->args[1]);
      ExprPtr upper = expand_sum(e->args[2]);
      BigInt lo = bound_to_int(lower, "lower");
      BigInt hi = bound_to_int(upper, "upper");
      if (hi < lo) return Expr::integer(0);
      if (hi - lo + 1 > kMaxSumTerms) throw EvalError("sum expansion too large");
      std::vector<ExprPtr> terms;
      for (BigInt i = lo; i <= hi; ++i) {
        ExprPtr term = substitute(e->args[0], e->name, Expr::integer(i));
        term = expand_sum(term); // nested sums may now have concrete bounds
        terms.push_back(fold_ground(term));
      }
      return Expr::add(std::move(terms));
    }
    default: {
      std::vector<ExprPtr> new_args;
      new_args.reserve(e->args.size());
      for (const auto& a : e->args) new_args.push_back(expand_sum(a));
      return rebuild(e, std::move(new_args));
    }
  }
}

} // namespace proofcomp
