#include "proofcomp/logic.hpp"

#include <cctype>
#include <stdexcept>

namespace proofcomp {

namespace {

std::shared_ptr<LogicNode> make_node(LogicKind k) {
  auto n = std::make_shared<LogicNode>();
  n->kind = k;
  return n;
}

std::vector<LogicPtr> flatten(LogicKind k, std::vector<LogicPtr> xs) {
  std::vector<LogicPtr> out;
  for (auto& x : xs) {
    if (x->kind == k)
      out.insert(out.end(), x->args.begin(), x->args.end());
    else
      out.push_back(std::move(x));
  }
  return out;
}

} // namespace

LogicPtr LogicNode::atom(std::string label, std::string text) {
  auto n = make_node(LogicKind::Atom);
  n->label = std::move(label);
  n->text = std::move(text);
  return n;
}

LogicPtr LogicNode::negation(LogicPtr x) {
  if (x->kind == LogicKind::Not) return x->args[0];
  auto n = make_node(LogicKind::Not);
  n->args = {std::move(x)};
  return n;
}

LogicPtr LogicNode::conj(std::vector<LogicPtr> xs) {
  auto ops = flatten(LogicKind::And, std::move(xs));
  if (ops.empty()) throw std::invalid_argument("empty conjunction");
  if (ops.size() == 1) return ops[0];
  auto n = make_node(LogicKind::And);
  n->args = std::move(ops);
  return n;
}

LogicPtr LogicNode::disj(std::vector<LogicPtr> xs) {
  auto ops = flatten(LogicKind::Or, std::move(xs));
  if (ops.empty()) throw std::invalid_argument("empty disjunction");
  if (ops.size() == 1) return ops[0];
  auto n = make_node(LogicKind::Or);
  n->args = std::move(ops);
  return n;
}

LogicPtr LogicNode::implies(LogicPtr a, LogicPtr b) {
  auto n = make_node(LogicKind::Implies);
  n->args = {std::move(a), std::move(b)};
  return n;
}

LogicPtr LogicNode::iff(LogicPtr a, LogicPtr b) {
  auto n = make_node(LogicKind::Iff);
  n->args = {std::move(a), std::move(b)};
  return n;
}

LogicPtr LogicNode::forall(std::string var, LogicPtr body) {
  auto n = make_node(LogicKind::ForAll);
  n->label = std::move(var);
  n->args = {std::move(body)};
  return n;
}

LogicPtr LogicNode::exists(std::string var, LogicPtr body) {
  auto n = make_node(LogicKind::Exists);
  n->label = std::move(var);
  n->args = {std::move(body)};
  return n;
}

bool equal(const LogicPtr& a, const LogicPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind || a->label != b->label || a->text != b->text ||
      a->args.size() != b->args.size())
    return false;
  for (size_t i = 0; i < a->args.size(); ++i)
    if (!equal(a->args[i], b->args[i])) return false;
  return true;
}

LogicPtr negate(const LogicPtr& s) {
  switch (s->kind) {
    case LogicKind::Atom:
      return LogicNode::negation(s);
    case LogicKind::Not:
      return s->args[0];
    case LogicKind::And: {
      std::vector<LogicPtr> xs;
      for (const auto& a : s->args) xs.push_back(negate(a));
      return LogicNode::disj(std::move(xs));
    }
    case LogicKind::Or: {
      std::vector<LogicPtr> xs;
      for (const auto& a : s->args) xs.push_back(negate(a));
      return LogicNode::conj(std::move(xs));
    }
    case LogicKind::Implies:
      return LogicNode::conj({s->args[0], negate(s->args[1])});
    case LogicKind::Iff:
      return LogicNode::disj({LogicNode::conj({s->args[0], negate(s->args[1])}),
                              LogicNode::conj({negate(s->args[0]), s->args[1]})});
    case LogicKind::ForAll:
      return LogicNode::exists(s->label, negate(s->args[0]));
    case LogicKind::Exists:
      return LogicNode::forall(s->label, negate(s->args[0]));
  }
  throw std::logic_error("unreachable logic kind");
}

LogicPtr contrapositive(const LogicPtr& s) {
  if (s->kind != LogicKind::Implies)
    throw NotAnImplication("contrapositive requires an implication, got: " + to_text(s));
  return LogicNode::implies(negate(s->args[1]), negate(s->args[0]));
}

LogicPtr converse(const LogicPtr& s) {
  if (s->kind != LogicKind::Implies)
    throw NotAnImplication("converse requires an implication, got: " + to_text(s));
  return LogicNode::implies(s->args[1], s->args[0]);
}

// ------------------------------------------------------- serialization ---

namespace {

void quote_into(const std::string& s, std::string& out) {
  out += '"';
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
}

void text_rec(const LogicPtr& s, std::string& out) {
  auto nary = [&](const char* op) {
    out += op;
    out += '(';
    for (size_t i = 0; i < s->args.size(); ++i) {
      if (i) out += ',';
      text_rec(s->args[i], out);
    }
    out += ')';
  };
  switch (s->kind) {
    case LogicKind::Atom:
      if (s->text.empty()) {
        out += s->label;
      } else {
        out += "atom(";
        out += s->label;
        out += ',';
        quote_into(s->text, out);
        out += ')';
      }
      return;
    case LogicKind::Not: nary("not"); return;
    case LogicKind::And: nary("and"); return;
    case LogicKind::Or: nary("or"); return;
    case LogicKind::Implies: nary("implies"); return;
    case LogicKind::Iff: nary("iff"); return;
    case LogicKind::ForAll:
    case LogicKind::Exists:
      out += s->kind == LogicKind::ForAll ? "forall(" : "exists(";
      out += s->label;
      out += ',';
      text_rec(s->args[0], out);
      out += ')';
      return;
  }
}

bool is_reserved(const std::string& name) {
  return name == "not" || name == "and" || name == "or" || name == "implies" ||
         name == "iff" || name == "forall" || name == "exists" || name == "atom";
}

class LogicParser {
public:
  explicit LogicParser(const std::string& src) : src_(src) {}

  LogicPtr parse() {
    LogicPtr s = node();
    skip_ws();
    if (i_ < src_.size())
      throw ParseError("unexpected trailing input", i_, {"end of input"});
    return s;
  }

private:
  void skip_ws() {
    while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
  }

  std::string name() {
    skip_ws();
    size_t start = i_;
    while (i_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_' ||
            src_[i_] == '-'))
      ++i_;
    if (i_ == start) throw ParseError("expected a name", start, {"name"});
    return src_.substr(start, i_ - start);
  }

  void expect(char c) {
    skip_ws();
    if (i_ >= src_.size() || src_[i_] != c)
      throw ParseError(std::string("expected '") + c + "'", i_, {std::string(1, c)});
    ++i_;
  }

  bool peek_is(char c) {
    skip_ws();
    return i_ < src_.size() && src_[i_] == c;
  }

  std::string quoted() {
    skip_ws();
    if (i_ >= src_.size() || src_[i_] != '"')
      throw ParseError("expected a quoted string", i_, {"\""});
    ++i_;
    std::string out;
    while (i_ < src_.size() && src_[i_] != '"') {
      if (src_[i_] == '\\' && i_ + 1 < src_.size()) ++i_;
      out += src_[i_++];
    }
    if (i_ >= src_.size()) throw ParseError("unterminated string", i_, {"\""});
    ++i_;
    return out;
  }

  std::vector<LogicPtr> args() {
    std::vector<LogicPtr> out;
    expect('(');
    out.push_back(node());
    while (peek_is(',')) {
      ++i_;
      out.push_back(node());
    }
    expect(')');
    return out;
  }

  LogicPtr node() {
    size_t start = i_;
    std::string head = name();
    if (!peek_is('(')) {
      if (is_reserved(head))
        throw ParseError("'" + head + "' is reserved and cannot name an atom", start);
      return LogicNode::atom(head);
    }
    if (head == "atom") {
      expect('(');
      std::string label = name();
      if (is_reserved(label))
        throw ParseError("'" + label + "' is reserved and cannot name an atom", start);
      expect(',');
      std::string text = quoted();
      expect(')');
      return LogicNode::atom(label, text);
    }
    if (head == "forall" || head == "exists") {
      expect('(');
      std::string var = name();
      expect(',');
      LogicPtr body = node();
      expect(')');
      return head == "forall" ? LogicNode::forall(var, body) : LogicNode::exists(var, body);
    }
    auto xs = args();
    auto arity = [&](size_t n) {
      if (xs.size() != n)
        throw ParseError("'" + head + "' takes exactly " + std::to_string(n) + " arguments",
                         start);
    };
    if (head == "not") {
      arity(1);
      return LogicNode::negation(xs[0]);
    }
    if (head == "and") return LogicNode::conj(std::move(xs));
    if (head == "or") return LogicNode::disj(std::move(xs));
    if (head == "implies") {
      arity(2);
      return LogicNode::implies(xs[0], xs[1]);
    }
    if (head == "iff") {
      arity(2);
      return LogicNode::iff(xs[0], xs[1]);
    }
    throw ParseError("unknown connective '" + head + "'", start,
                     {"not", "and", "or", "implies", "iff", "forall", "exists", "atom"});
  }

  const std::string& src_;
  size_t i_ = 0;
};

void pretty_rec(const LogicPtr& s, std::string& out, bool top) {
  auto reading = [](const LogicPtr& a) { return a->text.empty() ? a->label : a->text; };
  auto joined = [&](const char* word) {
    if (!top) out += '(';
    for (size_t i = 0; i < s->args.size(); ++i) {
      if (i) {
        out += ' ';
        out += word;
        out += ' ';
      }
      pretty_rec(s->args[i], out, false);
    }
    if (!top) out += ')';
  };
  switch (s->kind) {
    case LogicKind::Atom:
      out += reading(s);
      return;
    case LogicKind::Not:
      out += "it is not the case that ";
      pretty_rec(s->args[0], out, false);
      return;
    case LogicKind::And: joined("and"); return;
    case LogicKind::Or: joined("or"); return;
    case LogicKind::Implies:
      if (!top) out += '(';
      out += "if ";
      pretty_rec(s->args[0], out, false);
      out += " then ";
      pretty_rec(s->args[1], out, false);
      if (!top) out += ')';
      return;
    case LogicKind::Iff:
      if (!top) out += '(';
      pretty_rec(s->args[0], out, false);
      out += " if and only if ";
      pretty_rec(s->args[1], out, false);
      if (!top) out += ')';
      return;
    case LogicKind::ForAll:
    case LogicKind::Exists:
      if (!top) out += '(';
      out += s->kind == LogicKind::ForAll ? "for all " : "there exists ";
      out += s->label;
      out += ", ";
      pretty_rec(s->args[0], out, false);
      if (!top) out += ')';
      return;
  }
}

} // namespace

std::string to_text(const LogicPtr& s) {
  std::string out;
  text_rec(s, out);
  return out;
}

LogicPtr parse_logic(const std::string& text) { return LogicParser(text).parse(); }

std::string pretty(const LogicPtr& s) {
  std::string out;
  pretty_rec(s, out, true);
  return out;
}

} // namespace proofcomp
