#include "proofcomp/canonical.hpp"

#include <map>
#include <unordered_map>

namespace proofcomp {

namespace {

// atom id -> exponent (> 0)
using Monomial = std::map<int, int>;

struct MonoLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    int da = 0, db = 0;
    for (const auto& [id, e] : a) da += e;
    for (const auto& [id, e] : b) db += e;
    if (da != db) return da < db;
    return a < b;
  }
};

using Poly = std::map<Monomial, BigInt, MonoLess>;

constexpr size_t kMaxPolyTerms = 200000;
constexpr int kMaxRewritePasses = 10000;
constexpr int kMaxBoundVars = 3;
constexpr int kInstantiationPoints = 6;

Poly poly_const(const BigInt& v) {
  Poly p;
  if (v != 0) p[Monomial{}] = v;
  return p;
}

Poly poly_atom(int id) {
  Poly p;
  p[Monomial{{id, 1}}] = 1;
  return p;
}

void poly_accumulate(Poly& into, const Monomial& m, const BigInt& c) {
  auto it = into.find(m);
  if (it == into.end()) {
    if (c != 0) into.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second == 0) into.erase(it);
}

Poly poly_add(const Poly& a, const Poly& b) {
  Poly out = a;
  for (const auto& [m, c] : b) poly_accumulate(out, m, c);
  return out;
}

Poly poly_neg(const Poly& a) {
  Poly out;
  for (const auto& [m, c] : a) out.emplace(m, -c);
  return out;
}

Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial out = a;
  for (const auto& [id, e] : b) {
    auto [it, inserted] = out.emplace(id, e);
    if (!inserted) it->second += e;
  }
  return out;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.size() * b.size() > kMaxPolyTerms)
    throw UndecidableError("expression too large to canonicalize");
  Poly out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) poly_accumulate(out, mono_mul(ma, mb), ca * cb);
  return out;
}

Poly poly_pow(const Poly& a, long long e) {
  Poly out = poly_const(1);
  Poly base = a;
  while (e > 0) {
    if (e & 1) out = poly_mul(out, base);
    e >>= 1;
    if (e) base = poly_mul(base, base);
  }
  return out;
}

struct RatFunc {
  Poly num;
  Poly den;
};

struct CompiledRule {
  int atom;
  int power;
  Poly replacement;
};

std::string poly_key(const Poly& p) {
  std::string out;
  for (const auto& [m, c] : p) {
    out += c.str();
    out += '{';
    for (const auto& [id, e] : m) {
      out += std::to_string(id);
      out += '^';
      out += std::to_string(e);
      out += ',';
    }
    out += '}';
  }
  return out;
}

class Canonicalizer {
public:
  explicit Canonicalizer(const std::vector<RewriteRule>& rules) {
    for (const auto& r : rules) compile_rule(r);
  }

  RatFunc canon(const ExprPtr& e) {
    switch (e->kind) {
      case ExprKind::Integer:
        return {poly_const(e->value), poly_const(1)};
      case ExprKind::Variable:
        return {poly_atom(atom_id("v:" + e->name)), poly_const(1)};
      case ExprKind::Add: {
        RatFunc acc{poly_const(0), poly_const(1)};
        for (const auto& a : e->args) {
          RatFunc r = canon(a);
          acc = {poly_add(poly_mul(acc.num, r.den), poly_mul(r.num, acc.den)),
                 poly_mul(acc.den, r.den)};
        }
        return normalized(std::move(acc));
      }
      case ExprKind::Mul: {
        RatFunc acc{poly_const(1), poly_const(1)};
        for (const auto& a : e->args) {
          RatFunc r = canon(a);
          acc = {poly_mul(acc.num, r.num), poly_mul(acc.den, r.den)};
        }
        return normalized(std::move(acc));
      }
      case ExprKind::Neg: {
        RatFunc r = canon(e->args[0]);
        r.num = poly_neg(r.num);
        return r;
      }
      case ExprKind::Div: {
        RatFunc a = canon(e->args[0]);
        RatFunc b = canon(e->args[1]);
        RatFunc out{poly_mul(a.num, b.den), poly_mul(a.den, b.num)};
        out = normalized(std::move(out));
        if (out.den.empty())
          throw UndecidableError("denominator is identically zero: " + render(e->args[1]));
        return out;
      }
      case ExprKind::Pow: {
        RatFunc b = canon(e->args[0]);
        long long ex = e->exponent;
        if (ex < 0) {
          std::swap(b.num, b.den);
          if (b.den.empty())
            throw UndecidableError("denominator is identically zero: " + render(e->args[0]));
          ex = -ex;
        }
        return normalized({poly_pow(b.num, ex), poly_pow(b.den, ex)});
      }
      case ExprKind::FunctionApp: {
        std::string key = "f:" + e->name + "(";
        for (const auto& a : e->args) {
          RatFunc r = canon(a);
          key += poly_key(r.num) + "/" + poly_key(r.den) + ";";
        }
        key += ")";
        return {poly_atom(atom_id(key)), poly_const(1)};
      }
      case ExprKind::Sum:
        throw UndecidableError("sum could not be brought to concrete bounds: " + render(e));
    }
    throw UndecidableError("unreachable expression kind");
  }

  Poly normalize(Poly p) const {
    int passes = 0;
    bool changed = true;
    while (changed) {
      if (++passes > kMaxRewritePasses)
        throw UndecidableError("rewrite system did not terminate");
      changed = false;
      for (auto it = p.begin(); it != p.end(); ++it) {
        const CompiledRule* hit = nullptr;
        for (const auto& r : rules_) {
          auto a = it->first.find(r.atom);
          if (a != it->first.end() && a->second >= r.power) {
            hit = &r;
            break;
          }
        }
        if (!hit) continue;
        Monomial reduced = it->first;
        auto a = reduced.find(hit->atom);
        a->second -= hit->power;
        if (a->second == 0) reduced.erase(a);
        BigInt coeff = it->second;
        p.erase(it);
        for (const auto& [rm, rc] : hit->replacement)
          poly_accumulate(p, mono_mul(rm, reduced), coeff * rc);
        changed = true;
        break; // map mutated; restart the scan
      }
    }
    return p;
  }

private:
  RatFunc normalized(RatFunc r) const {
    if (rules_.empty()) return r;
    return {normalize(std::move(r.num)), normalize(std::move(r.den))};
  }

  int atom_id(const std::string& key) {
    auto [it, inserted] = atoms_.emplace(key, static_cast<int>(atoms_.size()));
    return it->second;
  }

  void compile_rule(const RewriteRule& r) {
    const std::string where = r.id.empty() ? "rewrite rule" : "rewrite rule '" + r.id + "'";
    ExprPtr head = r.pattern;
    long long power = 1;
    if (head->kind == ExprKind::Pow) {
      power = head->exponent;
      head = head->args[0];
    }
    if (head->kind != ExprKind::FunctionApp)
      throw InvalidRewriteRule(where + ": pattern must be a function application, optionally "
                                       "raised to a positive integer power");
    if (power < 1) throw InvalidRewriteRule(where + ": pattern power must be positive");
    if (!free_vars(r.pattern).empty())
      throw InvalidRewriteRule(where + ": pattern arguments must not contain variables");

    RatFunc head_rf;
    RatFunc repl;
    try {
      head_rf = canon(head);
      repl = canon(r.replacement);
    } catch (const UndecidableError& e) {
      throw InvalidRewriteRule(where + ": " + e.what());
    }
    if (repl.den != poly_const(1))
      throw InvalidRewriteRule(where + ": replacement must be an integer-coefficient polynomial");
    int atom = head_rf.num.begin()->first.begin()->first;
    for (const auto& [m, c] : repl.num) {
      auto it = m.find(atom);
      if (it != m.end() && it->second >= power)
        throw InvalidRewriteRule(where + ": replacement must have lower degree in the rewritten "
                                         "atom than the pattern, or rewriting would not terminate");
    }
    rules_.push_back({atom, static_cast<int>(power), std::move(repl.num)});
  }

  std::unordered_map<std::string, int> atoms_;
  std::vector<CompiledRule> rules_;
};

bool equivalent_expanded(const ExprPtr& a, const ExprPtr& b,
                         const std::vector<RewriteRule>& rules) {
  Canonicalizer cz(rules);
  RatFunc ra = cz.canon(a);
  RatFunc rb = cz.canon(b);
  Poly lhs = cz.normalize(poly_mul(ra.num, rb.den));
  Poly rhs = cz.normalize(poly_mul(rb.num, ra.den));
  return lhs == rhs;
}

} // namespace

bool equivalent(const ExprPtr& a, const ExprPtr& b, const std::vector<RewriteRule>& rules) {
  ExprPtr ea, eb;
  bool concrete = true;
  try {
    ea = expand_sum(a);
    eb = expand_sum(b);
  } catch (const NonConcreteBound&) {
    concrete = false;
  } catch (const EvalError& e) {
    throw UndecidableError(e.what());
  }
  if (concrete) return equivalent_expanded(ea, eb, rules);

  std::set<std::string> vars = sum_bound_free_vars(a);
  for (const auto& v : sum_bound_free_vars(b)) vars.insert(v);
  if (vars.empty())
    throw UndecidableError("sum bounds never become concrete");
  if (vars.size() > static_cast<size_t>(kMaxBoundVars))
    throw UndecidableError("too many free variables in sum bounds (limit " +
                           std::to_string(kMaxBoundVars) + ")");

  std::vector<std::string> vs(vars.begin(), vars.end());
  std::vector<int> point(vs.size(), 1);
  while (true) {
    ExprPtr ia = a, ib = b;
    for (size_t j = 0; j < vs.size(); ++j) {
      ExprPtr v = Expr::integer(point[j]);
      ia = substitute(ia, vs[j], v);
      ib = substitute(ib, vs[j], v);
    }
    try {
      ia = expand_sum(ia);
      ib = expand_sum(ib);
    } catch (const NonConcreteBound& e) {
      throw UndecidableError(e.what());
    } catch (const EvalError& e) {
      throw UndecidableError(e.what());
    }
    if (!equivalent_expanded(ia, ib, rules)) return false;

    size_t j = 0;
    while (j < point.size() && point[j] == kInstantiationPoints) point[j++] = 1;
    if (j == point.size()) break;
    ++point[j];
  }
  return true;
}

bool equivalent(const Equation& a, const Equation& b, const std::vector<RewriteRule>& rules) {
  auto eq = [&](const ExprPtr& x, const ExprPtr& y) { return equivalent(x, y, rules); };
  if (eq(a.lhs, b.lhs) && eq(a.rhs, b.rhs)) return true;
  return eq(a.lhs, b.rhs) && eq(a.rhs, b.lhs);
}

bool matches_form(const ExprPtr& a, const ExprPtr& b) { return equal(a, b); }

bool matches_form(const Equation& a, const Equation& b) {
  return equal(a.lhs, b.lhs) && equal(a.rhs, b.rhs);
}

} // namespace proofcomp
