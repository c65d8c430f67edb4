#include "dopfac/expr.hpp"

#include <algorithm>
#include <set>

#include "dopfac/registry.hpp"

namespace dopfac {

namespace {

template <class T>
int cmp3(const T& a, const T& b) {
  return a < b ? -1 : (b < a ? 1 : 0);
}

int compare_exps(const Exponents& a, const Exponents& b) {
  std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i)
    if (int c = cmp3(exp_at(a, i), exp_at(b, i)); c != 0) return c;
  return 0;
}

}  // namespace

int compare(const FuncTerm& a, const FuncTerm& b) {
  if (int c = a.name.compare(b.name); c != 0) return c < 0 ? -1 : 1;
  if (int c = cmp3(a.args.size(), b.args.size()); c != 0) return c;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (int c = compare(a.args[i], b.args[i]); c != 0) return c;
  return compare_exps(a.deriv, b.deriv);
}

int compare(const SpecialNode& a, const SpecialNode& b) {
  if (int c = cmp3(static_cast<int>(a.kind), static_cast<int>(b.kind)); c != 0) return c;
  switch (a.kind) {
    case SpecialNode::Kind::Log:
      return compare(a.log_arg, b.log_arg);
    case SpecialNode::Kind::Antideriv:
      if (int c = cmp3(a.var, b.var); c != 0) return c;
      [[fallthrough]];
    case SpecialNode::Kind::Exp:
      return compare(*a.expr, *b.expr);
  }
  return 0;
}

int compare(const TermKey& a, const TermKey& b) {
  if (a.func.has_value() != b.func.has_value()) return a.func ? 1 : -1;
  if (a.func)
    if (int c = compare(*a.func, *b.func); c != 0) return c;
  if (int c = cmp3(a.nodes.size(), b.nodes.size()); c != 0) return c;
  for (std::size_t i = 0; i < a.nodes.size(); ++i)
    if (int c = compare(a.nodes[i], b.nodes[i]); c != 0) return c;
  return 0;
}

bool TermKey::has_functions() const {
  if (func) return true;
  for (const auto& n : nodes)
    if (n.kind != SpecialNode::Kind::Log && n.expr->has_functions()) return true;
  return false;
}

int compare(const LinDiffExpr& a, const LinDiffExpr& b) {
  auto ia = a.terms_.begin(), ib = b.terms_.begin();
  for (; ia != a.terms_.end() && ib != b.terms_.end(); ++ia, ++ib) {
    if (int c = compare(ia->first, ib->first); c != 0) return c;
    if (int c = compare(ia->second, ib->second); c != 0) return c;
  }
  if (ia != a.terms_.end()) return 1;
  if (ib != b.terms_.end()) return -1;
  return 0;
}

LinDiffExpr::LinDiffExpr(const RatFunc& r) {
  if (!r.is_zero()) terms_.emplace(TermKey{}, r);
}

LinDiffExpr LinDiffExpr::function(std::string name, std::vector<RatFunc> args, Exponents deriv) {
  if (args.empty()) throw Error("arbitrary function " + name + " needs at least one argument");
  trim(deriv);
  if (deriv.size() > args.size())
    throw Error("derivative index exceeds arity of " + name);
  TermKey k;
  k.func = FuncTerm{std::move(name), std::move(args), std::move(deriv)};
  return from_key(k, RatFunc(1));
}

LinDiffExpr LinDiffExpr::exp(const LinDiffExpr& arg) {
  if (arg.has_functions()) throw Error("nonlinear expression");
  if (arg.is_zero()) return LinDiffExpr(1);
  TermKey k;
  SpecialNode n;
  n.kind = SpecialNode::Kind::Exp;
  n.expr = std::make_shared<const LinDiffExpr>(arg);
  k.nodes.push_back(std::move(n));
  return from_key(k, RatFunc(1));
}

LinDiffExpr LinDiffExpr::log(const RatFunc& arg) {
  if (arg.is_zero()) throw Error("log of zero");
  if (arg == RatFunc(1)) return LinDiffExpr();
  TermKey k;
  SpecialNode n;
  n.kind = SpecialNode::Kind::Log;
  n.log_arg = arg;
  k.nodes.push_back(std::move(n));
  return from_key(k, RatFunc(1));
}

LinDiffExpr LinDiffExpr::antideriv(std::size_t var, const LinDiffExpr& integrand) {
  if (integrand.is_zero()) return LinDiffExpr();
  TermKey k;
  SpecialNode n;
  n.kind = SpecialNode::Kind::Antideriv;
  n.var = var;
  n.expr = std::make_shared<const LinDiffExpr>(integrand);
  k.nodes.push_back(std::move(n));
  return from_key(k, RatFunc(1));
}

LinDiffExpr LinDiffExpr::from_key(const TermKey& key, const RatFunc& coeff) {
  LinDiffExpr e;
  e.add(key, coeff);
  return e;
}

void LinDiffExpr::add(const TermKey& key, const RatFunc& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

bool LinDiffExpr::has_functions() const {
  for (const auto& [k, c] : terms_)
    if (k.has_functions()) return true;
  return false;
}

bool LinDiffExpr::depends_on(std::size_t v) const {
  for (const auto& [k, c] : terms_) {
    if (c.depends_on(v)) return true;
    if (k.func)
      for (const auto& a : k.func->args)
        if (a.depends_on(v)) return true;
    for (const auto& n : k.nodes) {
      switch (n.kind) {
        case SpecialNode::Kind::Log:
          if (n.log_arg.depends_on(v)) return true;
          break;
        case SpecialNode::Kind::Antideriv:
          if (n.var == v) return true;
          [[fallthrough]];
        case SpecialNode::Kind::Exp:
          if (n.expr->depends_on(v)) return true;
          break;
      }
    }
  }
  return false;
}

std::optional<RatFunc> LinDiffExpr::as_ratfunc() const {
  if (terms_.empty()) return RatFunc();
  if (terms_.size() == 1 && terms_.begin()->first.is_pure()) return terms_.begin()->second;
  return std::nullopt;
}

RatFunc LinDiffExpr::coefficient(const TermKey& key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? RatFunc() : it->second;
}

std::vector<std::string> LinDiffExpr::function_names() const {
  std::set<std::string> names;
  for (const auto& [k, c] : terms_) {
    if (k.func) names.insert(k.func->name);
    for (const auto& n : k.nodes)
      if (n.expr)
        for (auto& s : n.expr->function_names()) names.insert(s);
  }
  return {names.begin(), names.end()};
}

bool LinDiffExpr::has_antiderivatives() const {
  for (const auto& [k, c] : terms_)
    for (const auto& n : k.nodes) {
      if (n.kind == SpecialNode::Kind::Antideriv) return true;
      if (n.expr && n.expr->has_antiderivatives()) return true;
    }
  return false;
}

LinDiffExpr& LinDiffExpr::operator+=(const LinDiffExpr& o) {
  for (const auto& [k, c] : o.terms_) add(k, c);
  return *this;
}

LinDiffExpr& LinDiffExpr::operator-=(const LinDiffExpr& o) {
  for (const auto& [k, c] : o.terms_) add(k, -c);
  return *this;
}

LinDiffExpr LinDiffExpr::operator-() const { return scaled(RatFunc(-1)); }

LinDiffExpr LinDiffExpr::scaled(const RatFunc& c) const {
  LinDiffExpr r;
  if (c.is_zero()) return r;
  for (const auto& [k, x] : terms_) r.terms_.emplace(k, c * x);
  return r;
}

namespace {

// Product of two keys; exponentials merge into one node.
TermKey merge_keys(const TermKey& a, const TermKey& b) {
  if (a.has_functions() && b.has_functions()) throw Error("nonlinear expression");
  TermKey r;
  r.func = a.func ? a.func : b.func;
  std::optional<LinDiffExpr> exp_arg;
  auto collect = [&](const TermKey& k) {
    for (const auto& n : k.nodes) {
      if (n.kind == SpecialNode::Kind::Exp)
        exp_arg = exp_arg ? *exp_arg + *n.expr : *n.expr;
      else
        r.nodes.push_back(n);
    }
  };
  collect(a);
  collect(b);
  if (exp_arg && !exp_arg->is_zero()) {
    SpecialNode n;
    n.kind = SpecialNode::Kind::Exp;
    n.expr = std::make_shared<const LinDiffExpr>(*exp_arg);
    r.nodes.push_back(std::move(n));
  }
  std::sort(r.nodes.begin(), r.nodes.end(),
            [](const SpecialNode& x, const SpecialNode& y) { return compare(x, y) < 0; });
  return r;
}

}  // namespace

LinDiffExpr operator*(const LinDiffExpr& a, const LinDiffExpr& b) {
  LinDiffExpr r;
  for (const auto& [ka, ca] : a.terms_)
    for (const auto& [kb, cb] : b.terms_) r.add(merge_keys(ka, kb), ca * cb);
  return r;
}

namespace {

std::string func_string(const FuncTerm& f) {
  std::string args;
  for (const auto& a : f.args) {
    if (!args.empty()) args += ", ";
    args += a.to_string();
  }
  std::uint64_t order = exp_degree(f.deriv);
  if (order == 0) return f.name + "(" + args + ")";
  if (f.args.size() == 1 && order <= 3) return f.name + std::string(order, '\'') + "(" + args + ")";
  std::string idx;
  for (std::size_t j = 0; j < f.args.size(); ++j) idx += "," + std::to_string(exp_at(f.deriv, j));
  return "D[" + f.name + idx + "](" + args + ")";
}

std::string node_string(const SpecialNode& n) {
  switch (n.kind) {
    case SpecialNode::Kind::Exp:
      return "exp(" + n.expr->to_string() + ")";
    case SpecialNode::Kind::Log:
      return "log(" + n.log_arg.to_string() + ")";
    case SpecialNode::Kind::Antideriv:
      return "int(" + var_name(n.var) + "; " + n.expr->to_string() + ")";
  }
  return {};
}

}  // namespace

std::string to_string(const TermKey& key) {
  std::string s;
  for (const auto& n : key.nodes) {
    if (!s.empty()) s += "*";
    s += node_string(n);
  }
  if (key.func) {
    if (!s.empty()) s += "*";
    s += func_string(*key.func);
  }
  return s;
}

std::string LinDiffExpr::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [k, c] : terms_) append_signed_term(out, c, dopfac::to_string(k));
  return out;
}

namespace {

LinDiffExpr diff_key(const TermKey& key, std::size_t v) {
  LinDiffExpr r;
  if (key.func) {
    for (std::size_t j = 0; j < key.func->args.size(); ++j) {
      RatFunc d = diff(key.func->args[j], v);
      if (d.is_zero()) continue;
      TermKey k2 = key;
      k2.func->deriv = exp_mul(k2.func->deriv, unit_exponent(j));
      r += LinDiffExpr::from_key(k2, d);
    }
  }
  for (std::size_t i = 0; i < key.nodes.size(); ++i) {
    const SpecialNode& n = key.nodes[i];
    TermKey rest = key;
    rest.nodes.erase(rest.nodes.begin() + static_cast<std::ptrdiff_t>(i));
    switch (n.kind) {
      case SpecialNode::Kind::Exp: {
        LinDiffExpr d = diff_expr(*n.expr, v);
        if (!d.is_zero()) r += LinDiffExpr::from_key(key, RatFunc(1)) * d;
        break;
      }
      case SpecialNode::Kind::Log: {
        RatFunc d = diff(n.log_arg, v);
        if (!d.is_zero()) r += LinDiffExpr::from_key(rest, d / n.log_arg);
        break;
      }
      case SpecialNode::Kind::Antideriv:
        if (n.var == v)
          r += LinDiffExpr::from_key(rest, RatFunc(1)) * *n.expr;
        else if (n.expr->depends_on(v))
          throw UnderdeterminedDerivative();
        break;
    }
  }
  return r;
}

}  // namespace

LinDiffExpr diff_expr(const LinDiffExpr& e, std::size_t v) {
  LinDiffExpr r;
  for (const auto& [k, c] : e.terms()) {
    RatFunc dc = diff(c, v);
    if (!dc.is_zero()) r += LinDiffExpr::from_key(k, dc);
    if (!k.is_pure()) r += diff_key(k, v).scaled(c);
  }
  return r;
}

LinDiffExpr apply_pdop(const PDOp& L, const LinDiffExpr& e) {
  std::map<Exponents, std::optional<LinDiffExpr>> memo;
  memo.emplace(Exponents{}, e);
  auto derivative = [&](auto&& self, const Exponents& alpha) -> const std::optional<LinDiffExpr>& {
    if (auto it = memo.find(alpha); it != memo.end()) return it->second;
    std::optional<LinDiffExpr> value;
    for (std::size_t v = 0; v < alpha.size() && !value; ++v) {
      if (alpha[v] == 0) continue;
      Exponents lower(alpha);
      lower[v] -= 1;
      trim(lower);
      const auto& base = self(self, lower);
      if (!base) continue;
      try {
        value = diff_expr(*base, v);
      } catch (const UnderdeterminedDerivative&) {
      }
    }
    return memo.emplace(alpha, std::move(value)).first->second;
  };
  LinDiffExpr r;
  for (const auto& [alpha, c] : L.terms()) {
    const auto& d = derivative(derivative, alpha);
    if (!d) throw UnderdeterminedDerivative();
    r += d->scaled(c);
  }
  return r;
}

}  // namespace dopfac
