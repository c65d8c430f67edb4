#include "dopfac/lpdo.hpp"

#include <algorithm>
#include <future>

#include "dopfac/error.hpp"
#include "dopfac/integrate.hpp"
#include "dopfac/registry.hpp"

namespace dopfac {

SymbolPoly SymbolPoly::xi(std::size_t v) { return monomial(unit_exponent(v), RatFunc(1)); }

SymbolPoly SymbolPoly::monomial(Exponents e, const RatFunc& c) {
  SymbolPoly s;
  trim(e);
  if (!c.is_zero()) s.terms_.emplace(std::move(e), c);
  return s;
}

std::uint64_t SymbolPoly::degree() const {
  return terms_.empty() ? 0 : exp_degree(terms_.begin()->first);
}

RatFunc SymbolPoly::coeff(const Exponents& e) const {
  Exponents t(e);
  trim(t);
  auto it = terms_.find(t);
  return it == terms_.end() ? RatFunc() : it->second;
}

bool SymbolPoly::is_homogeneous() const {
  for (const auto& [e, c] : terms_)
    if (exp_degree(e) != degree()) return false;
  return true;
}

void SymbolPoly::add_term(const Exponents& e, const RatFunc& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

SymbolPoly& SymbolPoly::operator+=(const SymbolPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

SymbolPoly operator*(const SymbolPoly& a, const SymbolPoly& b) {
  SymbolPoly r;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) r.add_term(exp_mul(ea, eb), ca * cb);
  return r;
}

SymbolPoly SymbolPoly::scaled(const RatFunc& c) const {
  SymbolPoly r;
  if (c.is_zero()) return r;
  for (const auto& [e, x] : terms_) r.terms_.emplace(e, c * x);
  return r;
}

std::string SymbolPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [e, c] : terms_) append_signed_term(out, c, derivation_monomial_string(e, "xi_"));
  return out;
}

SymbolPoly principal_symbol(const PDOp& L) {
  if (L.is_zero()) throw Error("principal symbol of the zero operator");
  SymbolPoly s;
  PDOp top = L.part_of_order(L.order());
  for (const auto& [e, c] : top.terms()) s += SymbolPoly::monomial(e, c);
  return s;
}

namespace {

std::vector<std::size_t> symbol_vars(const SymbolPoly& s) {
  std::vector<std::size_t> vs;
  for (const auto& [e, c] : s.terms())
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] && std::find(vs.begin(), vs.end(), i) == vs.end()) vs.push_back(i);
  std::sort(vs.begin(), vs.end());
  return vs;
}

Exponents pair_exponent(std::size_t u, std::size_t v) {
  return exp_mul(unit_exponent(u), unit_exponent(v));
}

// Linear form l with l^2 = q, if any.
std::optional<SymbolPoly> linear_sqrt(const SymbolPoly& q) {
  if (q.is_zero()) return SymbolPoly();
  auto vs = symbol_vars(q);
  for (auto w : vs) {
    RatFunc qww = q.coeff(unit_exponent(w, 2));
    if (qww.is_zero()) continue;
    auto lw = sqrt_test(qww);
    if (!lw) return std::nullopt;
    SymbolPoly l = SymbolPoly::xi(w).scaled(*lw);
    for (auto u : vs)
      if (u != w) l += SymbolPoly::xi(u).scaled(q.coeff(pair_exponent(w, u)) / (2 * *lw));
    if (l * l == q) return l;
    return std::nullopt;
  }
  return std::nullopt;
}

std::optional<std::pair<SymbolPoly, SymbolPoly>> split_quadratic(const SymbolPoly& s) {
  auto vs = symbol_vars(s);
  for (auto v : vs) {
    RatFunc a = s.coeff(unit_exponent(v, 2));
    if (a.is_zero()) continue;
    SymbolPoly B;
    for (auto u : vs)
      if (u != v) B += SymbolPoly::xi(u).scaled(s.coeff(pair_exponent(v, u)));
    SymbolPoly xv = SymbolPoly::xi(v);
    SymbolPoly C = s - (xv * xv).scaled(a) - xv * B;
    SymbolPoly disc = B * B - C.scaled(4 * a);
    auto l = linear_sqrt(disc);
    if (!l) return std::nullopt;
    RatFunc inv = 1 / (2 * a);
    SymbolPoly f1 = xv + (B - *l).scaled(inv), f2 = (xv + (B + *l).scaled(inv)).scaled(a);
    return std::make_pair(f1, f2);
  }
  // No squares: s = xi_v * B + C with C free of xi_v.
  std::size_t v = vs.front();
  SymbolPoly B;
  for (auto u : vs)
    if (u != v) B += SymbolPoly::xi(u).scaled(s.coeff(pair_exponent(v, u)));
  SymbolPoly xv = SymbolPoly::xi(v);
  SymbolPoly C = s - xv * B;
  if (C.is_zero()) return std::make_pair(xv, B);
  for (auto w : vs) {
    RatFunc bw = B.coeff(unit_exponent(w));
    if (bw.is_zero()) continue;
    SymbolPoly m;
    for (auto u : vs)
      if (u != w) m += SymbolPoly::xi(u).scaled(C.coeff(pair_exponent(w, u)) / bw);
    if (m * B == C) return std::make_pair(xv + m, B);
    return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

std::optional<SymbolFactorization> factor_symbol(const SymbolPoly& s0) {
  if (s0.is_zero()) throw Error("factor_symbol of the zero symbol");
  if (!s0.is_homogeneous()) throw Error("symbol is not homogeneous");
  SymbolFactorization out{RatFunc(1), {}};
  Exponents common = s0.terms().begin()->first;
  for (const auto& [e, c] : s0.terms()) {
    common.resize(std::max(common.size(), e.size()), 0);
    for (std::size_t i = 0; i < common.size(); ++i) common[i] = std::min(common[i], exp_at(e, i));
  }
  trim(common);
  SymbolPoly s;
  for (const auto& [e, c] : s0.terms()) s += SymbolPoly::monomial(*exp_div(e, common), c);
  for (std::size_t i = 0; i < common.size(); ++i)
    for (std::uint32_t k = 0; k < common[i]; ++k) out.factors.push_back(SymbolPoly::xi(i));

  auto push_normalized = [&](const SymbolPoly& f) {
    RatFunc lead = f.terms().begin()->second;
    out.scale *= lead;
    out.factors.push_back(f.scaled(1 / lead));
  };

  std::uint64_t d = s.degree();
  if (d == 0) {
    out.scale = s.terms().begin()->second;
  } else if (d == 1) {
    push_normalized(s);
  } else if (d == 2) {
    auto q = split_quadratic(s);
    if (!q) return std::nullopt;
    push_normalized(q->first);
    push_normalized(q->second);
  } else {
    auto vs = symbol_vars(s);
    bool constant = true;
    for (const auto& [e, c] : s.terms()) constant = constant && c.is_constant();
    if (vs.size() != 2 || !constant) throw Error("unsupported shape");
    std::size_t u = vs[0], w = vs[1];
    MPoly p;
    for (const auto& [e, c] : s.terms())
      p += MPoly::monomial(unit_exponent(u, exp_at(e, u)), c.constant_value());
    auto roots = rational_roots(p);
    if (roots.size() != d) return std::nullopt;
    out.scale *= s.coeff(unit_exponent(u, static_cast<std::uint32_t>(d)));
    for (const auto& r : roots)
      out.factors.push_back(SymbolPoly::xi(u) - SymbolPoly::xi(w).scaled(RatFunc(r)));
  }
  return out;
}

std::size_t hx() { return var("x"); }
std::size_t hy() { return var("y"); }

HyperbolicForm to_hyperbolic(const PDOp& L) {
  std::size_t x = hx(), y = hy();
  auto fail = [] { return Error("not in Laplace normal form"); };
  if (L.order() != 2) throw fail();
  for (const auto& [e, c] : L.terms())
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] && i != x && i != y) throw fail();
  RatFunc m = L.coeff(pair_exponent(x, y));
  if (m.is_zero() || !L.coeff(unit_exponent(x, 2)).is_zero() || !L.coeff(unit_exponent(y, 2)).is_zero())
    throw fail();
  RatFunc inv = 1 / m;
  return {L.coeff(unit_exponent(x)) * inv, L.coeff(unit_exponent(y)) * inv, L.coeff({}) * inv};
}

PDOp to_pdop(const HyperbolicForm& H) {
  std::size_t x = hx(), y = hy();
  return PDOp::monomial(pair_exponent(x, y), RatFunc(1)) + PDOp::derivation(x).scaled(H.a) +
         PDOp::derivation(y).scaled(H.b) + PDOp(H.c);
}

Invariants laplace_invariants(const HyperbolicForm& H) {
  RatFunc ab = H.a * H.b;
  return {diff(H.a, hx()) + ab - H.c, diff(H.b, hy()) + ab - H.c};
}

std::optional<std::pair<PDOp, PDOp>> naive_factor(const HyperbolicForm& H) {
  Invariants inv = laplace_invariants(H);
  PDOp dxb = PDOp::derivation(hx()) + PDOp(H.b), dya = PDOp::derivation(hy()) + PDOp(H.a);
  std::optional<std::pair<PDOp, PDOp>> r;
  if (inv.h.is_zero())
    r = std::make_pair(dxb, dya);
  else if (inv.k.is_zero())
    r = std::make_pair(dya, dxb);
  if (r && r->first * r->second != to_pdop(H)) throw Error("naive factorization failed to verify");
  return r;
}

LaplaceStep laplace_step(const HyperbolicForm& H, Direction dir) {
  Invariants inv = laplace_invariants(H);
  PDOp dxb = PDOp::derivation(hx()) + PDOp(H.b), dya = PDOp::derivation(hy()) + PDOp(H.a);
  LaplaceStep st;
  if (dir == Direction::Plus) {
    if (inv.h.is_zero()) throw Error("vanishing invariant h");
    PDOp composed = dya * PDOp(1 / inv.h) * dxb - PDOp(1);
    st.H = to_hyperbolic(composed.scaled(inv.h));
    st.sub = {dya, dxb.scaled(1 / inv.h)};
  } else {
    if (inv.k.is_zero()) throw Error("vanishing invariant k");
    PDOp composed = dxb * PDOp(1 / inv.k) * dya - PDOp(1);
    st.H = to_hyperbolic(composed.scaled(inv.k));
    st.sub = {dxb, dya.scaled(1 / inv.k)};
  }
  st.inv = laplace_invariants(st.H);
  return st;
}

namespace {

LaplaceDirection run_direction(const HyperbolicForm& H, Direction dir, unsigned max_steps) {
  LaplaceDirection d;
  HyperbolicForm cur = H;
  Invariants inv = laplace_invariants(cur);
  while (true) {
    const RatFunc& driving = dir == Direction::Plus ? inv.h : inv.k;
    if (driving.is_zero()) {
      d.terminated = true;
      break;
    }
    if (d.steps.size() >= max_steps) break;
    d.steps.push_back(laplace_step(cur, dir));
    cur = d.steps.back().H;
    inv = d.steps.back().inv;
  }
  return d;
}

}  // namespace

LaplaceChain laplace_cascade(const HyperbolicForm& H, unsigned max_steps) {
  hx();
  hy();
  LaplaceChain ch;
  ch.center = H;
  ch.center_inv = laplace_invariants(H);
  auto minus = std::async(std::launch::async, run_direction, H, Direction::Minus, max_steps);
  ch.plus = run_direction(H, Direction::Plus, max_steps);
  ch.minus = minus.get();
  return ch;
}

BuiltSolution build_solution(const LaplaceChain& ch) {
  if (!ch.plus.terminated || !ch.minus.terminated)
    throw Error("cascade did not terminate in both directions");
  std::size_t x = hx(), y = hy();
  BuiltSolution out;
  auto pull_back = [](LinDiffExpr w, const LaplaceDirection& d) {
    for (std::size_t i = d.steps.size(); i-- > 0;) w = apply_pdop(d.steps[i].sub.pullback, w);
    return w;
  };
  // Terminal plus operator factors as (Dx + b)(Dy + a): use ker(Dy + a).
  const HyperbolicForm& hp = ch.plus.steps.empty() ? ch.center : ch.plus.steps.back().H;
  LinDiffExpr wp = exp_integral(-hp.a, y, &out.integration_fallback) *
                   LinDiffExpr::function("F", {RatFunc::variable(x)});
  // Terminal minus operator factors as (Dy + a)(Dx + b): use ker(Dx + b).
  const HyperbolicForm& hm = ch.minus.steps.empty() ? ch.center : ch.minus.steps.back().H;
  LinDiffExpr wm = exp_integral(-hm.b, x, &out.integration_fallback) *
                   LinDiffExpr::function("G", {RatFunc::variable(y)});
  try {
    out.u = pull_back(wp, ch.plus) + pull_back(wm, ch.minus);
    if (!verify_solution(to_pdop(ch.center), out.u)) throw Error("verification failed");
  } catch (const UnderdeterminedDerivative&) {
    throw Error("verification failed: integration fallback left an underdetermined derivative");
  }
  return out;
}

bool verify_solution(const PDOp& L, const LinDiffExpr& u) { return is_zero(apply_pdop(L, u)); }

}  // namespace dopfac
