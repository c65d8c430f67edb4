#include "dopfac/integrate.hpp"

#include <map>

#include "dopfac/linalg.hpp"
#include "dopfac/upoly.hpp"

namespace dopfac {

namespace {

using KPoly = UPoly<RatFunc>;

KPoly to_kpoly(const MPoly& p, std::size_t v) {
  std::vector<RatFunc> c;
  for (const auto& m : p.coefficients_in(v)) c.emplace_back(m);
  return KPoly(std::move(c));
}

RatFunc to_ratfunc(const KPoly& p, std::size_t v) {
  RatFunc r, x = RatFunc::variable(v);
  for (std::size_t i = p.coeffs().size(); i-- > 0;) r = r * x + p.coeffs()[i];
  return r;
}

KPoly quo(const KPoly& a, const KPoly& b) { return divmod(a, b).first; }

// Newton interpolation over K.
KPoly interpolate(const std::vector<RatFunc>& xs, std::vector<RatFunc> ys) {
  std::size_t n = xs.size();
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = n - 1; i >= j; --i) ys[i] = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - j]);
  KPoly r;
  for (std::size_t i = n; i-- > 0;)
    r = r * KPoly(std::vector<RatFunc>{-xs[i], RatFunc(1)}) + KPoly::constant(ys[i]);
  return r;
}

// Residues of b/q (q squarefree, deg b < deg q) that are rational numbers,
// via the Rothstein-Trager resultant; each comes with gcd(q, b - c q').
std::vector<std::pair<Rat, KPoly>> rational_residues(const KPoly& q, const KPoly& b) {
  KPoly dq = q.derivative();
  std::size_t k = static_cast<std::size_t>(q.degree());
  std::vector<RatFunc> zs, rs;
  for (std::size_t i = 0; i <= k; ++i) {
    RatFunc z(static_cast<long>(i));
    zs.push_back(z);
    rs.push_back(resultant(q, b - z * dq));
  }
  KPoly res = interpolate(zs, rs);
  std::vector<std::pair<Rat, KPoly>> out;
  if (res.degree() < 1) return out;
  res = res.monic();
  MPoly qz;
  std::size_t zvar = 0;
  for (std::size_t i = 0; i < res.coeffs().size(); ++i) {
    if (!res.coeffs()[i].is_constant()) return out;  // residues outside Q
    qz += MPoly::monomial(unit_exponent(zvar, static_cast<std::uint32_t>(i)),
                          res.coeffs()[i].constant_value());
  }
  std::vector<Rat> roots = rational_roots(qz);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (i > 0 && roots[i] == roots[i - 1]) continue;
    KPoly g = gcd(q, b - RatFunc(roots[i]) * dq);
    if (g.degree() > 0) out.emplace_back(roots[i], g);
  }
  return out;
}

}  // namespace

Integral integrate(const RatFunc& f, std::size_t v) {
  Integral out;
  if (f.is_zero()) return out;
  KPoly num = to_kpoly(f.num(), v), den = to_kpoly(f.den(), v);
  auto [q, r] = divmod(num, den);

  KPoly poly_part;
  {
    std::vector<RatFunc> c(q.coeffs().size() + 1);
    for (std::size_t i = 0; i < q.coeffs().size(); ++i)
      c[i + 1] = q.coeffs()[i] / RatFunc(static_cast<long>(i + 1));
    poly_part = KPoly(std::move(c));
  }
  out.rational = to_ratfunc(poly_part, v);
  if (r.is_zero()) return out;

  // Horowitz-Ostrogradsky: r/den = (A/Dg)' + B/Qs, Qs squarefree.
  KPoly dg = gcd(den, den.derivative());
  KPoly qs = quo(den, dg);
  KPoly A, B = r;
  if (dg.degree() > 0) {
    KPoly t = quo(qs * dg.derivative(), dg);
    std::size_t m = static_cast<std::size_t>(dg.degree()), k = static_cast<std::size_t>(qs.degree());
    std::size_t nrows = static_cast<std::size_t>(den.degree());
    Matrix<RatFunc> a(nrows, std::vector<RatFunc>(m + k));
    auto put = [&](std::size_t col, const KPoly& p) {
      for (std::size_t i = 0; i < p.coeffs().size() && i < nrows; ++i) a[i][col] = p.coeffs()[i];
    };
    for (std::size_t j = 0; j < m; ++j) {
      KPoly vj = KPoly::constant(RatFunc(1)).shift(j);
      put(j, vj.derivative() * qs - vj * t);
    }
    for (std::size_t j = 0; j < k; ++j) put(m + j, KPoly::constant(RatFunc(1)).shift(j) * dg);
    std::vector<RatFunc> rhs(nrows);
    for (std::size_t i = 0; i < nrows; ++i) rhs[i] = r.coeff(i);
    auto sol = solve_unique(a, rhs, m + k);
    if (!sol) throw Error("Hermite reduction failed");
    A = KPoly(std::vector<RatFunc>(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(m)));
    B = KPoly(std::vector<RatFunc>(sol->begin() + static_cast<std::ptrdiff_t>(m), sol->end()));
    out.rational += to_ratfunc(A, v) / to_ratfunc(dg, v);
  }
  if (B.is_zero()) return out;

  if (qs.degree() == 1) {
    out.logs.emplace_back(B.coeff(0) / qs.lc(), to_ratfunc(qs.monic(), v));
    return out;
  }
  RatFunc rest = to_ratfunc(B, v) / to_ratfunc(qs, v);
  for (const auto& [c, g] : rational_residues(qs, B)) {
    RatFunc gr = to_ratfunc(g.monic(), v);
    out.logs.emplace_back(RatFunc(c), gr);
    rest -= RatFunc(c) * diff(gr, v) / gr;
  }
  out.remainder = rest;
  return out;
}

LinDiffExpr exp_integral(const RatFunc& f, std::size_t v, bool* fallback) {
  Integral in = integrate(f, v);
  RatFunc factor(1);
  LinDiffExpr arg(in.rational);
  for (const auto& [c, p] : in.logs) {
    if (c.is_constant() && c.constant_value().get_den() == 1)
      factor *= p.pow(c.constant_value().get_num().get_si());
    else
      arg += LinDiffExpr::log(p).scaled(c);
  }
  if (!in.complete()) {
    arg += LinDiffExpr::antideriv(v, LinDiffExpr(in.remainder));
    if (fallback) *fallback = true;
  }
  return LinDiffExpr::exp(arg).scaled(factor);
}

}  // namespace dopfac
