#pragma once

#include <random>

#include "dopfac/ratfunc.hpp"
#include "dopfac/registry.hpp"

namespace gen {

using dopfac::MPoly;
using dopfac::RatFunc;

inline MPoly poly(std::mt19937& rng, int max_deg = 2, std::size_t nvars = 2, int max_terms = 3) {
  std::uniform_int_distribution<int> coef(-3, 3), deg(0, max_deg), nterms(1, max_terms);
  MPoly p;
  int n = nterms(rng);
  for (int t = 0; t < n; ++t) {
    dopfac::Exponents e;
    for (std::size_t v = 0; v < nvars; ++v) e.push_back(static_cast<std::uint32_t>(deg(rng)));
    int total = 0;
    for (auto x : e) total += static_cast<int>(x);
    if (total > max_deg) continue;
    p += MPoly::monomial(e, coef(rng));
  }
  return p;
}

inline MPoly nonzero_poly(std::mt19937& rng, int max_deg = 2, std::size_t nvars = 2) {
  MPoly p;
  while (p.is_zero()) p = poly(rng, max_deg, nvars);
  return p;
}

inline RatFunc ratfunc(std::mt19937& rng, int max_deg = 2, std::size_t nvars = 2) {
  return RatFunc(poly(rng, max_deg, nvars), nonzero_poly(rng, max_deg - 1 > 0 ? max_deg - 1 : 1, nvars));
}

inline RatFunc nonzero_ratfunc(std::mt19937& rng, int max_deg = 2, std::size_t nvars = 2) {
  RatFunc r;
  while (r.is_zero()) r = ratfunc(rng, max_deg, nvars);
  return r;
}

// x, y, z occupy registry slots 0, 1, 2 in every test binary.
inline void register_xyz() {
  dopfac::var("x");
  dopfac::var("y");
  dopfac::var("z");
}

}  // namespace gen

#include "dopfac/expr.hpp"
#include "dopfac/pdop.hpp"

namespace gen {

// Random linear expression in F(x), G(y), phi(x, x*y - z) and their low
// derivatives, with small rational coefficients.
inline dopfac::LinDiffExpr expr(std::mt19937& rng, int nterms = 3) {
  using dopfac::LinDiffExpr;
  std::uniform_int_distribution<int> pick(0, 4), d(0, 2);
  RatFunc x = RatFunc::variable(0), y = RatFunc::variable(1), z = RatFunc::variable(2);
  LinDiffExpr e = LinDiffExpr(ratfunc(rng, 1));
  for (int i = 0; i < nterms; ++i) {
    LinDiffExpr atom;
    switch (pick(rng)) {
      case 0:
        atom = LinDiffExpr::function("F", {x}, {static_cast<std::uint32_t>(d(rng))});
        break;
      case 1:
        atom = LinDiffExpr::function("G", {y}, {static_cast<std::uint32_t>(d(rng))});
        break;
      case 2:
        atom = LinDiffExpr::function("phi", {x, x * y - z},
                                     {static_cast<std::uint32_t>(d(rng)), static_cast<std::uint32_t>(d(rng))});
        break;
      case 3:
        atom = LinDiffExpr::exp(LinDiffExpr(x + 2 * y)) * LinDiffExpr::function("H", {x - y});
        break;
      default:
        atom = LinDiffExpr::log(x + 1) * LinDiffExpr::function("F", {y});
        break;
    }
    e += atom.scaled(ratfunc(rng, 1));
  }
  return e;
}

// Random operator in Dx, Dy of order <= max_order.
inline dopfac::PDOp pdop(std::mt19937& rng, int max_order = 2, int nterms = 3, int coef_deg = 1) {
  using dopfac::PDOp;
  std::uniform_int_distribution<int> o(0, max_order);
  PDOp L;
  for (int i = 0; i < nterms; ++i) {
    std::uint32_t a = static_cast<std::uint32_t>(o(rng)), b = static_cast<std::uint32_t>(o(rng));
    if (static_cast<int>(a + b) > max_order) continue;
    L += PDOp::monomial({a, b}, ratfunc(rng, coef_deg));
  }
  return L;
}

}  // namespace gen

#include "dopfac/lodo.hpp"

namespace gen {

// Random operator in K[D] with coefficients in Q(x).
inline dopfac::OrePoly orepoly(std::mt19937& rng, int max_order = 2, int coef_deg = 1) {
  std::uniform_int_distribution<int> o(0, max_order);
  int n = o(rng);
  std::vector<RatFunc> c;
  for (int i = 0; i <= n; ++i) c.push_back(ratfunc(rng, coef_deg, 1));
  if (c.back().is_zero()) c.back() = RatFunc(1);
  return dopfac::OrePoly(std::move(c), 0);
}

inline dopfac::OrePoly monic_orepoly(std::mt19937& rng, int min_order, int max_order, int coef_deg = 1) {
  std::uniform_int_distribution<int> o(min_order, max_order);
  int n = o(rng);
  std::vector<RatFunc> c;
  for (int i = 0; i < n; ++i) c.push_back(ratfunc(rng, coef_deg, 1));
  c.push_back(RatFunc(1));
  return dopfac::OrePoly(std::move(c), 0);
}

}  // namespace gen
