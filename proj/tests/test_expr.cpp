#include <random>

#include "doctest.h"
#include "dopfac/expr.hpp"
#include "dopfac/registry.hpp"
#include "gen.hpp"

using namespace dopfac;

namespace {

struct Env {
  Env() { gen::register_xyz(); }
  std::size_t ix = var("x"), iy = var("y"), iz = var("z");
  RatFunc x = RatFunc::variable("x"), y = RatFunc::variable("y"), z = RatFunc::variable("z");
  PDOp Dx = PDOp::derivation(ix), Dy = PDOp::derivation(iy), Dz = PDOp::derivation(iz);
  LinDiffExpr F(std::uint32_t k = 0) const { return LinDiffExpr::function("F", {x}, {k}); }
  LinDiffExpr G(std::uint32_t k = 0) const { return LinDiffExpr::function("G", {y}, {k}); }
  LinDiffExpr phi(std::uint32_t a = 0, std::uint32_t b = 0) const {
    return LinDiffExpr::function("phi", {x, x * y - z}, {a, b});
  }
};

}  // namespace

TEST_CASE("antiderivative along its own variable") {
  Env e;
  LinDiffExpr v = LinDiffExpr::antideriv(e.ix, e.phi());
  CHECK(diff_expr(v, e.ix) == e.phi());
  CHECK_THROWS_AS(diff_expr(v, e.iy), UnderdeterminedDerivative);
  LinDiffExpr w = LinDiffExpr::antideriv(e.ix, e.G());
  CHECK(diff_expr(w, e.iz).is_zero());
}

TEST_CASE("chain rule on a two-slot function") {
  Env e;
  CHECK(diff_expr(e.phi(), e.iy) == e.phi(0, 1).scaled(e.x));
  CHECK(diff_expr(e.phi(), e.ix) == e.phi(1, 0) + e.phi(0, 1).scaled(e.y));
  CHECK(diff_expr(e.phi(), e.iz) == -e.phi(0, 1));
}

TEST_CASE("Example 1 solution is annihilated") {
  Env e;
  PDOp L = e.Dx * e.Dy - PDOp(2 / (e.x + e.y).pow(2));
  LinDiffExpr u = (e.F() + e.G()).scaled(-2 / (e.x + e.y)) + e.F(1) + e.G(1);
  CHECK(is_zero(apply_pdop(L, u)));
  CHECK(!is_zero(apply_pdop(L, e.F() + e.G())));
}

TEST_CASE("Example 2 solution is annihilated") {
  Env e;
  PDOp L = e.Dx * e.Dy - PDOp(6 / (e.x + e.y).pow(2));
  LinDiffExpr u = (e.F() + e.G()).scaled(12 / (e.x + e.y).pow(2)) -
                  (e.F(1) + e.G(1)).scaled(6 / (e.x + e.y)) + e.F(2) + e.G(2);
  CHECK(is_zero(apply_pdop(L, u)));
}

TEST_CASE("characteristic function of Dy + x Dz") {
  Env e;
  PDOp X2 = e.Dy + e.Dz.scaled(e.x);
  CHECK(is_zero(apply_pdop(X2, e.phi())));
  LinDiffExpr wrong = LinDiffExpr::function("phi", {e.x, e.x * e.y + e.z});
  CHECK(!is_zero(apply_pdop(X2, wrong)));
}

TEST_CASE("apply_pdop picks a differentiation order") {
  Env e;
  LinDiffExpr v = LinDiffExpr::antideriv(e.ix, e.phi()) + LinDiffExpr::function("psi", {e.y, e.z});
  PDOp X1 = e.Dx, X2 = e.Dy + e.Dz.scaled(e.x);
  CHECK(is_zero(apply_pdop(X2 * X1, v)));
  CHECK_THROWS_AS(apply_pdop(e.Dy, v), UnderdeterminedDerivative);
}

TEST_CASE("zero test basics") {
  Env e;
  CHECK(is_zero(e.F(1) - e.F(1)));
  CHECK(!is_zero(e.F() + e.G()));
  CHECK(e.F(1).to_string() == "F'(x)");
  CHECK(e.phi(0, 1).to_string() == "D[phi,0,1](x, x*y - z)");
}

TEST_CASE("exponentials merge and products stay linear") {
  Env e;
  LinDiffExpr a = LinDiffExpr::exp(LinDiffExpr(e.x)), b = LinDiffExpr::exp(LinDiffExpr(e.y));
  CHECK(a * b == LinDiffExpr::exp(LinDiffExpr(e.x + e.y)));
  CHECK(a * LinDiffExpr::exp(LinDiffExpr(-e.x)) == LinDiffExpr(1));
  CHECK(diff_expr(a * e.G(), e.ix) == a * e.G());
  CHECK_THROWS_AS(e.F() * e.G(), Error);
  CHECK(diff_expr(LinDiffExpr::log(e.x * e.x), e.ix) == LinDiffExpr(2 / e.x));
}

TEST_CASE("diff_expr Leibniz rule on random data") {
  Env e;
  std::mt19937 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    RatFunc a = gen::ratfunc(rng, 2, 3), b = gen::ratfunc(rng, 2, 3);
    LinDiffExpr e1 = gen::expr(rng), e2 = gen::expr(rng);
    std::size_t v = static_cast<std::size_t>(i % 3);
    LinDiffExpr lhs = diff_expr(e1.scaled(a) + e2.scaled(b), v);
    LinDiffExpr rhs = diff_expr(e1, v).scaled(a) + diff_expr(e2, v).scaled(b) +
                      e1.scaled(diff(a, v)) + e2.scaled(diff(b, v));
    CHECK(lhs == rhs);
    CHECK(is_zero(e1 - e1));
  }
}

TEST_CASE("mixed partials commute") {
  Env e;
  std::mt19937 rng(77);
  for (int i = 0; i < 1000; ++i) {
    LinDiffExpr u = gen::expr(rng);
    std::size_t v = static_cast<std::size_t>(i % 3), w = static_cast<std::size_t>((i / 3) % 3);
    CHECK(diff_expr(diff_expr(u, v), w) == diff_expr(diff_expr(u, w), v));
  }
}

TEST_CASE("apply_pdop respects composition") {
  Env e;
  std::mt19937 rng(5);
  for (int i = 0; i < 1000; ++i) {
    PDOp L = gen::pdop(rng, 1, 2), M = gen::pdop(rng, 1, 2);
    LinDiffExpr u = gen::expr(rng, 2);
    CHECK(apply_pdop(L * M, u) == apply_pdop(L, apply_pdop(M, u)));
  }
}
