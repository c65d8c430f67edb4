#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "dopfac/expr.hpp"
#include "dopfac/ratfunc.hpp"

namespace dopfac {

// Antiderivative of a rational function in one variable, the others being
// constants: rational part + sum c_i log(p_i) + an unintegrated remainder.
struct Integral {
  RatFunc rational;
  std::vector<std::pair<RatFunc, RatFunc>> logs;  // (c_i, p_i)
  RatFunc remainder;                              // zero when fully integrated

  bool complete() const { return remainder.is_zero(); }
};

Integral integrate(const RatFunc& f, std::size_t v);

// exp(integral of f dv) as an expression; integer log coefficients become
// rational powers. Sets *fallback when a formal antiderivative remains.
LinDiffExpr exp_integral(const RatFunc& f, std::size_t v, bool* fallback = nullptr);

}  // namespace dopfac
