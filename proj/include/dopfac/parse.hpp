#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "dopfac/ccsys.hpp"
#include "dopfac/expr.hpp"
#include "dopfac/lodo.hpp"
#include "dopfac/pdop.hpp"
#include "dopfac/ratfunc.hpp"

namespace dopfac {

// Syntax tree shared by every input context. Identifiers D and D<letter>
// are derivation symbols; other identifiers are variables, or function
// names when followed by an argument list.
struct Ast {
  enum class Kind { Number, Variable, Derivation, Call, Neg, Add, Sub, Mul, Div, Pow };
  Kind kind = Kind::Number;
  std::size_t pos = 0;
  std::string name;          // Variable, Call; Derivation: the variable ("" for bare D)
  Rat number;                // Number
  unsigned primes = 0;       // Call: F''(x)
  Exponents deriv;           // Call: D[F,i,j](...)
  bool explicit_deriv = false;
  unsigned power = 0;        // Pow
  std::vector<Ast> kids;
};

// Precedence: + - below * / (and juxtaposition) below unary minus below ^.
Ast parse_ast(std::string_view text);

RatFunc parse_ratfunc(std::string_view text);
// D, or D<var> for the operator variable; other derivations are rejected.
OrePoly parse_lodo(std::string_view text, std::size_t var);
PDOp parse_pdop(std::string_view text);
// Arbitrary functions F(args), F'(x), D[F,1,0](x, y), exp(..), log(..),
// int(x; ..).
LinDiffExpr parse_expr(std::string_view text);

// One equation per line, "lhs = rhs" or just "lhs"; identifiers other
// than derivations are unknowns. Unknowns are ordered by name (u2 < u10).
CCSystem parse_system(std::string_view text);
CCOperator parse_cc_operator(std::string_view text);
// "u3>u2>u1;Dx>Dy"; either half may be omitted.
ModuleOrder parse_order(std::string_view text, const CCSystem& s);

}  // namespace dopfac
