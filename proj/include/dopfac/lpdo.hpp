#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dopfac/expr.hpp"
#include "dopfac/pdop.hpp"
#include "dopfac/ratfunc.hpp"

namespace dopfac {

// Commutative polynomial in xi_v (one per derivation) with RatFunc
// coefficients. Used for principal symbols and their linear factors.
class SymbolPoly {
 public:
  using Terms = std::map<Exponents, RatFunc, GrlexGreater>;

  SymbolPoly() = default;
  static SymbolPoly xi(std::size_t v);
  static SymbolPoly monomial(Exponents e, const RatFunc& c);
  static SymbolPoly constant(const RatFunc& c) { return monomial({}, c); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::uint64_t degree() const;
  RatFunc coeff(const Exponents& e) const;
  bool is_homogeneous() const;

  SymbolPoly& operator+=(const SymbolPoly& o);
  friend SymbolPoly operator+(SymbolPoly a, const SymbolPoly& b) { return a += b; }
  friend SymbolPoly operator-(SymbolPoly a, const SymbolPoly& b) { return a += b.scaled(RatFunc(-1)); }
  friend SymbolPoly operator*(const SymbolPoly& a, const SymbolPoly& b);
  SymbolPoly scaled(const RatFunc& c) const;
  friend bool operator==(const SymbolPoly& a, const SymbolPoly& b) = default;

  // e.g. "xi_x^2 + x*xi_x*xi_y"
  std::string to_string() const;

 private:
  void add_term(const Exponents& e, const RatFunc& c);
  Terms terms_;
};

SymbolPoly principal_symbol(const PDOp& L);

struct SymbolFactorization {
  RatFunc scale;                    // product = scale * prod(factors)
  std::vector<SymbolPoly> factors;  // linear forms, leading coefficient 1
};
// nullopt when no factorization over K exists; throws "unsupported shape"
// for cases outside the implemented ones.
std::optional<SymbolFactorization> factor_symbol(const SymbolPoly& s);

// L = DxDy + a Dx + b Dy + c in the registry variables x, y.
struct HyperbolicForm {
  RatFunc a, b, c;
  friend bool operator==(const HyperbolicForm&, const HyperbolicForm&) = default;
};

std::size_t hx();  // registry index of x
std::size_t hy();  // registry index of y

HyperbolicForm to_hyperbolic(const PDOp& L);
PDOp to_pdop(const HyperbolicForm& H);

struct Invariants {
  RatFunc h, k;
};
Invariants laplace_invariants(const HyperbolicForm& H);

// h = 0: (Dx + b)(Dy + a); else k = 0: (Dy + a)(Dx + b); else nullopt.
std::optional<std::pair<PDOp, PDOp>> naive_factor(const HyperbolicForm& H);

enum class Direction { Plus, Minus };

// forward maps a solution u of the source to a solution of the target;
// pullback maps a target solution back to a source solution.
struct Substitution {
  PDOp forward, pullback;
};

struct LaplaceStep {
  HyperbolicForm H;
  Invariants inv;
  Substitution sub;
};

LaplaceStep laplace_step(const HyperbolicForm& H, Direction dir);

struct LaplaceDirection {
  std::vector<LaplaceStep> steps;
  bool terminated = false;
};

struct LaplaceChain {
  HyperbolicForm center;
  Invariants center_inv;
  LaplaceDirection plus, minus;
};

LaplaceChain laplace_cascade(const HyperbolicForm& H, unsigned max_steps = 12);

struct BuiltSolution {
  LinDiffExpr u;
  bool integration_fallback = false;
};
// Requires both directions terminated; the result is re-verified.
BuiltSolution build_solution(const LaplaceChain& chain);

bool verify_solution(const PDOp& L, const LinDiffExpr& u);

}  // namespace dopfac
