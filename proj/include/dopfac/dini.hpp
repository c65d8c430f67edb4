#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dopfac/expr.hpp"
#include "dopfac/pdop.hpp"
#include "dopfac/ratfunc.hpp"

namespace dopfac {

// sum_i vec[i] * D_i + scalar over the registry variables x, y, z.
struct FirstOrderOp {
  std::array<RatFunc, 3> vec;
  RatFunc scalar;

  static FirstOrderOp derivation(std::size_t i);  // i = 0, 1, 2 for x, y, z
  static FirstOrderOp function(const RatFunc& f);
  // Throws unless p has order <= 1 in Dx, Dy, Dz.
  static FirstOrderOp from_pdop(const PDOp& p);

  bool is_zero() const;
  FirstOrderOp vector_part() const { return {vec, RatFunc()}; }
  // The vector part acting as a derivation.
  RatFunc act(const RatFunc& f) const;
  PDOp to_pdop() const;
  std::string to_string() const;

  FirstOrderOp& operator+=(const FirstOrderOp& o);
  friend FirstOrderOp operator+(FirstOrderOp a, const FirstOrderOp& b) { return a += b; }
  friend FirstOrderOp operator-(FirstOrderOp a, const FirstOrderOp& b) { return a += b.scaled(-1); }
  FirstOrderOp scaled(const RatFunc& c) const;
  friend bool operator==(const FirstOrderOp&, const FirstOrderOp&) = default;
};

FirstOrderOp commutator(const FirstOrderOp& a, const FirstOrderOp& b);

struct FrameCoefficients {
  RatFunc c1, c2, c3, c0;
};
// W = c1*S1 + c2*S2 + c3*T + c0; empty when the frame does not span.
std::optional<FrameCoefficients> expand_in_frame(const FirstOrderOp& w, const FirstOrderOp& s1,
                                                 const FirstOrderOp& s2, const FirstOrderOp& t);

// L = S1*S2 + T + a with [S2, T] = K S1 + M S2 + N T and
// [S1, S2] = P S1 + Q S2 + R T. S1, S2 are taken without scalar parts.
struct DiniDecomposition {
  FirstOrderOp S1, S2, T;
  RatFunc a;
  RatFunc K, M, N, P, Q, R;
};

DiniDecomposition characteristic_decompose(const PDOp& L, const FirstOrderOp& s1,
                                           const FirstOrderOp& s2);

// S2(beta) - beta^2 R - (N + P) beta - K
RatFunc riccati_residual(const DiniDecomposition& d, const RatFunc& beta);

// Residuals of the four coefficient equations of
// [(V + b), (S2 + beta)] = mu (S2 + beta) + nu (V + b).
std::array<RatFunc, 4> alpha_equation_residual(const DiniDecomposition& d, const RatFunc& beta,
                                               const RatFunc& alpha, const RatFunc& mu,
                                               const RatFunc& nu);

// (S2 + beta) u = v, (V + b) u = -(S1 + alpha) v, and the operator L1 of v.
struct DiniTransform {
  DiniDecomposition dec;
  RatFunc beta, alpha, mu, nu, b;
  FirstOrderOp V;
  PDOp L1;
};

DiniTransform dini_transform(const PDOp& L, const FirstOrderOp& s1, const FirstOrderOp& s2,
                             const RatFunc& beta, const RatFunc& alpha);

struct BetaAnsatz {
  bool constants = true;
  bool reciprocal_linear = false;  // c / (p x + q y + r z + s), small p, q, r, s
  std::vector<RatFunc> user;
};
std::vector<RatFunc> beta_search(const DiniDecomposition& d, const BetaAnsatz& ansatz);

struct DiniCheck {
  std::string name;
  bool pass = false;
};
struct DiniReport {
  std::vector<DiniCheck> checks;
  bool all_pass() const;
};

// The three checks on L = DxDy + x DxDz - Dz for a candidate v of X2 X1 v = 0.
DiniReport check_dini_solution(const LinDiffExpr& v);
// v = int phi(x, x y - z) dx + psi(y, z)
LinDiffExpr dini_example_solution();
DiniReport verify_dini_example();

}  // namespace dopfac
