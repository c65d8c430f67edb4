#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dopfac/ratfunc.hpp"

namespace dopfac {

// Element sum_i c[i] D^i of K[D], D = d/d(var), coefficients on the left.
class OrePoly {
 public:
  OrePoly() = default;
  OrePoly(std::vector<RatFunc> coeffs, std::size_t var);
  OrePoly(const RatFunc& c, std::size_t var) : OrePoly(std::vector<RatFunc>{c}, var) {}
  static OrePoly D(std::size_t var, unsigned power = 1);

  std::size_t var() const { return var_; }
  const std::vector<RatFunc>& coeffs() const { return c_; }
  RatFunc coeff(std::size_t i) const { return i < c_.size() ? c_[i] : RatFunc(); }
  bool is_zero() const { return c_.empty(); }
  // -1 for the zero operator.
  int order() const { return static_cast<int>(c_.size()) - 1; }
  const RatFunc& lc() const { return c_.back(); }
  bool is_reduced() const { return !c_.empty() && c_.back() == RatFunc(1); }
  OrePoly monic() const;

  OrePoly& operator+=(const OrePoly& o);
  OrePoly& operator-=(const OrePoly& o);
  friend OrePoly operator+(OrePoly a, const OrePoly& b) { return a += b; }
  friend OrePoly operator-(OrePoly a, const OrePoly& b) { return a -= b; }
  OrePoly operator-() const;
  friend OrePoly operator*(const OrePoly& a, const OrePoly& b);
  OrePoly scaled(const RatFunc& f) const;  // f * L

  // L(f) for a rational function f.
  RatFunc apply(const RatFunc& f) const;

  friend bool operator==(const OrePoly& a, const OrePoly& b) {
    return a.var_ == b.var_ && a.c_ == b.c_;
  }

  std::string to_string() const;

 private:
  void trim();
  std::vector<RatFunc> c_;
  std::size_t var_ = 0;
};

enum class Side { Right, Left };

struct DivResult {
  OrePoly quotient, remainder;
};
// Right: L = Q*M + R. Left: L = M*Q + R. ord R < ord M.
DivResult divide(const OrePoly& L, const OrePoly& M, Side side = Side::Right);

struct GcdLcm {
  OrePoly gcd, lcm;
};
GcdLcm gcd_lcm(const OrePoly& L, const OrePoly& M, Side side = Side::Right);

struct BezoutSolution {
  OrePoly X, Y;
};
// Right: X*L + Y*M = B. Left: L*X + M*Y = B.
std::optional<BezoutSolution> bezout(const OrePoly& L, const OrePoly& M, const OrePoly& B,
                                     Side side = Side::Right);

// <L -> B -> L1>: rLCM(L, B) = L1*B = B1*L with L1 monic. Binv satisfies
// Binv*B = 1 modulo the left ideal generated by L.
struct TransformCert {
  OrePoly L, B, L1, B1, Binv;
};
std::optional<TransformCert> transform(const OrePoly& L, const OrePoly& B);
bool check_transform(const TransformCert& cert);

// P1 with P*Q = P1*Q1 when Q1 is a right factor of P*Q.
std::optional<OrePoly> interchange(const OrePoly& P, const OrePoly& Q, const OrePoly& Q1);

OrePoly adjoint(const OrePoly& L);

// Basis of rational solutions of L y = 0 (coefficients must lie in Q(var)).
std::vector<RatFunc> rational_kernel(const OrePoly& L, unsigned cap = 30);

struct SimilarityWitness {
  std::size_t from_factorization, from_index, to_factorization, to_index;
  OrePoly B;
};
struct JhReport {
  std::vector<std::size_t> lengths;
  std::vector<std::vector<int>> orders;
  bool lengths_equal = true;
  bool orders_match = true;  // sorted order multisets agree
  std::vector<bool> witness_ok;
};
// Throws when a listed product differs from L.
JhReport jh_check(const OrePoly& L, const std::vector<std::vector<OrePoly>>& factorizations,
                  const std::vector<SimilarityWitness>& witnesses = {});

// Bounded search for B (order < ord L, polynomial coefficients of degree
// <= max_degree) realizing <L -> B -> M>.
std::optional<TransformCert> find_similarity(const OrePoly& L, const OrePoly& M,
                                             unsigned max_degree);

}  // namespace dopfac
