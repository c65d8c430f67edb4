#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "dopfac/ratfunc.hpp"

namespace dopfac {

// Linear partial differential operator sum_alpha c_alpha * D^alpha with the
// coefficient written to the left. The multi-index alpha is an exponent
// vector over registry variables: D^(1,1) = Dx*Dy when x, y are at 0, 1.
class PDOp {
 public:
  using Terms = std::map<Exponents, RatFunc, GrlexGreater>;

  PDOp() = default;
  PDOp(const RatFunc& c);  // NOLINT(google-explicit-constructor)
  PDOp(long c) : PDOp(RatFunc(c)) {}  // NOLINT(google-explicit-constructor)
  static PDOp derivation(std::size_t v);
  static PDOp monomial(Exponents alpha, const RatFunc& c);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::uint64_t order() const;
  RatFunc coeff(const Exponents& alpha) const;
  std::vector<std::size_t> derivation_vars() const;

  // Homogeneous part of the given total order.
  PDOp part_of_order(std::uint64_t k) const;

  PDOp& operator+=(const PDOp& o);
  PDOp& operator-=(const PDOp& o);
  friend PDOp operator+(PDOp a, const PDOp& b) { return a += b; }
  friend PDOp operator-(PDOp a, const PDOp& b) { return a -= b; }
  PDOp operator-() const;
  // Composition (noncommutative): (a D^alpha)(b D^beta) expands by Leibniz.
  friend PDOp operator*(const PDOp& a, const PDOp& b);
  // Left multiplication by a function: c * L.
  PDOp scaled(const RatFunc& c) const;

  friend bool operator==(const PDOp& a, const PDOp& b) = default;

  std::string to_string() const;

 private:
  void add_term(const Exponents& alpha, const RatFunc& c);
  Terms terms_;
};

std::string derivation_monomial_string(const Exponents& alpha,
                                       const std::string& prefix = "D");

// "c*rest" with sign handling for sums; appends to out.
void append_signed_term(std::string& out, const RatFunc& c, const std::string& rest);

}  // namespace dopfac
