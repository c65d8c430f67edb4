#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dopfac/mpoly.hpp"

namespace dopfac {

// Reduced quotient num/den of polynomials over Q. Invariants: den != 0,
// gcd(num, den) = 1, den has leading coefficient 1, zero is 0/1.
class RatFunc {
 public:
  RatFunc() : den_(1) {}
  RatFunc(const Rat& c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  RatFunc(long c) : num_(c), den_(1) {}        // NOLINT(google-explicit-constructor)
  RatFunc(MPoly p) : num_(std::move(p)), den_(1) {}  // NOLINT(google-explicit-constructor)
  RatFunc(const MPoly& num, const MPoly& den);

  static RatFunc variable(std::size_t v) { return RatFunc(MPoly::variable(v)); }
  static RatFunc variable(std::string_view name);

  const MPoly& num() const { return num_; }
  const MPoly& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_one(); }
  bool is_polynomial() const { return den_.is_one(); }
  Rat constant_value() const { return num_.constant_term(); }
  bool depends_on(std::size_t v) const {
    return num_.depends_on(v) || den_.depends_on(v);
  }
  std::vector<std::size_t> variables() const;

  RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
  RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
  RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
  RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }
  friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
  RatFunc operator-() const;
  friend RatFunc diff(const RatFunc& f, std::size_t v);

  RatFunc inverse() const;
  RatFunc pow(long n) const;
  RatFunc substitute(std::size_t v, const RatFunc& value) const;

  friend bool operator==(const RatFunc& a, const RatFunc& b) = default;
  friend int compare(const RatFunc& a, const RatFunc& b);
  friend bool operator<(const RatFunc& a, const RatFunc& b) {
    return compare(a, b) < 0;
  }

  // Parseable canonical text, e.g. "2/(x^2 + 2*x*y + y^2)".
  std::string to_string() const;

 private:
  struct Reduced {};
  RatFunc(MPoly num, MPoly den, Reduced) : num_(std::move(num)), den_(std::move(den)) {}
  static RatFunc normalized(MPoly num, MPoly den);
  // num/den with a known common factor removed; the rest must be coprime.
  static RatFunc normalized_with(MPoly num, MPoly den, const MPoly& common);

  MPoly num_;
  MPoly den_;
};

RatFunc diff(const RatFunc& f, std::size_t v);

// g with g^2 = f when f is a perfect square in Q(vars), else nullopt.
std::optional<RatFunc> sqrt_test(const RatFunc& f);
std::optional<MPoly> poly_sqrt(const MPoly& p);

// Rational roots, with multiplicity, of a nonzero univariate polynomial.
std::vector<Rat> rational_roots(const MPoly& p);

}  // namespace dopfac
