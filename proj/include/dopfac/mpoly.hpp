#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dopfac {

using Rat = mpq_class;
using Int = mpz_class;

Rat make_rat(long num, long den = 1);
std::string to_string(const Rat& r);

// Exponent vector indexed by registry position. Trailing zeros are always
// trimmed, so vectors of different lengths compare as if zero-extended.
using Exponents = std::vector<std::uint32_t>;

void trim(Exponents& e);
Exponents exp_mul(const Exponents& a, const Exponents& b);
std::optional<Exponents> exp_div(const Exponents& a, const Exponents& b);
std::uint32_t exp_at(const Exponents& e, std::size_t v);
std::uint64_t exp_degree(const Exponents& e);
Exponents unit_exponent(std::size_t v, std::uint32_t power = 1);

// Graded lexicographic comparison, variable 0 most significant.
int grlex_compare(const Exponents& a, const Exponents& b);

struct GrlexGreater {
  bool operator()(const Exponents& a, const Exponents& b) const {
    return grlex_compare(a, b) > 0;
  }
};

// Sparse distributed multivariate polynomial over Q. Terms are kept in
// descending graded-lex order, so the first entry is the leading term.
class MPoly {
 public:
  using Terms = std::map<Exponents, Rat, GrlexGreater>;

  MPoly() = default;
  MPoly(const Rat& c);  // NOLINT(google-explicit-constructor)
  MPoly(long c) : MPoly(Rat(c)) {}  // NOLINT(google-explicit-constructor)

  static MPoly variable(std::size_t v);
  static MPoly monomial(Exponents e, const Rat& c);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  bool is_one() const;
  Rat constant_term() const;
  std::size_t num_terms() const { return terms_.size(); }

  // Leading term under graded lex; undefined for the zero polynomial.
  const Exponents& leading_exponents() const { return terms_.begin()->first; }
  const Rat& leading_coeff() const { return terms_.begin()->second; }

  std::uint64_t total_degree() const;
  std::uint32_t degree_in(std::size_t v) const;
  std::uint32_t min_degree_in(std::size_t v) const;
  bool depends_on(std::size_t v) const;
  std::vector<std::size_t> variables() const;

  MPoly& operator+=(const MPoly& o);
  MPoly& operator-=(const MPoly& o);
  MPoly& operator*=(const MPoly& o);
  MPoly& operator*=(const Rat& c);
  friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
  friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
  friend MPoly operator*(const MPoly& a, const MPoly& b);
  friend MPoly operator*(MPoly a, const Rat& c) { return a *= c; }
  friend MPoly operator*(const Rat& c, MPoly a) { return a *= c; }
  friend MPoly operator*(MPoly a, long c) { return a *= Rat(c); }
  friend MPoly operator*(long c, MPoly a) { return a *= Rat(c); }
  MPoly operator-() const;

  MPoly pow(unsigned n) const;
  MPoly mul_monomial(const Exponents& e, const Rat& c) const;
  MPoly derivative(std::size_t v) const;
  MPoly substitute(std::size_t v, const MPoly& value) const;

  // Coefficients as a polynomial in variable v: result[i] multiplies v^i.
  std::vector<MPoly> coefficients_in(std::size_t v) const;
  static MPoly from_coefficients(std::size_t v, const std::vector<MPoly>& c);

  // Divides by the leading coefficient; zero stays zero.
  MPoly monic() const;

  friend bool operator==(const MPoly& a, const MPoly& b) = default;
  friend int compare(const MPoly& a, const MPoly& b);

  std::string to_string() const;

 private:
  void add_term(const Exponents& e, const Rat& c);
  Terms terms_;
};

// Exact quotient p/q when q divides p, otherwise nullopt.
std::optional<MPoly> divide_exact(const MPoly& p, const MPoly& q);

// Multivariate division remainder of p by a single divisor (graded lex).
MPoly reduce_by(const MPoly& p, const MPoly& q);

// Monic GCD by content/primitive-part recursion on the last occurring
// variable. gcd(p, 0) = monic(p); gcd(0, 0) = 0.
MPoly gcd(const MPoly& p, const MPoly& q);

// Content of p with respect to v (monic GCD of its coefficients in v).
MPoly content_in(const MPoly& p, std::size_t v);

}  // namespace dopfac
