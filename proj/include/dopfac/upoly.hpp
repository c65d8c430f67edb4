#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "dopfac/error.hpp"

namespace dopfac {

// Dense univariate polynomial over a field F (Rat or RatFunc).
// Coefficient i multiplies t^i; the zero polynomial has no coefficients.
template <class F>
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(std::vector<F> c) : c_(std::move(c)) { trim(); }
  static UPoly constant(const F& a) { return UPoly(std::vector<F>{a}); }
  static UPoly t() { return UPoly(std::vector<F>{F(0L), F(1L)}); }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const F& lc() const { return c_.back(); }
  const std::vector<F>& coeffs() const { return c_; }
  F coeff(std::size_t i) const { return i < c_.size() ? c_[i] : F(0L); }

  UPoly operator-() const {
    UPoly r(*this);
    for (auto& a : r.c_) a = -a;
    return r;
  }
  friend UPoly operator+(const UPoly& a, const UPoly& b) {
    std::vector<F> r(std::max(a.c_.size(), b.c_.size()), F(0L));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] = r[i] + a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] = r[i] + b.c_[i];
    return UPoly(std::move(r));
  }
  friend UPoly operator-(const UPoly& a, const UPoly& b) { return a + (-b); }
  friend UPoly operator*(const UPoly& a, const UPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<F> r(a.c_.size() + b.c_.size() - 1, F(0L));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == F(0L)) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] = r[i + j] + a.c_[i] * b.c_[j];
    }
    return UPoly(std::move(r));
  }
  friend UPoly operator*(const F& s, const UPoly& a) {
    std::vector<F> r(a.c_);
    for (auto& x : r) x = s * x;
    return UPoly(std::move(r));
  }
  friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }

  UPoly shift(std::size_t k) const {
    if (is_zero()) return {};
    std::vector<F> r(k, F(0L));
    r.insert(r.end(), c_.begin(), c_.end());
    return UPoly(std::move(r));
  }

  UPoly derivative() const {
    std::vector<F> r;
    for (std::size_t i = 1; i < c_.size(); ++i) r.push_back(c_[i] * F(static_cast<long>(i)));
    return UPoly(std::move(r));
  }

  F eval(const F& t) const {
    F r(0L);
    for (std::size_t i = c_.size(); i-- > 0;) r = r * t + c_[i];
    return r;
  }

  UPoly monic() const {
    if (is_zero()) return {};
    F inv = F(1L) / lc();
    return inv * *this;
  }

  // Quotient and remainder with deg r < deg b.
  friend std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
    if (b.is_zero()) throw Error("division by zero polynomial");
    UPoly r(a);
    std::vector<F> q(a.degree() >= b.degree() ? a.degree() - b.degree() + 1 : 0, F(0L));
    while (!r.is_zero() && r.degree() >= b.degree()) {
      std::size_t k = static_cast<std::size_t>(r.degree() - b.degree());
      F f = r.lc() / b.lc();
      q[k] = f;
      r = r - (f * b).shift(k);
    }
    return {UPoly(std::move(q)), r};
  }

  friend UPoly gcd(UPoly a, UPoly b) {
    while (!b.is_zero()) {
      UPoly r = divmod(a, b).second;
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();
  }

  // s*a + t*b = g (monic gcd).
  struct Bezout {
    UPoly s, t, g;
  };
  friend Bezout ext_gcd(const UPoly& a, const UPoly& b) {
    UPoly r0 = a, r1 = b, s0 = constant(F(1L)), s1, t0, t1 = constant(F(1L));
    while (!r1.is_zero()) {
      auto [q, r] = divmod(r0, r1);
      UPoly s2 = s0 - q * s1, t2 = t0 - q * t1;
      r0 = std::move(r1);
      r1 = std::move(r);
      s0 = std::move(s1);
      s1 = std::move(s2);
      t0 = std::move(t1);
      t1 = std::move(t2);
    }
    if (r0.is_zero()) return {s0, t0, r0};
    F inv = F(1L) / r0.lc();
    return {inv * s0, inv * t0, inv * r0};
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == F(0L)) c_.pop_back();
  }
  std::vector<F> c_;
};

// Resultant over a field by the Euclidean recursion
// res(a, b) = (-1)^(deg a * deg b) lc(b)^(deg a - deg r) res(b, a mod b).
template <class F>
F resultant(UPoly<F> a, UPoly<F> b) {
  if (a.is_zero() || b.is_zero()) return F(0L);
  F result(1L);
  while (true) {
    int da = a.degree(), db = b.degree();
    if (db == 0) {
      F p(1L);
      for (int i = 0; i < da; ++i) p = p * b.lc();
      return result * p;
    }
    if (da < db) {
      if ((da * db) % 2 == 1) result = -result;
      std::swap(a, b);
      continue;
    }
    UPoly<F> r = divmod(a, b).second;
    if (r.is_zero()) return F(0L);
    int dr = r.degree();
    if ((da * db) % 2 == 1) result = -result;
    F p(1L);
    for (int i = 0; i < da - dr; ++i) p = p * b.lc();
    result = result * p;
    a = std::move(b);
    b = std::move(r);
  }
}

}  // namespace dopfac
