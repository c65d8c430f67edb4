#include "dopfac/pdop.hpp"

#include <set>

#include "dopfac/registry.hpp"

namespace dopfac {

PDOp::PDOp(const RatFunc& c) {
  if (!c.is_zero()) terms_.emplace(Exponents{}, c);
}

PDOp PDOp::derivation(std::size_t v) { return monomial(unit_exponent(v), RatFunc(1)); }

PDOp PDOp::monomial(Exponents alpha, const RatFunc& c) {
  PDOp p;
  trim(alpha);
  if (!c.is_zero()) p.terms_.emplace(std::move(alpha), c);
  return p;
}

std::uint64_t PDOp::order() const {
  return terms_.empty() ? 0 : exp_degree(terms_.begin()->first);
}

RatFunc PDOp::coeff(const Exponents& alpha) const {
  Exponents a(alpha);
  trim(a);
  auto it = terms_.find(a);
  return it == terms_.end() ? RatFunc() : it->second;
}

std::vector<std::size_t> PDOp::derivation_vars() const {
  std::set<std::size_t> vs;
  for (const auto& [a, c] : terms_)
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i]) vs.insert(i);
  return {vs.begin(), vs.end()};
}

PDOp PDOp::part_of_order(std::uint64_t k) const {
  PDOp r;
  for (const auto& [a, c] : terms_)
    if (exp_degree(a) == k) r.terms_.emplace(a, c);
  return r;
}

void PDOp::add_term(const Exponents& alpha, const RatFunc& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(alpha, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

PDOp& PDOp::operator+=(const PDOp& o) {
  for (const auto& [a, c] : o.terms_) add_term(a, c);
  return *this;
}

PDOp& PDOp::operator-=(const PDOp& o) {
  for (const auto& [a, c] : o.terms_) add_term(a, -c);
  return *this;
}

PDOp PDOp::operator-() const {
  PDOp r(*this);
  for (auto& [a, c] : r.terms_) c = -c;
  return r;
}

PDOp PDOp::scaled(const RatFunc& c) const {
  PDOp r;
  if (c.is_zero()) return r;
  for (const auto& [a, x] : terms_) r.add_term(a, c * x);
  return r;
}

namespace {

// D_v o M = sum (d_v b) D^beta + b D^(beta + e_v)
PDOp apply_derivation(std::size_t v, const PDOp& m) {
  PDOp r;
  Exponents ev = unit_exponent(v);
  for (const auto& [b, c] : m.terms()) {
    r += PDOp::monomial(b, diff(c, v));
    r += PDOp::monomial(exp_mul(b, ev), c);
  }
  return r;
}

}  // namespace

PDOp operator*(const PDOp& a, const PDOp& b) {
  PDOp r;
  if (a.is_zero() || b.is_zero()) return r;
  std::map<Exponents, PDOp> memo;  // D^alpha o b
  memo.emplace(Exponents{}, b);
  auto power = [&](auto&& self, const Exponents& alpha) -> const PDOp& {
    if (auto it = memo.find(alpha); it != memo.end()) return it->second;
    std::size_t v = 0;
    while (exp_at(alpha, v) == 0) ++v;
    Exponents lower(alpha);
    lower[v] -= 1;
    trim(lower);
    PDOp value = apply_derivation(v, self(self, lower));
    return memo.emplace(alpha, std::move(value)).first->second;
  };
  for (const auto& [alpha, c] : a.terms_) r += power(power, alpha).scaled(c);
  return r;
}

std::string derivation_monomial_string(const Exponents& alpha, const std::string& prefix) {
  std::string s;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] == 0) continue;
    if (!s.empty()) s += '*';
    s += prefix + var_name(i);
    if (alpha[i] > 1) s += "^" + std::to_string(alpha[i]);
  }
  return s;
}

void append_signed_term(std::string& out, const RatFunc& c, const std::string& rest) {
  bool neg = c.num().leading_coeff() < 0;
  RatFunc m = neg ? -c : c;
  if (out.empty()) {
    if (neg) out += "-";
  } else {
    out += neg ? " - " : " + ";
  }
  bool simple = m.is_polynomial() && m.num().num_terms() == 1;
  if (rest.empty()) {
    out += simple ? m.to_string() : "(" + m.to_string() + ")";
  } else if (m.is_constant() && m.constant_value() == 1) {
    out += rest;
  } else {
    out += (simple ? m.to_string() : "(" + m.to_string() + ")") + "*" + rest;
  }
}

std::string PDOp::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [a, c] : terms_) append_signed_term(out, c, derivation_monomial_string(a));
  return out;
}

}  // namespace dopfac
