#include "dopfac/mpoly.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "dopfac/error.hpp"
#include "dopfac/registry.hpp"
#include "dopfac/upoly.hpp"

namespace dopfac {

Rat make_rat(long num, long den) {
  if (den == 0) throw Error("zero denominator in rational constant");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

std::string to_string(const Rat& r) { return r.get_str(); }

void trim(Exponents& e) {
  while (!e.empty() && e.back() == 0) e.pop_back();
}

Exponents exp_mul(const Exponents& a, const Exponents& b) {
  Exponents r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

std::optional<Exponents> exp_div(const Exponents& a, const Exponents& b) {
  if (b.size() > a.size()) {
    for (std::size_t i = a.size(); i < b.size(); ++i)
      if (b[i] != 0) return std::nullopt;
  }
  Exponents r(a);
  for (std::size_t i = 0; i < b.size() && i < a.size(); ++i) {
    if (b[i] > a[i]) return std::nullopt;
    r[i] -= b[i];
  }
  trim(r);
  return r;
}

std::uint32_t exp_at(const Exponents& e, std::size_t v) {
  return v < e.size() ? e[v] : 0;
}

std::uint64_t exp_degree(const Exponents& e) {
  std::uint64_t d = 0;
  for (auto x : e) d += x;
  return d;
}

Exponents unit_exponent(std::size_t v, std::uint32_t power) {
  if (power == 0) return {};
  Exponents e(v + 1, 0);
  e[v] = power;
  return e;
}

int grlex_compare(const Exponents& a, const Exponents& b) {
  auto da = exp_degree(a), db = exp_degree(b);
  if (da != db) return da < db ? -1 : 1;
  std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    auto x = exp_at(a, i), y = exp_at(b, i);
    if (x != y) return x < y ? -1 : 1;
  }
  return 0;
}

MPoly::MPoly(const Rat& c) {
  if (c != 0) terms_.emplace(Exponents{}, c);
}

MPoly MPoly::variable(std::size_t v) { return monomial(unit_exponent(v), 1); }

MPoly MPoly::monomial(Exponents e, const Rat& c) {
  MPoly p;
  trim(e);
  if (c != 0) p.terms_.emplace(std::move(e), c);
  return p;
}

bool MPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

bool MPoly::is_one() const {
  return terms_.size() == 1 && terms_.begin()->first.empty() &&
         terms_.begin()->second == 1;
}

Rat MPoly::constant_term() const {
  auto it = terms_.find(Exponents{});
  return it == terms_.end() ? Rat(0) : it->second;
}

std::uint64_t MPoly::total_degree() const {
  return terms_.empty() ? 0 : exp_degree(terms_.begin()->first);
}

std::uint32_t MPoly::degree_in(std::size_t v) const {
  std::uint32_t d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, exp_at(e, v));
  return d;
}

std::uint32_t MPoly::min_degree_in(std::size_t v) const {
  if (terms_.empty()) return 0;
  std::uint32_t d = UINT32_MAX;
  for (const auto& [e, c] : terms_) d = std::min(d, exp_at(e, v));
  return d;
}

bool MPoly::depends_on(std::size_t v) const {
  for (const auto& [e, c] : terms_)
    if (exp_at(e, v) != 0) return true;
  return false;
}

std::vector<std::size_t> MPoly::variables() const {
  std::set<std::size_t> vs;
  for (const auto& [e, c] : terms_)
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] != 0) vs.insert(i);
  return {vs.begin(), vs.end()};
}

void MPoly::add_term(const Exponents& e, const Rat& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

MPoly& MPoly::operator+=(const MPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MPoly& MPoly::operator-=(const MPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

MPoly operator*(const MPoly& a, const MPoly& b) {
  MPoly r;
  if (a.is_zero() || b.is_zero()) return r;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) r.add_term(exp_mul(ea, eb), ca * cb);
  return r;
}

MPoly& MPoly::operator*=(const MPoly& o) { return *this = *this * o; }

MPoly& MPoly::operator*=(const Rat& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, x] : terms_) x *= c;
  return *this;
}

MPoly MPoly::operator-() const {
  MPoly r(*this);
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

MPoly MPoly::pow(unsigned n) const {
  MPoly result(1), base(*this);
  while (n) {
    if (n & 1u) result *= base;
    n >>= 1u;
    if (n) base *= base;
  }
  return result;
}

MPoly MPoly::mul_monomial(const Exponents& e, const Rat& c) const {
  MPoly r;
  if (c == 0) return r;
  for (const auto& [ea, ca] : terms_) r.terms_.emplace(exp_mul(ea, e), ca * c);
  return r;
}

MPoly MPoly::derivative(std::size_t v) const {
  MPoly r;
  for (const auto& [e, c] : terms_) {
    auto k = exp_at(e, v);
    if (k == 0) continue;
    Exponents d(e);
    d[v] -= 1;
    trim(d);
    r.add_term(d, c * k);
  }
  return r;
}

MPoly MPoly::substitute(std::size_t v, const MPoly& value) const {
  auto cs = coefficients_in(v);
  MPoly r;
  for (std::size_t i = cs.size(); i-- > 0;) {
    r *= value;
    r += cs[i];
  }
  return r;
}

std::vector<MPoly> MPoly::coefficients_in(std::size_t v) const {
  std::vector<MPoly> out(is_zero() ? 0 : degree_in(v) + 1);
  for (const auto& [e, c] : terms_) {
    auto k = exp_at(e, v);
    Exponents rest(e);
    if (v < rest.size()) rest[v] = 0;
    trim(rest);
    out[k].add_term(rest, c);
  }
  return out;
}

MPoly MPoly::from_coefficients(std::size_t v, const std::vector<MPoly>& c) {
  MPoly r;
  for (std::size_t i = 0; i < c.size(); ++i)
    r += c[i].mul_monomial(unit_exponent(v, static_cast<std::uint32_t>(i)), 1);
  return r;
}

MPoly MPoly::monic() const {
  if (is_zero() || leading_coeff() == 1) return *this;
  Rat inv = 1 / leading_coeff();
  return *this * inv;
}

int compare(const MPoly& a, const MPoly& b) {
  auto ia = a.terms_.begin(), ib = b.terms_.begin();
  for (; ia != a.terms_.end() && ib != b.terms_.end(); ++ia, ++ib) {
    if (int c = grlex_compare(ia->first, ib->first); c != 0) return c;
    if (int c = cmp(ia->second, ib->second); c != 0) return c < 0 ? -1 : 1;
  }
  if (ia == a.terms_.end() && ib == b.terms_.end()) return 0;
  return ia == a.terms_.end() ? -1 : 1;
}

namespace {

std::string monomial_string(const Exponents& e) {
  std::string s;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!s.empty()) s += '*';
    s += var_name(i);
    if (e[i] > 1) s += "^" + std::to_string(e[i]);
  }
  return s;
}

}  // namespace

std::string MPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    Rat mag = abs(c);
    bool neg = c < 0;
    if (first) {
      if (neg) os << '-';
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    if (e.empty()) {
      os << mag.get_str();
    } else if (mag == 1) {
      os << monomial_string(e);
    } else {
      os << mag.get_str() << '*' << monomial_string(e);
    }
  }
  return os.str();
}

std::optional<MPoly> divide_exact(const MPoly& p, const MPoly& q) {
  if (q.is_zero()) throw Error("division by zero polynomial");
  if (p.is_zero()) return MPoly();
  if (q.is_constant()) return p * (1 / q.constant_term());
  MPoly rem(p), quot;
  const auto& lq = q.leading_exponents();
  const Rat& lc = q.leading_coeff();
  while (!rem.is_zero()) {
    auto e = exp_div(rem.leading_exponents(), lq);
    if (!e) return std::nullopt;
    Rat c = rem.leading_coeff() / lc;
    rem -= q.mul_monomial(*e, c);
    quot += MPoly::monomial(*e, c);
  }
  return quot;
}

MPoly reduce_by(const MPoly& p, const MPoly& q) {
  if (q.is_zero()) throw Error("division by zero polynomial");
  MPoly rem(p), out;
  const auto& lq = q.leading_exponents();
  const Rat& lc = q.leading_coeff();
  while (!rem.is_zero()) {
    auto e = exp_div(rem.leading_exponents(), lq);
    if (!e) {
      auto lt = MPoly::monomial(rem.leading_exponents(), rem.leading_coeff());
      out += lt;
      rem -= lt;
      continue;
    }
    rem -= q.mul_monomial(*e, rem.leading_coeff() / lc);
  }
  return out;
}

namespace {

MPoly monomial_gcd(const Exponents& m, const MPoly& q) {
  Exponents g(m);
  for (const auto& [e, c] : q.terms()) {
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::min(g[i], exp_at(e, i));
  }
  return MPoly::monomial(g, 1);
}

// Scale to integer coefficients with gcd 1 and positive leading coefficient.
MPoly integer_primitive(const MPoly& p) {
  if (p.is_zero()) return p;
  Int den = 1, num = 0;
  for (const auto& [e, c] : p.terms()) {
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), c.get_num_mpz_t());
  }
  Rat s(den, num);
  s.canonicalize();
  if (p.leading_coeff() < 0) s = -s;
  return p * s;
}

MPoly primitive_part(const MPoly& p, std::size_t v) {
  MPoly c = content_in(p, v);
  auto q = divide_exact(p, c);
  if (!q) throw Error("internal: content does not divide polynomial");
  return integer_primitive(*q);
}

MPoly gcd_recursive(const MPoly& p, const MPoly& q);

// lc(b)^(deg a - deg b + 1) * a mod b, in the variable v.
MPoly exact_prem(MPoly a, const MPoly& b, std::size_t v) {
  auto bc = b.coefficients_in(v);
  std::uint32_t db = static_cast<std::uint32_t>(bc.size() - 1);
  const MPoly& lcb = bc.back();
  int steps = static_cast<int>(a.degree_in(v)) - static_cast<int>(db) + 1;
  while (!a.is_zero() && a.degree_in(v) >= db) {
    std::uint32_t da = a.degree_in(v);
    MPoly lca = a.coefficients_in(v).back();
    a = lcb * a - lca * b.mul_monomial(unit_exponent(v, da - db), 1);
    --steps;
  }
  if (steps > 0) a *= lcb.pow(static_cast<unsigned>(steps));
  return a;
}

MPoly exact_quotient(const MPoly& p, const MPoly& q) {
  auto r = divide_exact(p, q);
  if (!r) throw Error("internal: inexact division in subresultant sequence");
  return *r;
}

// Subresultant PRS; returns the primitive gcd of primitive a, b.
MPoly primitive_prs(MPoly a, MPoly b, std::size_t v) {
  if (a.degree_in(v) < b.degree_in(v)) std::swap(a, b);
  MPoly g(1), h(1);
  while (true) {
    unsigned d = a.degree_in(v) - b.degree_in(v);
    MPoly r = exact_prem(a, b, v);
    if (r.is_zero()) return primitive_part(b, v);
    if (r.degree_in(v) == 0) return MPoly(1);
    a = std::move(b);
    b = exact_quotient(r, g * h.pow(d));
    g = a.coefficients_in(v).back();
    if (d == 0)
      continue;
    h = exact_quotient(g.pow(d), h.pow(d - 1));
  }
}

// Image in Q[v] after sending every other variable w to 2w + 3 (the
// number, not the variable). Empty when the degree in v drops.
std::optional<UPoly<Rat>> image_in(const MPoly& p, std::size_t v) {
  std::vector<Rat> c(p.degree_in(v) + 1);
  for (const auto& [e, a] : p.terms()) {
    Rat t = a;
    for (std::size_t w = 0; w < e.size(); ++w) {
      if (w == v || e[w] == 0) continue;
      Int base = 2 * static_cast<long>(w) + 3, pw;
      mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(), e[w]);
      t *= pw;
    }
    c[exp_at(e, v)] += t;
  }
  if (c.back() == 0) return std::nullopt;
  return UPoly<Rat>(std::move(c));
}

// True when the images prove gcd(p, q) free of v.
bool coprime_in(const MPoly& p, const MPoly& q, std::size_t v) {
  auto a = image_in(p, v), b = image_in(q, v);
  return a && b && gcd(*a, *b).degree() == 0;
}

MPoly gcd_recursive(const MPoly& p, const MPoly& q) {
  auto vp = p.variables(), vq = q.variables();
  std::size_t v = std::max(vp.empty() ? 0 : vp.back(), vq.empty() ? 0 : vq.back());
  bool in_p = p.depends_on(v), in_q = q.depends_on(v);
  if (!in_p) return gcd(p, content_in(q, v));
  if (!in_q) return gcd(content_in(p, v), q);
  MPoly cp = content_in(p, v), cq = content_in(q, v);
  MPoly pp = integer_primitive(*divide_exact(p, cp)), qq = integer_primitive(*divide_exact(q, cq));
  MPoly c = gcd(cp, cq);
  if (coprime_in(pp, qq, v)) return c;
  MPoly g = primitive_prs(pp, qq, v);
  return (c * g).monic();
}

Int max_norm(const MPoly& p) {
  Int m = 0;
  for (const auto& [e, c] : p.terms()) {
    Int a = abs(c.get_num());
    if (a > m) m = a;
  }
  return m;
}

Int integer_content(const MPoly& p) {
  Int g = 0;
  for (const auto& [e, c] : p.terms()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num_mpz_t());
  return g;
}

// Symmetric residue of a in (-m/2, m/2].
Int sym_mod(const Int& a, const Int& m) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  if (2 * r > m) r -= m;
  return r;
}

// Heuristic gcd over Z of integer polynomials: evaluate the top variable at
// a large integer, recurse, and rebuild from the xi-adic expansion. The
// candidate is accepted only if it divides both inputs.
std::optional<MPoly> heuristic_gcd(const MPoly& p, const MPoly& q, int depth) {
  Int cp = integer_content(p), cq = integer_content(q), c;
  mpz_gcd(c.get_mpz_t(), cp.get_mpz_t(), cq.get_mpz_t());
  if (p.is_constant() || q.is_constant()) return MPoly(Rat(c));
  MPoly pp = p * Rat(1 / Rat(cp)), qq = q * Rat(1 / Rat(cq));
  auto vp = pp.variables(), vq = qq.variables();
  std::size_t v = std::max(vp.back(), vq.back());
  Int xi = 2 * std::min(max_norm(pp), max_norm(qq)) + 29;
  for (int attempt = 0; attempt < 4 && depth < 8; ++attempt) {
    MPoly pe = pp.substitute(v, MPoly(Rat(xi))), qe = qq.substitute(v, MPoly(Rat(xi)));
    if (!pe.is_zero() && !qe.is_zero()) {
      auto ge = heuristic_gcd(pe, qe, depth + 1);
      if (ge) {
        MPoly g, rest = *ge;
        for (std::uint32_t i = 0; !rest.is_zero(); ++i) {
          MPoly digit;
          for (const auto& [e, a] : rest.terms()) {
            Int r = sym_mod(a.get_num(), xi);
            if (r != 0) digit += MPoly::monomial(e, Rat(r));
          }
          g += digit.mul_monomial(unit_exponent(v, i), 1);
          rest = (rest - digit) * Rat(1 / Rat(xi));
          if (i > 4096) break;
        }
        if (!g.is_zero() && rest.is_zero()) {
          g = integer_primitive(g);
          if (divide_exact(pp, g) && divide_exact(qq, g)) return g * Rat(c);
        }
      }
    }
    xi = xi * 73794 / 27011;
  }
  return std::nullopt;
}

}  // namespace

MPoly content_in(const MPoly& p, std::size_t v) {
  MPoly g;
  for (const auto& c : p.coefficients_in(v)) {
    if (c.is_zero()) continue;
    g = gcd(g, c);
    if (g.is_one()) break;
  }
  return g;
}

MPoly gcd(const MPoly& p, const MPoly& q) {
  if (p.is_zero()) return q.monic();
  if (q.is_zero()) return p.monic();
  if (p.is_constant() || q.is_constant()) return MPoly(1);
  if (p.num_terms() == 1) return monomial_gcd(p.leading_exponents(), q);
  if (q.num_terms() == 1) return monomial_gcd(q.leading_exponents(), p);
  if (p == q) return p.monic();
  if (p.total_degree() >= q.total_degree()) {
    if (divide_exact(p, q)) return q.monic();
  } else if (divide_exact(q, p)) {
    return p.monic();
  }
  if (auto g = heuristic_gcd(integer_primitive(p), integer_primitive(q), 0)) return g->monic();
  return gcd_recursive(p, q);
}

}  // namespace dopfac
