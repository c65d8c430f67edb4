#include "dopfac/ratfunc.hpp"

#include <algorithm>
#include <set>

#include "dopfac/error.hpp"
#include "dopfac/registry.hpp"
#include "dopfac/upoly.hpp"

namespace dopfac {

RatFunc::RatFunc(const MPoly& num, const MPoly& den) { *this = normalized(num, den); }

RatFunc RatFunc::variable(std::string_view name) { return variable(var(name)); }

RatFunc RatFunc::normalized(MPoly num, MPoly den) {
  if (den.is_zero()) throw Error("division by zero rational function");
  if (num.is_zero()) return RatFunc();
  if (!den.is_constant()) {
    MPoly g = gcd(num, den);
    if (!g.is_one()) {
      num = *divide_exact(num, g);
      den = *divide_exact(den, g);
    }
  }
  if (den.leading_coeff() != 1) {
    Rat inv = 1 / den.leading_coeff();
    num *= inv;
    den *= inv;
  }
  return RatFunc(std::move(num), std::move(den), Reduced{});
}

RatFunc RatFunc::normalized_with(MPoly num, MPoly den, const MPoly& common) {
  if (!common.is_one()) {
    num = *divide_exact(num, common);
    den = *divide_exact(den, common);
  }
  if (den.leading_coeff() != 1) {
    Rat inv = 1 / den.leading_coeff();
    num *= inv;
    den *= inv;
  }
  return RatFunc(std::move(num), std::move(den), Reduced{});
}

std::vector<std::size_t> RatFunc::variables() const {
  std::set<std::size_t> vs;
  for (auto v : num_.variables()) vs.insert(v);
  for (auto v : den_.variables()) vs.insert(v);
  return {vs.begin(), vs.end()};
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den_.is_one() && b.den_.is_one()) return RatFunc(a.num_ + b.num_);
  if (a.den_ == b.den_) return RatFunc::normalized(a.num_ + b.num_, a.den_);
  // With g = gcd of the denominators, the new numerator is already coprime
  // to both cofactors; only g can share factors with it.
  MPoly g = gcd(a.den_, b.den_);
  if (g.is_one()) {
    MPoly num = a.num_ * b.den_ + b.num_ * a.den_;
    if (num.is_zero()) return RatFunc();
    MPoly den = a.den_ * b.den_;
    return RatFunc::normalized_with(std::move(num), std::move(den), MPoly(1));
  }
  MPoly da = *divide_exact(a.den_, g), db = *divide_exact(b.den_, g);
  MPoly num = a.num_ * db + b.num_ * da;
  if (num.is_zero()) return RatFunc();
  MPoly h = gcd(num, g);
  return RatFunc::normalized_with(std::move(num), a.den_ * db, h);
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }

RatFunc RatFunc::operator-() const { return RatFunc(-num_, den_, Reduced{}); }

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
  if (a.is_zero() || b.is_zero()) return RatFunc();
  if (a.den_.is_one() && b.den_.is_one()) return RatFunc(a.num_ * b.num_);
  MPoly g1 = gcd(a.num_, b.den_), g2 = gcd(b.num_, a.den_);
  MPoly n1 = g1.is_one() ? a.num_ : *divide_exact(a.num_, g1);
  MPoly d2 = g1.is_one() ? b.den_ : *divide_exact(b.den_, g1);
  MPoly n2 = g2.is_one() ? b.num_ : *divide_exact(b.num_, g2);
  MPoly d1 = g2.is_one() ? a.den_ : *divide_exact(a.den_, g2);
  MPoly den = d1 * d2;
  MPoly num = n1 * n2;
  if (den.leading_coeff() != 1) {
    Rat inv = 1 / den.leading_coeff();
    num *= inv;
    den *= inv;
  }
  return RatFunc(std::move(num), std::move(den), RatFunc::Reduced{});
}

RatFunc RatFunc::inverse() const {
  if (is_zero()) throw Error("division by zero rational function");
  Rat inv = 1 / num_.leading_coeff();
  return RatFunc(den_ * inv, num_ * inv, Reduced{});
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * b.inverse(); }

RatFunc RatFunc::pow(long n) const {
  if (n < 0) return inverse().pow(-n);
  // Powers of a reduced fraction stay reduced.
  MPoly num = num_.pow(static_cast<unsigned>(n));
  MPoly den = den_.pow(static_cast<unsigned>(n));
  return RatFunc(std::move(num), std::move(den), Reduced{});
}

RatFunc RatFunc::substitute(std::size_t v, const RatFunc& value) const {
  auto eval = [&](const MPoly& p) {
    RatFunc r;
    auto cs = p.coefficients_in(v);
    for (std::size_t i = cs.size(); i-- > 0;) r = r * value + RatFunc(cs[i]);
    return r;
  };
  return eval(num_) / eval(den_);
}

int compare(const RatFunc& a, const RatFunc& b) {
  if (int c = compare(a.num_, b.num_); c != 0) return c;
  return compare(a.den_, b.den_);
}

std::string RatFunc::to_string() const {
  if (den_.is_one()) return num_.to_string();
  std::string n = num_.to_string();
  if (num_.num_terms() > 1) n = "(" + n + ")";
  std::string d = den_.to_string();
  bool bare = den_.num_terms() == 1 && den_.leading_coeff() == 1 &&
              den_.variables().size() == 1;
  if (!bare) d = "(" + d + ")";
  return n + "/" + d;
}

RatFunc diff(const RatFunc& f, std::size_t v) {
  if (!f.depends_on(v)) return RatFunc();
  if (!f.den().depends_on(v)) return RatFunc(f.num().derivative(v), f.den());
  // d = g*e, d' = g*s with g = gcd(d, d'): (n/d)' = (n'e - ns)/(de), and
  // only factors of g can cancel.
  const MPoly& d = f.den();
  MPoly dd = d.derivative(v);
  MPoly g = gcd(d, dd);
  MPoly e = *divide_exact(d, g), s = *divide_exact(dd, g);
  MPoly n = f.num().derivative(v) * e - f.num() * s;
  if (n.is_zero()) return RatFunc();
  MPoly h = g.is_one() ? g : gcd(n, g);
  return RatFunc::normalized_with(std::move(n), d * e, h);
}

namespace {

std::optional<Rat> rat_sqrt(const Rat& c) {
  if (c < 0) return std::nullopt;
  const mpz_class& n = c.get_num();
  const mpz_class& d = c.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t()))
    return std::nullopt;
  mpz_class sn = sqrt(n), sd = sqrt(d);
  Rat r(sn, sd);
  r.canonicalize();
  return r;
}

}  // namespace

std::optional<MPoly> poly_sqrt(const MPoly& p) {
  if (p.is_zero()) return MPoly();
  auto lc_root = rat_sqrt(p.leading_coeff());
  if (!lc_root) return std::nullopt;
  Exponents half;
  for (auto e : p.leading_exponents()) {
    if (e % 2) return std::nullopt;
    half.push_back(e / 2);
  }
  std::uint64_t low = UINT64_MAX;
  for (const auto& [e, c] : p.terms()) low = std::min(low, exp_degree(e));

  MPoly lead = MPoly::monomial(half, *lc_root);
  MPoly root = lead;
  MPoly rem = p - root * root;
  Exponents last = half;
  while (!rem.is_zero()) {
    auto e = exp_div(rem.leading_exponents(), half);
    if (!e) return std::nullopt;
    if (grlex_compare(*e, last) >= 0 || 2 * exp_degree(*e) < low) return std::nullopt;
    MPoly t = MPoly::monomial(*e, rem.leading_coeff() / (2 * *lc_root));
    root += t;
    rem = p - root * root;
    last = *e;
  }
  return root;
}

std::optional<RatFunc> sqrt_test(const RatFunc& f) {
  auto n = poly_sqrt(f.num());
  if (!n) return std::nullopt;
  auto d = poly_sqrt(f.den());
  if (!d) return std::nullopt;
  return RatFunc(*n, *d);
}

namespace {

using QPoly = UPoly<Rat>;

Rat floor_rat(const Rat& r) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return Rat(f);
}

// The rational of least denominator in [l, u], l <= u.
Rat simplest_between(const Rat& l, const Rat& u) {
  if (l <= 0 && u >= 0) return Rat(0);
  if (u < 0) return -simplest_between(-u, -l);
  Rat n = floor_rat(l);
  if (n == l) return l;
  if (n + 1 <= u) return n + 1;
  return n + 1 / simplest_between(1 / (u - n), 1 / (l - n));
}

int sign_changes(const std::vector<QPoly>& chain, const Rat& t) {
  int changes = 0, last = 0;
  for (const auto& p : chain) {
    int s = sgn(p.eval(t));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

// Distinct rational roots of a squarefree polynomial: Sturm isolation, then
// each interval narrower than 1/lc^2 holds at most one rational whose
// denominator divides lc, which is the simplest rational in it.
void isolate(const QPoly& s, const std::vector<QPoly>& chain, const Rat& l, const Rat& u,
             int count, const Rat& tiny, std::vector<Rat>& out) {
  if (count == 0) return;
  if (u - l < tiny) {
    Rat c = simplest_between(l, u);
    if (c > l && s.eval(c) == 0) out.push_back(c);
    return;
  }
  Rat m = (l + u) / 2;
  int vm = sign_changes(chain, m);
  int vl = sign_changes(chain, l);
  isolate(s, chain, l, m, vl - vm, tiny, out);
  isolate(s, chain, m, u, count - (vl - vm), tiny, out);
}

}  // namespace

std::vector<Rat> rational_roots(const MPoly& p) {
  if (p.is_zero()) throw Error("rational_roots of the zero polynomial");
  auto vars = p.variables();
  if (vars.size() > 1) throw Error("rational_roots requires a univariate polynomial");
  std::vector<Rat> roots;
  if (vars.empty()) return roots;
  std::vector<Rat> dense;
  for (const auto& c : p.coefficients_in(vars[0])) dense.push_back(c.constant_term());
  QPoly u(dense);

  while (u.coeff(0) == 0) {
    roots.emplace_back(0);
    u = divmod(u, QPoly::t()).first;
  }
  if (u.degree() <= 0) return roots;

  QPoly s = divmod(u, gcd(u, u.derivative())).first.monic();
  mpz_class lcm_den = 1;
  for (const auto& c : s.coeffs()) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), c.get_den_mpz_t());
  Rat lead(lcm_den);  // leading coefficient of the integer version of s
  Rat tiny = 1 / (lead * lead);

  std::vector<QPoly> chain{s, s.derivative()};
  while (chain.back().degree() > 0) {
    QPoly r = divmod(chain[chain.size() - 2], chain.back()).second;
    if (r.is_zero()) break;
    chain.push_back(-r);
  }
  Rat bound = 1;
  for (const auto& c : s.coeffs()) bound = std::max(bound, Rat(abs(c)));
  bound += 1;
  std::vector<Rat> distinct;
  Rat lo = -bound, hi = bound;
  isolate(s, chain, lo, hi, sign_changes(chain, lo) - sign_changes(chain, hi), tiny, distinct);
  std::sort(distinct.begin(), distinct.end());
  for (const auto& r : distinct) {
    while (u.degree() > 0 && u.eval(r) == 0) {
      roots.push_back(r);
      u = divmod(u, QPoly(std::vector<Rat>{-r, Rat(1)})).first;
    }
  }
  return roots;
}

}  // namespace dopfac
