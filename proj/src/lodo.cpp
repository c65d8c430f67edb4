#include "dopfac/lodo.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "dopfac/error.hpp"
#include "dopfac/linalg.hpp"
#include "dopfac/pdop.hpp"
#include "dopfac/upoly.hpp"

namespace dopfac {

OrePoly::OrePoly(std::vector<RatFunc> coeffs, std::size_t var) : c_(std::move(coeffs)), var_(var) {
  trim();
}

OrePoly OrePoly::D(std::size_t var, unsigned power) {
  std::vector<RatFunc> c(power + 1);
  c[power] = RatFunc(1);
  return OrePoly(std::move(c), var);
}

void OrePoly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

OrePoly OrePoly::monic() const {
  if (is_zero()) return *this;
  return scaled(lc().inverse());
}

namespace {

void require_same_var(const OrePoly& a, const OrePoly& b) {
  if (!a.is_zero() && !b.is_zero() && a.var() != b.var())
    throw Error("operators in different variables");
}

std::size_t common_var(const OrePoly& a, const OrePoly& b) {
  require_same_var(a, b);
  return a.is_zero() ? b.var() : a.var();
}

}  // namespace

OrePoly& OrePoly::operator+=(const OrePoly& o) {
  var_ = common_var(*this, o);
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

OrePoly& OrePoly::operator-=(const OrePoly& o) { return *this += -o; }

OrePoly OrePoly::operator-() const { return scaled(RatFunc(-1)); }

OrePoly OrePoly::scaled(const RatFunc& f) const {
  std::vector<RatFunc> c(c_);
  for (auto& x : c) x = f * x;
  return OrePoly(std::move(c), var_);
}

namespace {

// D o M
OrePoly d_compose(const OrePoly& m) {
  std::vector<RatFunc> c(m.coeffs().size() + 1);
  for (std::size_t j = 0; j < m.coeffs().size(); ++j) {
    c[j] += diff(m.coeffs()[j], m.var());
    c[j + 1] += m.coeffs()[j];
  }
  return OrePoly(std::move(c), m.var());
}

}  // namespace

OrePoly operator*(const OrePoly& a, const OrePoly& b) {
  std::size_t v = common_var(a, b);
  OrePoly r(std::vector<RatFunc>{}, v);
  if (a.is_zero() || b.is_zero()) return r;
  OrePoly power = b;  // D^i o b
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (!a.c_[i].is_zero()) r += power.scaled(a.c_[i]);
    if (i + 1 < a.c_.size()) power = d_compose(power);
  }
  return r;
}

RatFunc OrePoly::apply(const RatFunc& f) const {
  RatFunc r, d = f;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (!c_[i].is_zero()) r += c_[i] * d;
    if (i + 1 < c_.size()) d = diff(d, var_);
  }
  return r;
}

std::string OrePoly::to_string() const {
  if (c_.empty()) return "0";
  std::string out;
  for (std::size_t i = c_.size(); i-- > 0;) {
    if (c_[i].is_zero()) continue;
    std::string rest = i == 0 ? "" : (i == 1 ? "D" : "D^" + std::to_string(i));
    append_signed_term(out, c_[i], rest);
  }
  return out;
}

DivResult divide(const OrePoly& L, const OrePoly& M, Side side) {
  if (M.is_zero()) throw Error("division by zero operator");
  std::size_t v = common_var(L, M);
  OrePoly q(std::vector<RatFunc>{}, v), r = L;
  while (!r.is_zero() && r.order() >= M.order()) {
    unsigned k = static_cast<unsigned>(r.order() - M.order());
    OrePoly t = OrePoly::D(v, k).scaled(r.lc() / M.lc());
    q += t;
    r -= side == Side::Right ? t * M : M * t;
  }
  return {q, r};
}

namespace {

// Extended one-sided Euclid. Right: r = U*L + V*M; left: r = L*U + M*V.
// (U, V) give the last nonzero remainder g, (Un, Vn) give zero.
struct Euclid {
  OrePoly g, U, V, Un, Vn;
};

Euclid extended_euclid(const OrePoly& L, const OrePoly& M, Side side) {
  std::size_t v = common_var(L, M);
  OrePoly one(RatFunc(1), v), zero(std::vector<RatFunc>{}, v);
  OrePoly r0 = L, r1 = M, U0 = one, V0 = zero, U1 = zero, V1 = one;
  if (r0.is_zero()) {
    std::swap(r0, r1);
    std::swap(U0, U1);
    std::swap(V0, V1);
  }
  while (!r1.is_zero()) {
    OrePoly q = divide(r0, r1, side).quotient;
    auto step = [&](const OrePoly& a, const OrePoly& b) {
      return side == Side::Right ? a - q * b : a - b * q;
    };
    OrePoly r2 = step(r0, r1), U2 = step(U0, U1), V2 = step(V0, V1);
    r0 = std::move(r1);
    r1 = std::move(r2);
    U0 = std::move(U1);
    U1 = std::move(U2);
    V0 = std::move(V1);
    V1 = std::move(V2);
  }
  return {r0, U0, V0, U1, V1};
}

}  // namespace

GcdLcm gcd_lcm(const OrePoly& L, const OrePoly& M, Side side) {
  if (L.is_zero() && M.is_zero()) throw Error("gcd of two zero operators");
  Euclid e = extended_euclid(L, M, side);
  OrePoly lcm = side == Side::Right ? e.Un * L : L * e.Un;
  if (L.is_zero() || M.is_zero()) lcm = OrePoly(std::vector<RatFunc>{}, common_var(L, M));
  // Left divisors and multiples stay so under right multiplication by a function.
  auto normalize = [&](const OrePoly& a) {
    if (a.is_zero() || side == Side::Right) return a.monic();
    return a * OrePoly(a.lc().inverse(), a.var());
  };
  return {normalize(e.g), normalize(lcm)};
}

std::optional<BezoutSolution> bezout(const OrePoly& L, const OrePoly& M, const OrePoly& B,
                                     Side side) {
  if (L.is_zero() && M.is_zero()) throw Error("bezout with two zero operators");
  Euclid e = extended_euclid(L, M, side);
  DivResult d = divide(B, e.g, side);
  if (!d.remainder.is_zero()) return std::nullopt;
  if (side == Side::Right) return BezoutSolution{d.quotient * e.U, d.quotient * e.V};
  return BezoutSolution{e.U * d.quotient, e.V * d.quotient};
}

std::optional<TransformCert> transform(const OrePoly& L, const OrePoly& B) {
  if (!L.is_reduced() || L.order() < 1)
    throw Error("transform requires a reduced operator of order at least 1");
  if (B.is_zero()) return std::nullopt;
  Euclid e = extended_euclid(L, B, Side::Right);
  if (e.g.order() != 0) return std::nullopt;
  OrePoly minusV = -e.Vn;
  RatFunc lambda = minusV.lc().inverse();
  TransformCert cert;
  cert.L = L;
  cert.B = B;
  cert.L1 = minusV.scaled(lambda);
  cert.B1 = e.Un.scaled(lambda);
  // e.U*L + e.V*B = g with g a nonzero function, so (g^-1 e.V)*B = 1 mod L.
  OrePoly x = e.V.scaled(e.g.lc().inverse());
  cert.Binv = divide(x, cert.L1).remainder;
  return cert;
}

bool check_transform(const TransformCert& c) {
  if (gcd_lcm(c.L, c.B).gcd.order() != 0) return false;
  OrePoly k = c.L1 * c.B;
  if (k != c.B1 * c.L) return false;
  if (k.monic() != gcd_lcm(c.L, c.B).lcm) return false;
  OrePoly one(RatFunc(1), c.L.var());
  return divide(c.Binv * c.B - one, c.L).remainder.is_zero();
}

std::optional<OrePoly> interchange(const OrePoly& P, const OrePoly& Q, const OrePoly& Q1) {
  if (P.order() < 1 || Q.order() < 1) throw Error("interchange needs factors of order at least 1");
  if (Q1.order() != Q.order()) throw Error("candidate factor must have the order of Q");
  DivResult d = divide(P * Q, Q1);
  if (!d.remainder.is_zero()) return std::nullopt;
  return d.quotient;
}

OrePoly adjoint(const OrePoly& L) {
  std::size_t v = L.var();
  OrePoly r(std::vector<RatFunc>{}, v), power(RatFunc(1), v);
  OrePoly minus_d = -OrePoly::D(v);
  for (std::size_t i = 0; i < L.coeffs().size(); ++i) {
    if (!L.coeffs()[i].is_zero()) r += power * OrePoly(L.coeffs()[i], v);
    power = minus_d * power;
  }
  return r;
}

namespace {

using QPoly = UPoly<Rat>;

QPoly to_qpoly(const MPoly& p, std::size_t v) {
  std::vector<Rat> c;
  for (const auto& m : p.coefficients_in(v)) {
    if (!m.is_constant()) throw Error("rational kernel requires coefficients in Q(x)");
    c.push_back(m.constant_term());
  }
  return QPoly(std::move(c));
}

MPoly to_mpoly(const QPoly& p, std::size_t v) {
  std::vector<MPoly> c;
  for (const auto& a : p.coeffs()) c.emplace_back(a);
  return MPoly::from_coefficients(v, c);
}

QPoly exact_quo(const QPoly& a, const QPoly& b) { return divmod(a, b).first; }

// Squarefree factors (Yun); the multiplicity of entry i is i + 1.
std::vector<QPoly> squarefree(const QPoly& p) {
  std::vector<QPoly> out;
  if (p.degree() <= 0) return out;
  QPoly a0 = gcd(p, p.derivative());
  QPoly b = exact_quo(p, a0), c = exact_quo(p.derivative(), a0);
  QPoly d = c - b.derivative();
  while (b.degree() > 0) {
    QPoly a = gcd(b, d);
    out.push_back(a);
    b = exact_quo(b, a);
    c = exact_quo(d, a);
    d = c - b.derivative();
  }
  return out;
}

QPoly falling(int i) {
  QPoly r = QPoly::constant(Rat(1));
  for (int k = 0; k < i; ++k) r = r * QPoly(std::vector<Rat>{Rat(-k), Rat(1)});
  return r;
}

// Polynomial through (xs[i], ys[i]) by Newton interpolation.
QPoly interpolate(const std::vector<Rat>& xs, std::vector<Rat> ys) {
  std::size_t n = xs.size();
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = n - 1; i >= j; --i) ys[i] = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - j]);
  QPoly r;
  for (std::size_t i = n; i-- > 0;)
    r = r * QPoly(std::vector<Rat>{-xs[i], Rat(1)}) + QPoly::constant(ys[i]);
  return r;
}

std::vector<Int> integer_roots(const QPoly& p, std::size_t v) {
  std::vector<Int> out;
  if (p.is_zero()) return out;
  for (const auto& r : rational_roots(to_mpoly(p, v)))
    if (r.get_den() == 1) out.push_back(r.get_num());
  return out;
}

}  // namespace

std::vector<RatFunc> rational_kernel(const OrePoly& L, unsigned cap) {
  if (L.is_zero()) throw Error("kernel of the zero operator");
  std::size_t v = L.var();
  std::size_t n = static_cast<std::size_t>(L.order());
  for (const auto& c : L.coeffs())
    for (auto w : c.variables())
      if (w != v) throw Error("rational kernel requires coefficients in Q(x)");

  MPoly den(1);
  for (const auto& c : L.coeffs()) den = divide_exact(den * c.den(), gcd(den, c.den())).value();
  std::vector<QPoly> p;
  for (const auto& c : L.coeffs()) p.push_back(to_qpoly((c * RatFunc(den)).num(), v));

  // Coprime base of the finite singular points, refined so that every root
  // of a base element has the same multiplicity in every p[i].
  QPoly pn = p[n];
  std::vector<QPoly> base;
  if (pn.degree() > 0) base.push_back(exact_quo(pn, gcd(pn, pn.derivative())).monic());
  for (const auto& pi : p) {
    for (const auto& s : squarefree(pi)) {
      std::vector<QPoly> next;
      for (const auto& q : base) {
        QPoly g = gcd(q, s);
        if (g.degree() > 0 && g.degree() < q.degree()) {
          next.push_back(g);
          next.push_back(exact_quo(q, g).monic());
        } else {
          next.push_back(q);
        }
      }
      base = std::move(next);
    }
  }

  QPoly denom = QPoly::constant(Rat(1));
  for (const auto& q : base) {
    std::vector<int> val(n + 1, -1);
    std::vector<QPoly> rest(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      if (p[i].is_zero()) continue;
      QPoly r = p[i];
      int k = 0;
      while (true) {
        auto [quo, rem] = divmod(r, q);
        if (!rem.is_zero()) break;
        r = quo;
        ++k;
      }
      val[i] = k;
      rest[i] = r;
    }
    int mu = INT32_MAX;
    for (std::size_t i = 0; i <= n; ++i)
      if (val[i] >= 0) mu = std::min(mu, val[i] - static_cast<int>(i));
    QPoly dq = q.derivative();
    std::vector<std::pair<int, QPoly>> lead;  // (i, c_i mod q)
    for (std::size_t i = 0; i <= n; ++i) {
      if (val[i] < 0 || val[i] - static_cast<int>(i) != mu) continue;
      QPoly c = rest[i];
      for (int k = 0; k < val[i]; ++k) c = divmod(c * dq, q).second;
      lead.emplace_back(static_cast<int>(i), divmod(c, q).second);
    }
    // Indicial polynomial over all roots of q: res_t(q, sum c_i(t) ff(s, i)).
    std::size_t npts = static_cast<std::size_t>(q.degree()) * n + 1;
    std::vector<Rat> xs, ys;
    for (std::size_t k = 0; k < npts; ++k) {
      Rat s(static_cast<long>(k));
      QPoly j;
      for (const auto& [i, c] : lead) j = j + falling(i).eval(s) * c;
      xs.push_back(s);
      ys.push_back(resultant(q, j));
    }
    QPoly ind = interpolate(xs, ys);
    Int worst = 0;
    for (const auto& r : integer_roots(ind, v)) worst = std::min(worst, Int(r));
    Int m = -worst;
    if (m > cap) throw Error("bound overflow");
    for (unsigned k = 0; k < m.get_ui(); ++k) denom = denom * q;
  }

  // Degree at infinity.
  int delta = INT32_MIN;
  for (std::size_t i = 0; i <= n; ++i)
    if (!p[i].is_zero()) delta = std::max(delta, p[i].degree() - static_cast<int>(i));
  QPoly inf;
  for (std::size_t i = 0; i <= n; ++i)
    if (!p[i].is_zero() && p[i].degree() - static_cast<int>(i) == delta)
      inf = inf + p[i].lc() * falling(static_cast<int>(i));
  auto roots = integer_roots(inf, v);
  if (roots.empty()) return {};
  Int top = *std::max_element(roots.begin(), roots.end());
  Int bound = top + denom.degree();
  if (bound < 0) return {};
  if (bound > cap) throw Error("bound overflow");
  std::size_t nb = bound.get_ui() + 1;

  RatFunc dn(to_mpoly(denom, v));
  RatFunc xv = RatFunc::variable(v);
  std::vector<RatFunc> images;
  MPoly common(1);
  for (std::size_t j = 0; j < nb; ++j) {
    RatFunc img = L.apply(xv.pow(static_cast<long>(j)) / dn);
    common = divide_exact(common * img.den(), gcd(common, img.den())).value();
    images.push_back(img);
  }
  std::map<std::uint32_t, std::size_t> row_of;
  Matrix<Rat> a;
  for (std::size_t j = 0; j < nb; ++j) {
    MPoly num = (images[j] * RatFunc(common)).num();
    for (const auto& [e, c] : num.terms()) {
      auto [it, inserted] = row_of.try_emplace(exp_at(e, v), a.size());
      if (inserted) a.emplace_back(nb, Rat(0));
      a[it->second][j] = c;
    }
  }
  std::vector<RatFunc> out;
  for (const auto& vec : nullspace(a, nb)) {
    MPoly num;
    for (std::size_t j = 0; j < nb; ++j) num += MPoly::monomial(unit_exponent(v, static_cast<std::uint32_t>(j)), vec[j]);
    out.push_back(RatFunc(num) / dn);
  }
  return out;
}

JhReport jh_check(const OrePoly& L, const std::vector<std::vector<OrePoly>>& factorizations,
                  const std::vector<SimilarityWitness>& witnesses) {
  JhReport rep;
  std::vector<int> first_orders;
  for (std::size_t f = 0; f < factorizations.size(); ++f) {
    const auto& fs = factorizations[f];
    if (fs.empty()) throw Error("empty factorization");
    OrePoly prod(RatFunc(1), L.var());
    std::vector<int> orders;
    for (const auto& g : fs) {
      if (g.order() < 1) throw Error("factor of order 0 in factorization " + std::to_string(f + 1));
      prod = prod * g;
      orders.push_back(g.order());
    }
    if (prod != L) throw Error("product of factorization " + std::to_string(f + 1) + " differs from L");
    rep.lengths.push_back(fs.size());
    std::vector<int> sorted = orders;
    std::sort(sorted.begin(), sorted.end());
    if (f == 0) first_orders = sorted;
    if (fs.size() != factorizations[0].size()) rep.lengths_equal = false;
    if (sorted != first_orders) rep.orders_match = false;
    rep.orders.push_back(orders);
  }
  for (const auto& w : witnesses) {
    if (w.from_factorization >= factorizations.size() || w.to_factorization >= factorizations.size() ||
        w.from_index >= factorizations[w.from_factorization].size() ||
        w.to_index >= factorizations[w.to_factorization].size())
      throw Error("similarity witness refers to a missing factor");
    OrePoly a = factorizations[w.from_factorization][w.from_index].monic();
    OrePoly b = factorizations[w.to_factorization][w.to_index].monic();
    auto cert = transform(a, w.B);
    rep.witness_ok.push_back(cert && cert->L1 == b && check_transform(*cert));
  }
  return rep;
}

std::optional<TransformCert> find_similarity(const OrePoly& L, const OrePoly& M, unsigned max_degree) {
  if (!L.is_reduced() || L.order() < 1) throw Error("similarity search requires a reduced operator");
  if (M.order() != L.order()) return std::nullopt;
  std::size_t v = L.var();
  OrePoly target = M.monic();
  std::size_t n = static_cast<std::size_t>(L.order());
  // Coefficient ansatz: monomials of total degree <= max_degree in every
  // variable occurring in L or M (parameters such as c included).
  std::set<std::size_t> vars{v};
  for (const auto* op : {&L, &M})
    for (const auto& c : op->coeffs())
      for (auto w : c.variables()) vars.insert(w);
  std::vector<MPoly> monos{MPoly(1)};
  for (unsigned d = 1; d <= max_degree; ++d) {
    std::vector<MPoly> next;
    for (const auto& m : monos) {
      if (m.total_degree() != d - 1) continue;
      for (auto w : vars) {
        MPoly t = m * MPoly::variable(w);
        if (std::find(monos.begin(), monos.end(), t) == monos.end() &&
            std::find(next.begin(), next.end(), t) == next.end())
          next.push_back(t);
      }
    }
    monos.insert(monos.end(), next.begin(), next.end());
  }
  std::vector<OrePoly> basis;
  for (std::size_t j = 0; j < n; ++j)
    for (const auto& m : monos) basis.push_back(OrePoly::D(v, static_cast<unsigned>(j)).scaled(RatFunc(m)));
  // target*B must be a left multiple of L.
  std::vector<std::vector<RatFunc>> rems;
  for (const auto& b : basis) {
    OrePoly r = divide(target * b, L).remainder;
    std::vector<RatFunc> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = r.coeff(i);
    rems.push_back(c);
  }
  std::map<std::pair<std::size_t, Exponents>, std::size_t> row_of;
  Matrix<Rat> a;
  for (std::size_t i = 0; i < n; ++i) {
    MPoly common(1);
    for (const auto& r : rems) common = divide_exact(common * r[i].den(), gcd(common, r[i].den())).value();
    for (std::size_t col = 0; col < basis.size(); ++col) {
      MPoly num = (rems[col][i] * RatFunc(common)).num();
      for (const auto& [e, c] : num.terms()) {
        auto [it, inserted] = row_of.try_emplace({i, e}, a.size());
        if (inserted) a.emplace_back(basis.size(), Rat(0));
        a[it->second][col] = c;
      }
    }
  }
  auto ns = nullspace(a, basis.size());
  std::vector<std::vector<Rat>> candidates = ns;
  if (ns.size() > 1) {
    std::vector<Rat> sum(basis.size(), Rat(0));
    for (const auto& vec : ns)
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += vec[i];
    candidates.push_back(sum);
  }
  for (const auto& vec : candidates) {
    OrePoly B(std::vector<RatFunc>{}, v);
    for (std::size_t col = 0; col < basis.size(); ++col)
      if (vec[col] != 0) B += basis[col].scaled(RatFunc(vec[col]));
    auto cert = transform(L, B);
    if (cert && cert->L1 == target) return cert;
  }
  return std::nullopt;
}

}  // namespace dopfac
