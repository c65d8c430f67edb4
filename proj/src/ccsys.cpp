#include "dopfac/ccsys.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "dopfac/error.hpp"
#include "dopfac/linalg.hpp"
#include "dopfac/ratfunc.hpp"
#include "dopfac/registry.hpp"

namespace dopfac {

using Row = std::vector<CCOperator>;

CCOperator cc_derivation(std::size_t v) { return MPoly::variable(v); }

PDOp cc_pdop(const CCOperator& p) {
  PDOp out;
  for (const auto& [e, c] : p.terms()) out += PDOp::monomial(e, RatFunc(c));
  return out;
}

std::string cc_to_string(const CCOperator& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [e, c] : p.terms()) append_signed_term(out, RatFunc(c), derivation_monomial_string(e));
  return out;
}

void CCSystem::check() const {
  if (unknowns.empty()) throw Error("system without unknowns");
  for (const auto& row : equations)
    if (row.size() != unknowns.size()) throw Error("equation length does not match the unknowns");
}

std::string CCSystem::equation_to_string(const Row& row) const {
  std::string out;
  for (std::size_t j = 0; j < row.size(); ++j) {
    for (const auto& [e, c] : row[j].terms()) {
      std::string mono = derivation_monomial_string(e);
      append_signed_term(out, RatFunc(c), mono.empty() ? unknowns[j] : mono + "*" + unknowns[j]);
    }
  }
  return out.empty() ? "0" : out;
}

ModuleOrder default_order(const CCSystem& s) {
  ModuleOrder o;
  for (std::size_t j = s.unknowns.size(); j-- > 0;) o.unknown_rank.push_back(j);
  o.var_rank = {var("x"), var("y")};
  return o;
}

namespace {

struct Lead {
  std::size_t pos = 0;
  Exponents mon;
  Rat coeff;
};

class Ordering {
 public:
  Ordering(const ModuleOrder& o, std::size_t n) : o_(o), rank_(n, n) {
    if (o.unknown_rank.size() != n) throw Error("unknown ranking does not list every unknown");
    for (std::size_t r = 0; r < n; ++r) {
      if (o.unknown_rank[r] >= n || rank_[o.unknown_rank[r]] != n)
        throw Error("invalid unknown ranking");
      rank_[o.unknown_rank[r]] = r;
    }
  }

  // LEX on var_rank; true if a > b.
  bool mon_greater(const Exponents& a, const Exponents& b) const {
    for (auto v : o_.var_rank) {
      auto ea = exp_at(a, v), eb = exp_at(b, v);
      if (ea != eb) return ea > eb;
    }
    return false;
  }

  // true if (pa, a) > (pb, b)
  bool term_greater(std::size_t pa, const Exponents& a, std::size_t pb, const Exponents& b) const {
    if (pa != pb) return rank_[pa] < rank_[pb];
    return mon_greater(a, b);
  }

  std::optional<Lead> lead(const Row& r) const {
    for (auto pos : o_.unknown_rank) {
      if (r[pos].is_zero()) continue;
      const Exponents* best = nullptr;
      const Rat* c = nullptr;
      for (const auto& [e, a] : r[pos].terms()) {
        if (!best || mon_greater(e, *best)) {
          best = &e;
          c = &a;
        }
      }
      return Lead{pos, *best, *c};
    }
    return std::nullopt;
  }

  void check_vars(const Row& r) const {
    std::set<std::size_t> allowed(o_.var_rank.begin(), o_.var_rank.end());
    for (const auto& p : r)
      for (auto v : p.variables())
        if (!allowed.count(v)) throw Error("derivation D" + var_name(v) + " is not ranked");
  }

 private:
  const ModuleOrder& o_;
  std::vector<std::size_t> rank_;
};

bool row_zero(const Row& r) {
  return std::all_of(r.begin(), r.end(), [](const MPoly& p) { return p.is_zero(); });
}

Row scaled_shift(const Row& g, const Exponents& m, const Rat& c) {
  Row out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = g[i].mul_monomial(m, c);
  return out;
}

void sub_into(Row& p, const Row& q) {
  for (std::size_t i = 0; i < p.size(); ++i) p[i] -= q[i];
}

Row monic_row(const Row& r, const Ordering& ord) {
  auto l = ord.lead(r);
  if (!l) return r;
  return scaled_shift(r, {}, 1 / l->coeff);
}

Exponents mon_lcm(const Exponents& a, const Exponents& b) {
  Exponents e(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::max(exp_at(a, i), exp_at(b, i));
  trim(e);
  return e;
}

Row reduce_row(Row p, const std::vector<Row>& basis, const std::vector<Lead>& leads,
               const Ordering& ord) {
  Row out(p.size());
  while (auto t = ord.lead(p)) {
    bool done = false;
    for (std::size_t k = 0; k < basis.size(); ++k) {
      if (leads[k].pos != t->pos) continue;
      auto q = exp_div(t->mon, leads[k].mon);
      if (!q) continue;
      sub_into(p, scaled_shift(basis[k], *q, t->coeff / leads[k].coeff));
      done = true;
      break;
    }
    if (!done) {
      MPoly m = MPoly::monomial(t->mon, t->coeff);
      out[t->pos] += m;
      p[t->pos] -= m;
    }
  }
  return out;
}

std::vector<Row> groebner(const std::vector<Row>& rows, const Ordering& ord) {
  std::vector<Row> g;
  std::vector<Lead> leads;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  auto add = [&](Row r) {
    r = monic_row(r, ord);
    Lead l = *ord.lead(r);
    for (std::size_t k = 0; k < g.size(); ++k)
      if (leads[k].pos == l.pos) pairs.emplace_back(k, g.size());
    g.push_back(std::move(r));
    leads.push_back(std::move(l));
  };
  for (const auto& r : rows) {
    Row nf = reduce_row(r, g, leads, ord);
    if (!row_zero(nf)) add(nf);
  }
  while (!pairs.empty()) {
    auto [i, j] = pairs.back();
    pairs.pop_back();
    Exponents l = mon_lcm(leads[i].mon, leads[j].mon);
    Row s = scaled_shift(g[i], *exp_div(l, leads[i].mon), 1);
    sub_into(s, scaled_shift(g[j], *exp_div(l, leads[j].mon), 1));
    Row nf = reduce_row(s, g, leads, ord);
    if (!row_zero(nf)) add(nf);
  }

  // minimize, then inter-reduce
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < g.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < g.size() && !redundant; ++j) {
      if (i == j || leads[i].pos != leads[j].pos) continue;
      if (!exp_div(leads[i].mon, leads[j].mon)) continue;
      redundant = leads[i].mon != leads[j].mon || j < i;
    }
    if (!redundant) keep.push_back(i);
  }
  std::vector<Row> out;
  for (auto i : keep) {
    std::vector<Row> others;
    std::vector<Lead> other_leads;
    for (auto j : keep) {
      if (j == i) continue;
      others.push_back(g[j]);
      other_leads.push_back(leads[j]);
    }
    out.push_back(monic_row(reduce_row(g[i], others, other_leads, ord), ord));
  }
  std::sort(out.begin(), out.end(), [&](const Row& a, const Row& b) {
    Lead la = *ord.lead(a), lb = *ord.lead(b);
    return ord.term_greater(la.pos, la.mon, lb.pos, lb.mon);
  });
  return out;
}

std::vector<Lead> leads_of(const std::vector<Row>& basis, const Ordering& ord) {
  std::vector<Lead> out;
  for (const auto& r : basis) out.push_back(*ord.lead(r));
  return out;
}

struct LinearForm {
  Rat alpha, beta, gamma;
};

// a*x + b*y (+ c when allowed) with rational coefficients.
std::optional<LinearForm> linear_form(const MPoly& p, bool allow_constant) {
  std::size_t x = var("x"), y = var("y");
  LinearForm f;
  for (const auto& [e, c] : p.terms()) {
    if (exp_degree(e) == 0 && allow_constant) {
      f.gamma = c;
    } else if (e == unit_exponent(x)) {
      f.alpha = c;
    } else if (e == unit_exponent(y)) {
      f.beta = c;
    } else {
      return std::nullopt;
    }
  }
  return f;
}

const char* const kNames[] = {"F", "G", "H", "K", "M", "N", "P", "Q", "R", "S"};

std::string function_name(std::size_t i) {
  constexpr std::size_t n = sizeof(kNames) / sizeof(kNames[0]);
  if (i < n) return kNames[i];
  return "F" + std::to_string(i - n + 1);
}

// exp(e) * sum_k p[k] * Phi^(k)(sigma), with e = ex*x + ey*y and
// sigma = c1*x + c2*y. On such functions Dx acts as ex + c1*d, Dy as
// ey + c2*d, where d differentiates Phi.
struct Mode {
  std::string name;
  RatFunc exponent, sigma;
  Rat ex, ey, c1, c2;
  MPoly p;  // polynomial in the slot of x, standing for d
};

LinDiffExpr mode_expr(const Mode& m, const MPoly& p) {
  std::size_t t = var("x");
  LinDiffExpr body;
  for (const auto& [e, c] : p.terms()) {
    auto k = exp_at(e, t);
    body += LinDiffExpr::function(m.name, {m.sigma}, unit_exponent(0, k)).scaled(RatFunc(c));
  }
  if (m.exponent.is_zero()) return body;
  return LinDiffExpr::exp(LinDiffExpr(m.exponent)) * body;
}

MPoly on_mode(const CCOperator& op, const Mode& m) {
  std::size_t x = var("x"), y = var("y");
  MPoly d = MPoly::variable(x);
  MPoly r = op.substitute(x, MPoly(m.ex) + d * MPoly(m.c1));
  return r.substitute(y, MPoly(m.ey) + d * MPoly(m.c2));
}

std::vector<Mode> modes_of(const LinDiffExpr& u) {
  std::map<std::string, Mode> by_name;
  std::vector<std::string> order;
  for (const auto& [key, c] : u.terms()) {
    auto fail = [] { throw Error("unsupported back-substitution shape"); };
    if (!key.func || !c.is_constant() || key.func->args.size() != 1) fail();
    RatFunc expo;
    if (key.nodes.size() > 1) fail();
    if (key.nodes.size() == 1) {
      const auto& n = key.nodes[0];
      if (n.kind != SpecialNode::Kind::Exp) fail();
      auto r = n.expr->as_ratfunc();
      if (!r) fail();
      expo = *r;
    }
    const RatFunc& sigma = key.func->args[0];
    if (!expo.is_polynomial() || !sigma.is_polynomial()) fail();
    auto fe = linear_form(expo.num(), false), fs = linear_form(sigma.num(), false);
    if (!fe || !fs) fail();
    const std::string& name = key.func->name;
    auto it = by_name.find(name);
    if (it == by_name.end()) {
      Mode m{name, expo, sigma, fe->alpha, fe->beta, fs->alpha, fs->beta, MPoly()};
      it = by_name.emplace(name, m).first;
      order.push_back(name);
    } else if (!(it->second.exponent == expo) || !(it->second.sigma == sigma)) {
      fail();
    }
    auto k = exp_at(key.func->deriv, 0);
    it->second.p += MPoly::monomial(unit_exponent(var("x"), k), c.constant_value());
  }
  std::vector<Mode> out;
  for (const auto& n : order) out.push_back(by_name.at(n));
  return out;
}

// Polynomial kernel vector of a matrix over Q[d], integer content 1.
std::optional<std::vector<MPoly>> poly_kernel(const Matrix<RatFunc>& a, std::size_t ncols,
                                              std::size_t sign_slot) {
  auto basis = nullspace(a, ncols);
  if (basis.size() != 1) return std::nullopt;
  MPoly den(1);
  for (const auto& r : basis[0]) {
    MPoly g = gcd(den, r.den());
    den = *divide_exact(den * r.den(), g);
  }
  std::vector<MPoly> v;
  MPoly content;
  for (const auto& r : basis[0]) {
    MPoly p = *divide_exact(r.num() * den, r.den());
    content = gcd(content, p);
    v.push_back(p);
  }
  Int num = 0, dlcm = 1;
  for (auto& p : v) {
    if (p.is_zero()) continue;
    p = *divide_exact(p, content);
    for (const auto& [e, c] : p.terms()) {
      mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), c.get_num_mpz_t());
      mpz_lcm(dlcm.get_mpz_t(), dlcm.get_mpz_t(), c.get_den_mpz_t());
    }
  }
  Rat s(dlcm, num);
  s.canonicalize();
  const MPoly& lead = v[sign_slot].is_zero() ? *std::find_if(v.begin(), v.end(), [](const MPoly& p) {
    return !p.is_zero();
  }) : v[sign_slot];
  if (lead.leading_coeff() < 0) s = -s;
  for (auto& p : v) p *= s;
  return v;
}

}  // namespace

std::vector<CCOperator> Elimination::scalar_equations() const {
  std::vector<CCOperator> out;
  std::size_t s = scalar_unknown();
  for (const auto& row : basis) {
    bool only = true;
    for (std::size_t j = 0; j < row.size(); ++j)
      if (j != s && !row[j].is_zero()) only = false;
    if (only) out.push_back(row[s]);
  }
  return out;
}

Elimination groebner_eliminate(const CCSystem& s, const ModuleOrder& order) {
  s.check();
  Ordering ord(order, s.unknowns.size());
  for (const auto& r : s.equations) ord.check_vars(r);
  Elimination e{s, order, groebner(s.equations, ord), {}};
  for (const auto& row : e.basis) {
    std::size_t nonzero = 0, pos = 0;
    for (std::size_t j = 0; j < row.size(); ++j)
      if (!row[j].is_zero()) {
        ++nonzero;
        pos = j;
      }
    if (nonzero == 1 && row[pos].is_constant()) e.zero_unknowns.push_back(pos);
  }
  std::sort(e.zero_unknowns.begin(), e.zero_unknowns.end());
  return e;
}

std::vector<CCOperator> normal_form(const Row& row, const std::vector<Row>& basis,
                                    const ModuleOrder& order) {
  Ordering ord(order, row.size());
  return reduce_row(row, basis, leads_of(basis, ord), ord);
}

bool same_module(const std::vector<Row>& a, const std::vector<Row>& b, const ModuleOrder& order) {
  if (a.empty() || b.empty()) return a.empty() == b.empty();
  Ordering ord(order, a.front().size());
  auto ga = groebner(a, ord), gb = groebner(b, ord);
  auto la = leads_of(ga, ord), lb = leads_of(gb, ord);
  for (const auto& r : a)
    if (!row_zero(reduce_row(r, gb, lb, ord))) return false;
  for (const auto& r : b)
    if (!row_zero(reduce_row(r, ga, la, ord))) return false;
  return true;
}

LinearFactors linear_factors(const CCOperator& input) {
  if (input.is_zero()) throw Error("linear_factors of the zero operator");
  std::size_t x = var("x"), y = var("y");
  for (auto v : input.variables())
    if (v != x && v != y) throw Error("operator in Dx, Dy expected");
  LinearFactors out;
  MPoly p = input;
  while (!p.is_constant()) {
    std::uint64_t d = p.total_degree();
    MPoly dehom;
    for (const auto& [e, c] : p.terms())
      if (exp_degree(e) == d) dehom += MPoly::monomial(unit_exponent(x, exp_at(e, x)), c);
    // candidate directions (alpha, beta): Dx - r*Dy for roots r, and Dy
    std::vector<std::pair<Rat, Rat>> dirs;
    if (!dehom.is_constant()) {
      auto roots = rational_roots(dehom);
      roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
      for (const auto& r : roots) dirs.emplace_back(Rat(1), Rat(-r));
    }
    if (dehom.degree_in(x) < d) dirs.emplace_back(Rat(0), Rat(1));

    std::optional<MPoly> found;
    for (const auto& [a, b] : dirs) {
      // gamma lives in the slot of the eliminated derivation
      std::size_t gv = a != 0 ? x : y, other = a != 0 ? y : x;
      MPoly value = a != 0 ? MPoly(-b) * MPoly::variable(y) - MPoly::variable(x)
                           : -MPoly::variable(y);
      MPoly spec = p.substitute(gv, value);
      MPoly g;
      for (const auto& c : spec.coefficients_in(other)) g = gcd(g, c);
      if (g.is_constant()) continue;
      auto roots = rational_roots(g);
      if (roots.empty()) continue;
      MPoly f = MPoly(a) * MPoly::variable(x) + MPoly(b) * MPoly::variable(y) + MPoly(roots.front());
      if (auto q = divide_exact(p, f)) {
        out.factors.push_back(f);
        p = *q;
        found = f;
        break;
      }
    }
    if (!found) break;
  }
  out.remainder = p;
  return out;
}

LinDiffExpr solve_cc_scalar(const std::vector<CCOperator>& factors) {
  std::size_t x = var("x"), y = var("y");
  RatFunc X = RatFunc::variable(x), Y = RatFunc::variable(y);
  for (std::size_t i = 0; i < factors.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const MPoly &a = factors[i], &b = factors[j];
      if (!a.is_zero() && !b.is_zero() && a * b.leading_coeff() == b * a.leading_coeff())
        throw Error("multiplicity unsupported");
    }
  LinDiffExpr u;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    auto f = linear_form(factors[i], true);
    if (!f || (f->alpha == 0 && f->beta == 0)) throw Error("linear factor in Dx, Dy expected");
    Rat c1 = f->beta, c2 = -f->alpha;
    if (c1 < 0 || (c1 == 0 && c2 < 0)) {
      c1 = -c1;
      c2 = -c2;
    }
    Rat lambda = -f->gamma / (f->alpha * f->alpha + f->beta * f->beta);
    Mode m{function_name(i), X * RatFunc(lambda * f->alpha) + Y * RatFunc(lambda * f->beta),
           X * RatFunc(c1) + Y * RatFunc(c2), 0, 0, 0, 0, MPoly()};
    u += mode_expr(m, MPoly(1));
  }
  return u;
}

bool verify_system(const CCSystem& s, const SolutionVector& sol) {
  s.check();
  if (sol.size() != s.unknowns.size()) throw Error("solution length does not match the unknowns");
  for (const auto& row : s.equations) {
    LinDiffExpr total;
    for (std::size_t j = 0; j < row.size(); ++j)
      if (!row[j].is_zero()) total += apply_pdop(cc_pdop(row[j]), sol[j]);
    if (!total.is_zero()) return false;
  }
  return true;
}

SolutionVector back_substitute(const Elimination& e, const LinDiffExpr& scalar_solution) {
  std::size_t n = e.original.unknowns.size(), s = e.scalar_unknown();
  SolutionVector out(n);
  for (const Mode& m : modes_of(scalar_solution)) {
    Matrix<RatFunc> a;
    for (const auto& row : e.basis) {
      std::vector<RatFunc> r;
      for (const auto& op : row) r.emplace_back(on_mode(op, m));
      a.push_back(std::move(r));
    }
    auto k = poly_kernel(a, n, s);
    if (!k || (*k)[s].is_zero()) throw Error("unsupported back-substitution shape");
    const MPoly& ks = (*k)[s];
    for (std::size_t j = 0; j < n; ++j) {
      MPoly pj = ks.is_constant() ? (*k)[j] * m.p * (1 / ks.constant_term()) : (*k)[j] * m.p;
      out[j] += mode_expr(m, pj);
    }
  }
  if (!verify_system(e.original, out)) throw Error("verification failed");
  return out;
}

SolutionVector solve_system(const CCSystem& s, const ModuleOrder& order) {
  Elimination e = groebner_eliminate(s, order);
  auto scalar = e.scalar_equations();
  if (scalar.size() != 1) throw Error("unsupported back-substitution shape");
  LinearFactors lf = linear_factors(scalar[0]);
  if (!lf.remainder.is_constant()) throw Error("scalar equation has a nonlinear factor");
  return back_substitute(e, solve_cc_scalar(lf.factors));
}

CCSubstitution apply_substitution(const CCSystem& s, const std::vector<Row>& t,
                                  const ModuleOrder& order, std::vector<std::string> new_names) {
  s.check();
  std::size_t n = s.unknowns.size();
  if (t.size() != n) throw Error("substitution matrix must be square in the unknowns");
  for (const auto& r : t)
    if (r.size() != n) throw Error("substitution matrix must be square in the unknowns");
  if (new_names.empty())
    for (const auto& u : s.unknowns) new_names.push_back(u + "bar");
  if (new_names.size() != n) throw Error("wrong number of new unknown names");

  // old unknowns occupy 0..n-1 and rank above the new ones at n..2n-1
  ModuleOrder big{order.unknown_rank, order.var_rank};
  for (auto j : order.unknown_rank) big.unknown_rank.push_back(n + j);
  Ordering ord(big, 2 * n);
  std::vector<Row> rows;
  for (const auto& r : s.equations) {
    Row w(2 * n);
    std::copy(r.begin(), r.end(), w.begin());
    rows.push_back(std::move(w));
  }
  for (std::size_t i = 0; i < n; ++i) {
    Row w(2 * n);
    for (std::size_t j = 0; j < n; ++j) w[j] = -t[i][j];
    w[n + i] = MPoly(1);
    rows.push_back(std::move(w));
  }
  for (const auto& r : rows) ord.check_vars(r);
  auto g = groebner(rows, ord);

  CCSubstitution out;
  out.system.unknowns = new_names;
  out.inverse.assign(n, Row(n));
  std::vector<bool> expressed(n, false);
  for (const auto& row : g) {
    Lead l = *ord.lead(row);
    if (l.pos >= n) {
      out.system.equations.emplace_back(row.begin() + static_cast<std::ptrdiff_t>(n), row.end());
    } else if (exp_degree(l.mon) == 0) {
      bool clean = true;
      for (std::size_t j = 0; j < n; ++j)
        if (j != l.pos && !row[j].is_zero()) clean = false;
      if (!clean || !row[l.pos].is_one()) continue;
      expressed[l.pos] = true;
      for (std::size_t j = 0; j < n; ++j) out.inverse[l.pos][j] = -row[n + j];
    }
  }
  if (std::find(expressed.begin(), expressed.end(), false) != expressed.end())
    throw Error("non-invertible substitution");
  return out;
}

SolutionVector apply_matrix(const std::vector<Row>& t, const SolutionVector& v) {
  SolutionVector out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i].size() != v.size()) throw Error("matrix and vector sizes differ");
    for (std::size_t j = 0; j < v.size(); ++j)
      if (!t[i][j].is_zero()) out[i] += apply_pdop(cc_pdop(t[i][j]), v[j]);
  }
  return out;
}

}  // namespace dopfac
