#include "dopfac/parse.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <tuple>

#include "dopfac/error.hpp"
#include "dopfac/registry.hpp"

namespace dopfac {

namespace {

struct Token {
  enum class Type { Number, Ident, Punct, End };
  Type type = Type::End;
  std::string text;
  std::size_t pos = 0;
  unsigned primes = 0;
  bool glued_paren = false;  // '(' follows with no space
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    Token t;
    t.pos = i;
    if (std::isdigit(c)) {
      t.type = Token::Type::Number;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) t.text += s[i++];
    } else if (std::isalpha(c) || c == '_') {
      t.type = Token::Type::Ident;
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
        t.text += s[i++];
      while (i < s.size() && s[i] == '\'') {
        ++t.primes;
        ++i;
      }
      t.glued_paren = i < s.size() && s[i] == '(';
    } else if (std::string_view("+-*/^(),;[]").find(static_cast<char>(c)) != std::string_view::npos) {
      t.type = Token::Type::Punct;
      t.text = std::string(1, static_cast<char>(c));
      ++i;
    } else {
      throw ParseError(std::string("unexpected character '") + static_cast<char>(c) + "'", i);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.pos = s.size();
  out.push_back(end);
  return out;
}

bool is_derivation_name(const std::string& s) {
  return s == "D" || (s.size() == 2 && s[0] == 'D' && std::islower(static_cast<unsigned char>(s[1])));
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  Ast parse() {
    Ast a = sum();
    if (peek().type != Token::Type::End) fail("unexpected '" + peek().text + "'");
    return a;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  bool at(const char* p) const { return peek().type == Token::Type::Punct && peek().text == p; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().pos); }
  void expect(const char* p) {
    if (!at(p)) fail(std::string("expected '") + p + "'");
    ++i_;
  }

  static Ast binary(Ast::Kind k, std::size_t pos, Ast l, Ast r) {
    Ast a;
    a.kind = k;
    a.pos = pos;
    a.kids.push_back(std::move(l));
    a.kids.push_back(std::move(r));
    return a;
  }

  Ast sum() {
    Ast lhs = term();
    while (at("+") || at("-")) {
      Ast::Kind k = at("+") ? Ast::Kind::Add : Ast::Kind::Sub;
      std::size_t pos = peek().pos;
      ++i_;
      lhs = binary(k, pos, std::move(lhs), term());
    }
    return lhs;
  }

  bool starts_atom() const {
    return peek().type == Token::Type::Number || peek().type == Token::Type::Ident || at("(");
  }

  Ast term() {
    Ast lhs = unary();
    for (;;) {
      std::size_t pos = peek().pos;
      if (at("*") || at("/")) {
        Ast::Kind k = at("*") ? Ast::Kind::Mul : Ast::Kind::Div;
        ++i_;
        lhs = binary(k, pos, std::move(lhs), unary());
      } else if (starts_atom()) {
        lhs = binary(Ast::Kind::Mul, pos, std::move(lhs), unary());
      } else {
        return lhs;
      }
    }
  }

  Ast unary() {
    if (at("-")) {
      Ast a;
      a.kind = Ast::Kind::Neg;
      a.pos = peek().pos;
      ++i_;
      a.kids.push_back(unary());
      return a;
    }
    return power();
  }

  Ast power() {
    Ast base = atom();
    while (at("^")) {
      std::size_t pos = peek().pos;
      ++i_;
      if (peek().type != Token::Type::Number) fail("exponent must be a nonnegative integer literal");
      Ast a;
      a.kind = Ast::Kind::Pow;
      a.pos = pos;
      unsigned long e = std::stoul(peek().text);
      if (e > 10000) fail("exponent too large");
      a.power = static_cast<unsigned>(e);
      ++i_;
      a.kids.push_back(std::move(base));
      base = std::move(a);
    }
    return base;
  }

  std::vector<Ast> arguments() {
    expect("(");
    std::vector<Ast> args;
    if (at(")")) fail("empty argument list");
    for (;;) {
      args.push_back(sum());
      if (at(",") || at(";")) {
        ++i_;
        continue;
      }
      expect(")");
      return args;
    }
  }

  Ast atom() {
    const Token& t = peek();
    Ast a;
    a.pos = t.pos;
    switch (t.type) {
      case Token::Type::Number:
        a.kind = Ast::Kind::Number;
        a.number = Rat(Int(t.text));
        ++i_;
        return a;
      case Token::Type::End:
        fail("unexpected end of input");
      case Token::Type::Punct:
        if (at("(")) {
          ++i_;
          Ast inner = sum();
          expect(")");
          return inner;
        }
        fail("unexpected '" + t.text + "'");
      case Token::Type::Ident:
        break;
    }
    ++i_;
    if (t.text == "D" && at("[")) {
      ++i_;
      if (peek().type != Token::Type::Ident) fail("function name expected");
      a.kind = Ast::Kind::Call;
      a.name = peek().text;
      a.explicit_deriv = true;
      ++i_;
      while (at(",")) {
        ++i_;
        if (peek().type != Token::Type::Number) fail("derivative count expected");
        a.deriv.push_back(static_cast<std::uint32_t>(std::stoul(peek().text)));
        ++i_;
      }
      expect("]");
      if (!at("(")) fail("argument list expected");
      a.kids = arguments();
      return a;
    }
    if (t.glued_paren) {
      a.kind = Ast::Kind::Call;
      a.name = t.text;
      a.primes = t.primes;
      a.kids = arguments();
      return a;
    }
    if (t.primes > 0) throw ParseError("primes need an argument list", t.pos);
    if (is_derivation_name(t.text)) {
      a.kind = Ast::Kind::Derivation;
      a.name = t.text.substr(1);
      return a;
    }
    a.kind = Ast::Kind::Variable;
    a.name = t.text;
    return a;
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

bool is_rational(const Ast& a) {
  if (a.kind == Ast::Kind::Derivation || a.kind == Ast::Kind::Call) return false;
  return std::all_of(a.kids.begin(), a.kids.end(), is_rational);
}

template <class T>
T power_of(const T& base, unsigned e, T one) {
  T r = std::move(one), b = base;
  while (e > 0) {
    if (e & 1U) r = r * b;
    e >>= 1U;
    if (e > 0) b = b * b;
  }
  return r;
}

RatFunc to_rat(const Ast& a) {
  switch (a.kind) {
    case Ast::Kind::Number:
      return RatFunc(a.number);
    case Ast::Kind::Variable:
      return RatFunc::variable(var(a.name));
    case Ast::Kind::Derivation:
      throw ParseError("derivation in coefficient position", a.pos);
    case Ast::Kind::Call:
      throw ParseError("function call in coefficient position", a.pos);
    case Ast::Kind::Neg:
      return -to_rat(a.kids[0]);
    case Ast::Kind::Add:
      return to_rat(a.kids[0]) + to_rat(a.kids[1]);
    case Ast::Kind::Sub:
      return to_rat(a.kids[0]) - to_rat(a.kids[1]);
    case Ast::Kind::Mul:
      return to_rat(a.kids[0]) * to_rat(a.kids[1]);
    case Ast::Kind::Div: {
      RatFunc d = to_rat(a.kids[1]);
      if (d.is_zero()) throw ParseError("division by zero", a.pos);
      return to_rat(a.kids[0]) / d;
    }
    case Ast::Kind::Pow:
      return power_of(to_rat(a.kids[0]), a.power, RatFunc(1));
  }
  return {};
}

// Constant divisor of an operator or expression.
RatFunc constant_divisor(const Ast& a) {
  if (!is_rational(a)) throw ParseError("division by an operator", a.pos);
  RatFunc d = to_rat(a);
  if (d.is_zero()) throw ParseError("division by zero", a.pos);
  if (!d.is_constant()) throw ParseError("operator divided by a non-constant; write the coefficient on the left", a.pos);
  return d;
}

template <class Op, class Lift, class Deriv>
Op to_op(const Ast& a, const Lift& lift, const Deriv& deriv) {
  if (is_rational(a)) return lift(to_rat(a));
  auto rec = [&](const Ast& k) { return to_op<Op>(k, lift, deriv); };
  switch (a.kind) {
    case Ast::Kind::Derivation:
      return deriv(a);
    case Ast::Kind::Call:
      throw ParseError("function call in operator", a.pos);
    case Ast::Kind::Neg:
      return -rec(a.kids[0]);
    case Ast::Kind::Add:
      return rec(a.kids[0]) + rec(a.kids[1]);
    case Ast::Kind::Sub:
      return rec(a.kids[0]) - rec(a.kids[1]);
    case Ast::Kind::Mul:
      return rec(a.kids[0]) * rec(a.kids[1]);
    case Ast::Kind::Div:
      return rec(a.kids[0]).scaled(constant_divisor(a.kids[1]).inverse());
    case Ast::Kind::Pow:
      return power_of(rec(a.kids[0]), a.power, lift(RatFunc(1)));
    default:
      break;
  }
  throw ParseError("malformed operator", a.pos);
}

LinDiffExpr to_expr(const Ast& a) {
  if (is_rational(a)) return LinDiffExpr(to_rat(a));
  switch (a.kind) {
    case Ast::Kind::Derivation:
      throw ParseError("derivation in expression", a.pos);
    case Ast::Kind::Call: {
      const auto& args = a.kids;
      if (!a.explicit_deriv && a.primes == 0) {
        if (a.name == "exp") {
          if (args.size() != 1) throw ParseError("exp takes one argument", a.pos);
          return LinDiffExpr::exp(to_expr(args[0]));
        }
        if (a.name == "log") {
          if (args.size() != 1) throw ParseError("log takes one argument", a.pos);
          return LinDiffExpr::log(to_rat(args[0]));
        }
        if (a.name == "int") {
          if (args.size() != 2 || args[0].kind != Ast::Kind::Variable)
            throw ParseError("int takes a variable and an integrand", a.pos);
          return LinDiffExpr::antideriv(var(args[0].name), to_expr(args[1]));
        }
      }
      if (is_derivation_name(a.name)) throw ParseError("derivation symbol used as a function", a.pos);
      Exponents d = a.deriv;
      if (a.primes > 0) {
        if (args.size() != 1) throw ParseError("primes need a single argument; use D[F,i,j](...)", a.pos);
        d = {a.primes};
      }
      std::vector<RatFunc> vals;
      for (const auto& k : args) vals.push_back(to_rat(k));
      return LinDiffExpr::function(a.name, std::move(vals), std::move(d));
    }
    case Ast::Kind::Neg:
      return -to_expr(a.kids[0]);
    case Ast::Kind::Add:
      return to_expr(a.kids[0]) + to_expr(a.kids[1]);
    case Ast::Kind::Sub:
      return to_expr(a.kids[0]) - to_expr(a.kids[1]);
    case Ast::Kind::Mul:
      return to_expr(a.kids[0]) * to_expr(a.kids[1]);
    case Ast::Kind::Div: {
      if (!is_rational(a.kids[1])) throw ParseError("division by a non-rational expression", a.pos);
      RatFunc d = to_rat(a.kids[1]);
      if (d.is_zero()) throw ParseError("division by zero", a.pos);
      return to_expr(a.kids[0]).scaled(d.inverse());
    }
    case Ast::Kind::Pow:
      throw ParseError("power of a non-rational expression", a.pos);
    default:
      break;
  }
  throw ParseError("malformed expression", a.pos);
}

// Linear form sum_u op_u * u + pure over the unknowns of a system.
struct LinForm {
  CCOperator pure;
  std::map<std::string, CCOperator> u;

  bool has_unknowns() const { return !u.empty(); }
  LinForm scaled(const CCOperator& c) const {
    LinForm r{pure * c, {}};
    for (const auto& [n, p] : u) {
      CCOperator q = p * c;
      if (!q.is_zero()) r.u[n] = q;
    }
    return r;
  }
  LinForm plus(const LinForm& o, long sign) const {
    LinForm r = *this;
    r.pure = r.pure + o.pure * MPoly(sign);
    for (const auto& [n, p] : o.u) {
      CCOperator q = r.u[n] + p * MPoly(sign);
      if (q.is_zero()) {
        r.u.erase(n);
      } else {
        r.u[n] = q;
      }
    }
    return r;
  }
};

LinForm to_lin(const Ast& a) {
  switch (a.kind) {
    case Ast::Kind::Number:
      return {MPoly(a.number), {}};
    case Ast::Kind::Derivation:
      if (a.name.empty()) throw ParseError("bare D needs a variable, e.g. Dx", a.pos);
      return {cc_derivation(var(a.name)), {}};
    case Ast::Kind::Variable:
      return {MPoly(), {{a.name, MPoly(1)}}};
    case Ast::Kind::Call:
      throw ParseError("function call in a system", a.pos);
    case Ast::Kind::Neg:
      return to_lin(a.kids[0]).scaled(MPoly(-1));
    case Ast::Kind::Add:
      return to_lin(a.kids[0]).plus(to_lin(a.kids[1]), 1);
    case Ast::Kind::Sub:
      return to_lin(a.kids[0]).plus(to_lin(a.kids[1]), -1);
    case Ast::Kind::Mul: {
      LinForm l = to_lin(a.kids[0]), r = to_lin(a.kids[1]);
      if (l.has_unknowns() && r.has_unknowns()) throw ParseError("product of unknowns", a.pos);
      return l.has_unknowns() ? l.scaled(r.pure) : r.scaled(l.pure);
    }
    case Ast::Kind::Div: {
      LinForm d = to_lin(a.kids[1]);
      if (d.has_unknowns() || !d.pure.is_constant() || d.pure.is_zero())
        throw ParseError("division by a nonzero constant expected", a.pos);
      return to_lin(a.kids[0]).scaled(MPoly(Rat(1) / d.pure.constant_term()));
    }
    case Ast::Kind::Pow: {
      LinForm b = to_lin(a.kids[0]);
      if (b.has_unknowns()) throw ParseError("power of an unknown", a.pos);
      return {power_of(b.pure, a.power, MPoly(1)), {}};
    }
  }
  throw ParseError("malformed equation", a.pos);
}

// u2 < u10: compare the letter prefix, then the numeric suffix.
bool natural_less(const std::string& a, const std::string& b) {
  auto split = [](const std::string& s) {
    std::size_t k = s.size();
    while (k > 0 && std::isdigit(static_cast<unsigned char>(s[k - 1]))) --k;
    std::string digits = s.substr(k);
    digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size()));
    return std::tuple(s.substr(0, k), digits.size(), digits, s);
  };
  return split(a) < split(b);
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t k = s.find(sep, start);
    out.push_back(trim(s.substr(start, k == std::string_view::npos ? std::string_view::npos : k - start)));
    if (k == std::string_view::npos) return out;
    start = k + 1;
  }
}

}  // namespace

Ast parse_ast(std::string_view text) { return Parser(text).parse(); }

RatFunc parse_ratfunc(std::string_view text) { return to_rat(parse_ast(text)); }

OrePoly parse_lodo(std::string_view text, std::size_t v) {
  Ast a = parse_ast(text);
  return to_op<OrePoly>(
      a, [v](const RatFunc& c) { return OrePoly(c, v); },
      [v](const Ast& d) {
        if (!d.name.empty() && d.name != var_name(v))
          throw ParseError("derivation in another variable than " + var_name(v), d.pos);
        return OrePoly::D(v);
      });
}

PDOp parse_pdop(std::string_view text) {
  Ast a = parse_ast(text);
  return to_op<PDOp>(
      a, [](const RatFunc& c) { return PDOp(c); },
      [](const Ast& d) {
        if (d.name.empty()) throw ParseError("bare D needs a variable, e.g. Dx", d.pos);
        return PDOp::derivation(var(d.name));
      });
}

LinDiffExpr parse_expr(std::string_view text) { return to_expr(parse_ast(text)); }

CCOperator parse_cc_operator(std::string_view text) {
  LinForm f = to_lin(parse_ast(text));
  if (f.has_unknowns()) throw Error("unknown '" + f.u.begin()->first + "' in an operator");
  return f.pure;
}

CCSystem parse_system(std::string_view text) {
  std::vector<LinForm> rows;
  std::size_t line_no = 0;
  for (const auto& line : split(text, '\n')) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto sides = split(line, '=');
    if (sides.size() > 2) throw Error("line " + std::to_string(line_no) + ": more than one '='");
    try {
      LinForm row = to_lin(parse_ast(sides[0]));
      if (sides.size() == 2) row = row.plus(to_lin(parse_ast(sides[1])), -1);
      if (!row.pure.is_zero()) throw Error("inhomogeneous equation");
      rows.push_back(std::move(row));
    } catch (const Error& e) {
      throw Error("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (rows.empty()) throw Error("empty system");
  std::set<std::string> names;
  for (const auto& r : rows)
    for (const auto& [n, p] : r.u) names.insert(n);
  CCSystem s;
  s.unknowns.assign(names.begin(), names.end());
  std::sort(s.unknowns.begin(), s.unknowns.end(), natural_less);
  for (const auto& r : rows) {
    std::vector<CCOperator> eq;
    for (const auto& n : s.unknowns) {
      auto it = r.u.find(n);
      eq.push_back(it == r.u.end() ? MPoly() : it->second);
    }
    s.equations.push_back(std::move(eq));
  }
  s.check();
  return s;
}

ModuleOrder parse_order(std::string_view text, const CCSystem& s) {
  ModuleOrder o = default_order(s);
  for (const auto& part : split(text, ';')) {
    if (part.empty()) continue;
    auto items = split(part, '>');
    bool derivs = is_derivation_name(items[0]);
    std::vector<std::size_t> rank;
    for (const auto& it : items) {
      if (is_derivation_name(it) != derivs) throw Error("order mixes unknowns and derivations: " + part);
      if (derivs) {
        if (it == "D") throw Error("bare D in an order");
        rank.push_back(var(it.substr(1)));
        continue;
      }
      auto pos = std::find(s.unknowns.begin(), s.unknowns.end(), it);
      if (pos == s.unknowns.end()) throw Error("unknown '" + it + "' in order");
      rank.push_back(static_cast<std::size_t>(pos - s.unknowns.begin()));
    }
    std::set<std::size_t> distinct(rank.begin(), rank.end());
    if (distinct.size() != rank.size()) throw Error("repeated entry in order: " + part);
    if (derivs) {
      o.var_rank = rank;
    } else {
      if (rank.size() != s.unknowns.size()) throw Error("order must list every unknown");
      o.unknown_rank = rank;
    }
  }
  return o;
}

}  // namespace dopfac
