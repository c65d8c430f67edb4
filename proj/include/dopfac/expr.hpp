#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dopfac/error.hpp"
#include "dopfac/pdop.hpp"
#include "dopfac/ratfunc.hpp"

namespace dopfac {

class LinDiffExpr;

// Raised when d/dv of an antiderivative in another variable is requested
// while v occurs in the integrand.
class UnderdeterminedDerivative : public Error {
 public:
  UnderdeterminedDerivative() : Error("underdetermined derivative") {}
};

// A derivative of a named arbitrary function evaluated at rational arguments.
// deriv[j] counts derivatives in slot j (trimmed like an exponent vector).
struct FuncTerm {
  std::string name;
  std::vector<RatFunc> args;
  Exponents deriv;
};
int compare(const FuncTerm& a, const FuncTerm& b);

struct SpecialNode {
  enum class Kind { Exp, Log, Antideriv };
  Kind kind = Kind::Exp;
  std::size_t var = 0;                       // Antideriv
  RatFunc log_arg;                           // Log
  std::shared_ptr<const LinDiffExpr> expr;   // Exp argument or Antideriv integrand
};
int compare(const SpecialNode& a, const SpecialNode& b);

// Product of at most one function derivative and a sorted multiset of
// special factors. The empty key is the pure rational part.
struct TermKey {
  std::optional<FuncTerm> func;
  std::vector<SpecialNode> nodes;

  bool is_pure() const { return !func && nodes.empty(); }
  // True if the key is K-linear in some arbitrary function.
  bool has_functions() const;
};
int compare(const TermKey& a, const TermKey& b);

struct TermKeyLess {
  bool operator()(const TermKey& a, const TermKey& b) const { return compare(a, b) < 0; }
};

// K-linear combination of keys with rational function coefficients.
class LinDiffExpr {
 public:
  using Terms = std::map<TermKey, RatFunc, TermKeyLess>;

  LinDiffExpr() = default;
  LinDiffExpr(const RatFunc& r);  // NOLINT(google-explicit-constructor)
  LinDiffExpr(long c) : LinDiffExpr(RatFunc(c)) {}  // NOLINT(google-explicit-constructor)

  static LinDiffExpr function(std::string name, std::vector<RatFunc> args,
                              Exponents deriv = {});
  static LinDiffExpr exp(const LinDiffExpr& arg);
  static LinDiffExpr log(const RatFunc& arg);
  static LinDiffExpr antideriv(std::size_t var, const LinDiffExpr& integrand);
  static LinDiffExpr from_key(const TermKey& key, const RatFunc& coeff);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool has_functions() const;
  bool depends_on(std::size_t v) const;
  // The pure rational value when no other key is present.
  std::optional<RatFunc> as_ratfunc() const;
  RatFunc coefficient(const TermKey& key) const;
  // Names of arbitrary functions occurring anywhere.
  std::vector<std::string> function_names() const;
  bool has_antiderivatives() const;

  LinDiffExpr& operator+=(const LinDiffExpr& o);
  LinDiffExpr& operator-=(const LinDiffExpr& o);
  friend LinDiffExpr operator+(LinDiffExpr a, const LinDiffExpr& b) { return a += b; }
  friend LinDiffExpr operator-(LinDiffExpr a, const LinDiffExpr& b) { return a -= b; }
  LinDiffExpr operator-() const;
  LinDiffExpr scaled(const RatFunc& c) const;
  // Throws "nonlinear expression" when both sides carry arbitrary functions.
  friend LinDiffExpr operator*(const LinDiffExpr& a, const LinDiffExpr& b);

  friend bool operator==(const LinDiffExpr& a, const LinDiffExpr& b) {
    return compare(a, b) == 0;
  }
  friend int compare(const LinDiffExpr& a, const LinDiffExpr& b);

  std::string to_string() const;

 private:
  void add(const TermKey& key, const RatFunc& c);
  Terms terms_;
};

std::string to_string(const TermKey& key);

LinDiffExpr diff_expr(const LinDiffExpr& e, std::size_t v);

// Applies L, choosing for each derivative multi-index an order of
// differentiation that avoids underdetermined antiderivative steps.
LinDiffExpr apply_pdop(const PDOp& L, const LinDiffExpr& e);

inline bool is_zero(const LinDiffExpr& e) { return e.is_zero(); }

}  // namespace dopfac
