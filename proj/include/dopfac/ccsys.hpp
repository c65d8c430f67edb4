#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dopfac/expr.hpp"
#include "dopfac/mpoly.hpp"
#include "dopfac/pdop.hpp"

namespace dopfac {

// Constant-coefficient operator: a commutative polynomial whose exponent
// slot i stands for the derivation in registry variable i.
using CCOperator = MPoly;

CCOperator cc_derivation(std::size_t v);
PDOp cc_pdop(const CCOperator& p);
std::string cc_to_string(const CCOperator& p);  // "Dx^2*Dy - 1"

// Each equation is sum_j equations[i][j] u_j = 0.
struct CCSystem {
  std::vector<std::string> unknowns;
  std::vector<std::vector<CCOperator>> equations;

  void check() const;
  std::string equation_to_string(const std::vector<CCOperator>& row) const;
};

// Position-over-term: unknowns compared by rank first, then LEX on the
// derivations in var_rank order.
struct ModuleOrder {
  std::vector<std::size_t> unknown_rank;  // unknown indices, highest first
  std::vector<std::size_t> var_rank;      // registry variables, highest first
};
// u_s > ... > u_1 and Dx > Dy.
ModuleOrder default_order(const CCSystem& s);

struct Elimination {
  CCSystem original;
  ModuleOrder order;
  std::vector<std::vector<CCOperator>> basis;  // reduced, leading coefficients 1
  std::vector<std::size_t> zero_unknowns;      // unknowns forced to vanish

  std::size_t scalar_unknown() const { return order.unknown_rank.back(); }
  // Basis elements involving only the lowest-ranked unknown.
  std::vector<CCOperator> scalar_equations() const;
  CCSystem as_system() const { return {original.unknowns, basis}; }
};

Elimination groebner_eliminate(const CCSystem& s, const ModuleOrder& order);

// Normal form of a row with respect to a Gröbner basis.
std::vector<CCOperator> normal_form(const std::vector<CCOperator>& row,
                                    const std::vector<std::vector<CCOperator>>& basis,
                                    const ModuleOrder& order);
// Both row sets generate the same module.
bool same_module(const std::vector<std::vector<CCOperator>>& a,
                 const std::vector<std::vector<CCOperator>>& b, const ModuleOrder& order);

struct LinearFactors {
  std::vector<CCOperator> factors;  // alpha*Dx + beta*Dy + gamma, leading coefficient 1
  CCOperator remainder;             // product(factors) * remainder = input
};
LinearFactors linear_factors(const CCOperator& p);

// General solution of prod(factors) u = 0 for distinct linear factors in
// Dx, Dy; arbitrary functions are named F, G, H, ...
LinDiffExpr solve_cc_scalar(const std::vector<CCOperator>& factors);

using SolutionVector = std::vector<LinDiffExpr>;  // indexed like unknowns

// Completes a solution of the scalar basis equation to all unknowns, mode
// by mode; may rewrite the scalar component in a new arbitrary-function
// basis. Verified against the original system.
SolutionVector back_substitute(const Elimination& e, const LinDiffExpr& scalar_solution);

bool verify_system(const CCSystem& s, const SolutionVector& sol);

// eliminate -> linear_factors -> solve_cc_scalar -> back_substitute.
SolutionVector solve_system(const CCSystem& s, const ModuleOrder& order);

struct CCSubstitution {
  CCSystem system;  // equations in the new unknowns
  // old unknown i = sum_j inverse[i][j] new unknown j
  std::vector<std::vector<CCOperator>> inverse;
};
// New unknowns v_i = sum_j t[i][j] u_j, rewritten modulo the relations of s.
CCSubstitution apply_substitution(const CCSystem& s,
                                  const std::vector<std::vector<CCOperator>>& t,
                                  const ModuleOrder& order,
                                  std::vector<std::string> new_names = {});

SolutionVector apply_matrix(const std::vector<std::vector<CCOperator>>& t, const SolutionVector& v);

}  // namespace dopfac
