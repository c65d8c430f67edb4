#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace dopfac {

template <class F>
using Matrix = std::vector<std::vector<F>>;

// Reduced row echelon form in place; returns pivot columns.
template <class F>
std::vector<std::size_t> row_reduce(Matrix<F>& a, std::size_t ncols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < ncols && row < a.size(); ++col) {
    std::size_t p = row;
    while (p < a.size() && a[p][col] == F(0L)) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[row]);
    F inv = F(1L) / a[row][col];
    for (auto& x : a[row]) x = x * inv;
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == row || a[r][col] == F(0L)) continue;
      F f = a[r][col];
      for (std::size_t c = col; c < ncols; ++c) a[r][c] = a[r][c] - f * a[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

// Basis of {v : A v = 0}.
template <class F>
Matrix<F> nullspace(Matrix<F> a, std::size_t ncols) {
  auto pivots = row_reduce(a, ncols);
  std::vector<bool> is_pivot(ncols, false);
  for (auto p : pivots) is_pivot[p] = true;
  Matrix<F> basis;
  for (std::size_t free = 0; free < ncols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<F> v(ncols, F(0L));
    v[free] = F(1L);
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

// Unique solution of A v = b for square or overdetermined A, if any.
template <class F>
std::optional<std::vector<F>> solve_unique(const Matrix<F>& a, const std::vector<F>& b,
                                           std::size_t ncols) {
  Matrix<F> aug = a;
  for (std::size_t r = 0; r < aug.size(); ++r) aug[r].push_back(b[r]);
  auto pivots = row_reduce(aug, ncols + 1);
  // singular, or inconsistent when the last column is a pivot
  if (pivots.size() != ncols || (ncols > 0 && pivots.back() != ncols - 1)) return std::nullopt;
  std::vector<F> v(ncols, F(0L));
  for (std::size_t r = 0; r < ncols; ++r) v[pivots[r]] = aug[r][ncols];
  return v;
}

}  // namespace dopfac
