#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rholab/mesh.hpp"

namespace rholab {

/// Compressed sparse rows with sorted column indices.
struct SparseMatrix {
  std::size_t dim = 0;
  std::vector<std::size_t> row_ptr;
  std::vector<std::size_t> col;
  std::vector<double> val;

  void multiply(std::span<const double> x, std::span<double> y) const;
  double at(std::size_t row, std::size_t column) const;
  std::vector<double> diagonal() const;
};

struct SparseSystem {
  GridPtr grid;
  SparseMatrix matrix;
  std::vector<double> rhs;
  /// Pure Neumann/even problems: constants span the kernel; the solver
  /// projects the rhs and returns the mean-zero representative.
  bool mean_zero_gauge = false;
};

enum class Preconditioner { none, jacobi };

struct SolveOptions {
  double rel_tol = 1e-10;
  int max_iter = 0;  // 0 means 50 * dimension
  Preconditioner preconditioner = Preconditioner::jacobi;
};

struct SolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Preconditioned conjugate gradients. Throws NoConvergence if the true
/// residual misses rel_tol * |b| after max_iter iterations.
Field solve(const SparseSystem& sys, const SolveOptions& opts = {}, SolveStats* stats = nullptr);

/// The same iteration on a bare matrix; `gauge` projects out constants.
std::vector<double> solve_vector(const SparseMatrix& S, std::span<const double> b,
                                 const SolveOptions& opts = {}, bool gauge = false,
                                 SolveStats* stats = nullptr);

/// S u as a field on the system's grid.
Field apply(const SparseSystem& sys, const Field& u);

}  // namespace rholab
