#pragma once

#include <span>
#include <vector>

#include "meshxfer/geometry.hpp"

namespace mxf {

/// Row-compressed sparse matrix. Assembled symmetrically by construction
/// everywhere it is used (RBF systems, P1 stiffness).
class SparseMatrix {
public:
  SparseMatrix() = default;

  struct Triplet {
    Index row;
    Index col;
    double value;
  };

  /// Duplicate (row, col) triplets are summed in insertion order, so a
  /// symmetric triplet stream yields an exactly symmetric matrix.
  static SparseMatrix from_triplets(Index n, std::vector<Triplet> triplets);

  Index rows() const { return n_; }
  std::size_t nonzeros() const { return values_.size(); }

  void multiply(std::span<const double> x, std::span<double> y) const;

  double coeff(Index row, Index col) const; // 0 when absent
  std::vector<double> diagonal() const;
  std::vector<double> row_sums() const;
  bool is_symmetric(double tol) const;

  std::span<const Index> row_entries_cols(Index row) const;
  std::span<const double> row_entries_values(Index row) const;

  /// In-place symmetric Dirichlet elimination support: zero an entry.
  void zero_entry_at(std::size_t k) { values_[k] = 0.0; }
  void set_entry_at(std::size_t k, double v) { values_[k] = v; }
  std::size_t row_begin(Index row) const { return row_ptr_[row]; }
  std::size_t row_end(Index row) const { return row_ptr_[row + 1]; }
  Index col_at(std::size_t k) const { return cols_[k]; }
  double value_at(std::size_t k) const { return values_[k]; }

private:
  Index n_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<Index> cols_;
  std::vector<double> values_;
};

struct CgResult {
  int iterations = 0;
  double residual = 0.0; ///< final relative residual
  bool converged = false;
};

/// Jacobi-preconditioned conjugate gradient: solves A x = b for symmetric
/// positive definite A to ||r|| <= rel_tol * ||b||. x is the initial guess
/// on entry. Throws SolverError when the iteration budget is exhausted.
CgResult jacobi_cg(const SparseMatrix &A, std::span<const double> b,
                   std::vector<double> &x, double rel_tol, int max_iterations);

/// Same solve with the right-hand side normalized by its max norm, making
/// the iteration exactly equivariant under sign flips and invariant to the
/// scale of b. A zero right-hand side yields x = 0.
CgResult jacobi_cg_scaled(const SparseMatrix &A, std::span<const double> b,
                          std::vector<double> &x, double rel_tol,
                          int max_iterations);

} // namespace mxf
