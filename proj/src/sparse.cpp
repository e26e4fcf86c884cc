#include "meshxfer/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "meshxfer/errors.hpp"

namespace mxf {

SparseMatrix SparseMatrix::from_triplets(Index n,
                                         std::vector<Triplet> triplets) {
  for (const Triplet &t : triplets)
    if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n)
      throw ContractError("SparseMatrix: triplet index out of range");

  // Stable sort keeps insertion order within one (row, col) key, so the
  // accumulated sums are reproducible.
  std::stable_sort(triplets.begin(), triplets.end(),
                   [](const Triplet &a, const Triplet &b) {
                     if (a.row != b.row)
                       return a.row < b.row;
                     return a.col < b.col;
                   });

  SparseMatrix m;
  m.n_ = n;
  m.row_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (std::size_t i = 0; i < triplets.size();) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < triplets.size() && triplets[j].row == triplets[i].row &&
           triplets[j].col == triplets[i].col) {
      sum += triplets[j].value;
      ++j;
    }
    m.cols_.push_back(triplets[i].col);
    m.values_.push_back(sum);
    ++m.row_ptr_[triplets[i].row + 1];
    i = j;
  }
  for (Index r = 0; r < n; ++r)
    m.row_ptr_[r + 1] += m.row_ptr_[r];
  return m;
}

void SparseMatrix::multiply(std::span<const double> x,
                            std::span<double> y) const {
  for (Index r = 0; r < n_; ++r) {
    double sum = 0.0;
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      sum += values_[k] * x[cols_[k]];
    y[r] = sum;
  }
}

double SparseMatrix::coeff(Index row, Index col) const {
  for (std::size_t k = row_ptr_[row]; k < row_ptr_[row + 1]; ++k)
    if (cols_[k] == col)
      return values_[k];
  return 0.0;
}

std::vector<double> SparseMatrix::diagonal() const {
  std::vector<double> d(n_, 0.0);
  for (Index r = 0; r < n_; ++r)
    d[r] = coeff(r, r);
  return d;
}

std::vector<double> SparseMatrix::row_sums() const {
  std::vector<double> s(n_, 0.0);
  for (Index r = 0; r < n_; ++r)
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      s[r] += values_[k];
  return s;
}

bool SparseMatrix::is_symmetric(double tol) const {
  for (Index r = 0; r < n_; ++r)
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      if (std::abs(values_[k] - coeff(cols_[k], r)) > tol)
        return false;
  return true;
}

std::span<const Index> SparseMatrix::row_entries_cols(Index row) const {
  return {cols_.data() + row_ptr_[row], row_ptr_[row + 1] - row_ptr_[row]};
}

std::span<const double> SparseMatrix::row_entries_values(Index row) const {
  return {values_.data() + row_ptr_[row], row_ptr_[row + 1] - row_ptr_[row]};
}

namespace {

double dot_product(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i] * b[i];
  return s;
}

} // namespace

CgResult jacobi_cg(const SparseMatrix &A, std::span<const double> b,
                   std::vector<double> &x, double rel_tol,
                   int max_iterations) {
  const std::size_t n = static_cast<std::size_t>(A.rows());
  if (b.size() != n)
    throw ContractError("jacobi_cg: right-hand side size mismatch");
  x.resize(n, 0.0);

  std::vector<double> inv_diag = A.diagonal();
  for (double &d : inv_diag)
    d = d != 0.0 ? 1.0 / d : 1.0;

  std::vector<double> r(n), z(n), p(n), q(n);
  A.multiply(x, r);
  for (std::size_t i = 0; i < n; ++i)
    r[i] = b[i] - r[i];

  const double b_norm = std::sqrt(dot_product(b, b));
  if (b_norm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return {0, 0.0, true};
  }
  const double stop = rel_tol * b_norm;

  double r_norm = std::sqrt(dot_product(r, r));
  if (r_norm <= stop)
    return {0, r_norm / b_norm, true};

  for (std::size_t i = 0; i < n; ++i)
    z[i] = inv_diag[i] * r[i];
  p = z;
  double rho = dot_product(r, z);

  for (int it = 1; it <= max_iterations; ++it) {
    A.multiply(p, q);
    const double pq = dot_product(p, q);
    if (!(pq > 0.0))
      throw SolverError("jacobi_cg: matrix is not positive definite "
                        "(p'Ap = " +
                        std::to_string(pq) + " at iteration " +
                        std::to_string(it) + ")");
    const double alpha = rho / pq;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    r_norm = std::sqrt(dot_product(r, r));
    if (r_norm <= stop)
      return {it, r_norm / b_norm, true};
    for (std::size_t i = 0; i < n; ++i)
      z[i] = inv_diag[i] * r[i];
    const double rho_new = dot_product(r, z);
    const double beta = rho_new / rho;
    rho = rho_new;
    for (std::size_t i = 0; i < n; ++i)
      p[i] = z[i] + beta * p[i];
  }
  throw SolverError("jacobi_cg: no convergence within " +
                    std::to_string(max_iterations) +
                    " iterations (relative residual " +
                    std::to_string(r_norm / b_norm) + ")");
}

CgResult jacobi_cg_scaled(const SparseMatrix &A, std::span<const double> b,
                          std::vector<double> &x, double rel_tol,
                          int max_iterations) {
  double scale = 0.0;
  for (double v : b)
    scale = std::max(scale, std::abs(v));
  if (scale == 0.0) {
    x.assign(static_cast<std::size_t>(A.rows()), 0.0);
    return {0, 0.0, true};
  }
  std::vector<double> scaled(b.size());
  for (std::size_t i = 0; i < b.size(); ++i)
    scaled[i] = b[i] / scale;
  x.assign(static_cast<std::size_t>(A.rows()), 0.0);
  const CgResult res = jacobi_cg(A, scaled, x, rel_tol, max_iterations);
  for (double &v : x)
    v *= scale;
  return res;
}

} // namespace mxf
