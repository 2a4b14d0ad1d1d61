#pragma once

#include "slep/common.hpp"
#include "slep/linalg.hpp"
#include "slep/rng.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace slep {

// ---------------------------------------------------------------------------
// Sparse symmetric matrices
// ---------------------------------------------------------------------------

/// Sparse real symmetric matrix. Stores both triangles internally so products
/// are plain sparse*dense; construction symmetrizes and validates finiteness.
class SparseSymmetric {
 public:
  SparseSymmetric() = default;

  /// From triplets over one triangle (or both; duplicates are summed, then the
  /// matrix is symmetrized).
  SparseSymmetric(Index order, const std::vector<Eigen::Triplet<double>>& upper_triplets)
      : mat_(order, order) {
    for (const auto& t : upper_triplets)
      if (!std::isfinite(t.value()))
        throw ContractError("SparseSymmetric: non-finite entry");
    SparseMat a(order, order);
    a.setFromTriplets(upper_triplets.begin(), upper_triplets.end());
    SparseMat at = SparseMat(a.transpose());
    // Mirror off-diagonal entries; keep the diagonal once.
    SparseMat diag(order, order);
    std::vector<Eigen::Triplet<double>> d;
    for (int k = 0; k < a.outerSize(); ++k)
      for (SparseMat::InnerIterator it(a, k); it; ++it)
        if (it.row() == it.col()) d.emplace_back(it.row(), it.col(), it.value());
    diag.setFromTriplets(d.begin(), d.end());
    mat_ = a + at - diag;
    mat_.makeCompressed();
  }

  /// From a dense symmetric matrix, dropping entries with |w| <= drop_tol.
  static SparseSymmetric from_dense(const Matrix& w, double drop_tol = 0.0) {
    require_square(w, "SparseSymmetric::from_dense");
    require_finite(w, "SparseSymmetric::from_dense");
    const double asym = (w - w.transpose()).norm();
    if (asym > 1e-10 * std::max(w.norm(), 1e-300))
      throw ContractError("SparseSymmetric::from_dense: input not symmetric");
    std::vector<Eigen::Triplet<double>> trips;
    for (Index j = 0; j < w.cols(); ++j)
      for (Index i = 0; i <= j; ++i)
        if (std::abs(w(i, j)) > drop_tol) trips.emplace_back(i, j, w(i, j));
    return SparseSymmetric(w.rows(), trips);
  }

  Index order() const { return mat_.rows(); }
  Index nonzeros() const { return mat_.nonZeros(); }
  const SparseMat& matrix() const { return mat_; }
  Matrix dense() const { return Matrix(mat_); }

  Matrix operator*(const Matrix& x) const { return mat_ * x; }

  double norm() const { return mat_.norm(); }

 private:
  SparseMat mat_;
};

// ---------------------------------------------------------------------------
// Random sparse symmetric matrix with prescribed spectrum
// ---------------------------------------------------------------------------

/// Builds an n x n sparse symmetric matrix whose spectrum equals `eigs` (up to
/// reordering/roundoff) and whose nonzero fraction approaches `density`:
/// random Givens similarity rotations are applied to diag(eigs) until the
/// nonzero fraction reaches the target or a cap of 10*n^2 rotations is hit.
inline SparseSymmetric sprandsym_like(Index n, double density, const Vector& eigs,
                                      SeededRng& rng) {
  if (n <= 0) throw DimensionError("sprandsym_like: order must be positive");
  if (!(density > 0.0 && density <= 1.0))
    throw ContractError("sprandsym_like: density must lie in (0, 1]");
  if (eigs.size() != n) throw DimensionError("sprandsym_like: need n eigenvalues");

  Matrix w = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    if (!std::isfinite(eigs(i))) throw ContractError("sprandsym_like: non-finite eigenvalue");
    w(i, i) = eigs(i);
  }
  const double scale = eigs.cwiseAbs().maxCoeff();
  const double zero_tol = 1e-14 * std::max(scale, 1e-300);

  auto is_nz = [&](double v) { return std::abs(v) > zero_tol; };

  std::vector<long long> row_nnz(static_cast<std::size_t>(n), 0);
  long long total_nnz = 0;
  for (Index i = 0; i < n; ++i)
    if (is_nz(w(i, i))) {
      row_nnz[static_cast<std::size_t>(i)] = 1;
      total_nnz += 1;
    }

  const double target = density * static_cast<double>(n) * static_cast<double>(n);
  const long long cap = 10LL * static_cast<long long>(n) * static_cast<long long>(n);

  std::vector<double> old_ri(static_cast<std::size_t>(n)), old_rj(static_cast<std::size_t>(n));
  for (long long rot = 0; rot < cap && static_cast<double>(total_nnz) < target; ++rot) {
    if (n < 2) break;
    Index i = static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(n)));
    Index j = static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(n - 1)));
    if (j >= i) ++j;
    if (i > j) std::swap(i, j);

    // Exact no-op: both rows diagonal-only with equal diagonals (any rotation
    // fixes that 2x2 identity block, e.g. diag(eigs) with repeated values).
    if (row_nnz[static_cast<std::size_t>(i)] <= 1 && row_nnz[static_cast<std::size_t>(j)] <= 1 &&
        w(i, j) == 0.0 && w(i, i) == w(j, j))
      continue;

    const double theta = rng.uniform(0.0, 2.0 * M_PI);
    const double c = std::cos(theta), s = std::sin(theta);

    for (Index k = 0; k < n; ++k) {
      old_ri[static_cast<std::size_t>(k)] = w(i, k);
      old_rj[static_cast<std::size_t>(k)] = w(j, k);
    }
    // Similarity W <- G^T W G in the (i,j) plane: rows first, then columns.
    for (Index k = 0; k < n; ++k) {
      const double a = w(i, k), b = w(j, k);
      w(i, k) = c * a - s * b;
      w(j, k) = s * a + c * b;
    }
    for (Index k = 0; k < n; ++k) {
      const double a = w(k, i), b = w(k, j);
      w(k, i) = c * a - s * b;
      w(k, j) = s * a + c * b;
    }
    const double off = 0.5 * (w(i, j) + w(j, i));
    w(i, j) = off;
    w(j, i) = off;

    // Incremental nnz update: rows i and j changed everywhere, every other row
    // k changed only at columns i and j (mirrored from the row scans).
    long long ri_new = 0, rj_new = 0;
    for (Index k = 0; k < n; ++k) {
      const bool ni = is_nz(w(i, k)), nj = is_nz(w(j, k));
      ri_new += ni;
      rj_new += nj;
      if (k != i && k != j) {
        const int di = static_cast<int>(ni) - static_cast<int>(is_nz(old_ri[static_cast<std::size_t>(k)]));
        const int dj = static_cast<int>(nj) - static_cast<int>(is_nz(old_rj[static_cast<std::size_t>(k)]));
        row_nnz[static_cast<std::size_t>(k)] += di + dj;
        total_nnz += di + dj;
      }
    }
    total_nnz += ri_new - row_nnz[static_cast<std::size_t>(i)];
    total_nnz += rj_new - row_nnz[static_cast<std::size_t>(j)];
    row_nnz[static_cast<std::size_t>(i)] = ri_new;
    row_nnz[static_cast<std::size_t>(j)] = rj_new;
  }

  w = 0.5 * (w + w.transpose());
  return SparseSymmetric::from_dense(w, zero_tol);
}

}  // namespace slep
