#pragma once

#include "slep/common.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace slep {

// ---------------------------------------------------------------------------
// Symmetric eigendecomposition
// ---------------------------------------------------------------------------

/// Eigendecomposition of a symmetric matrix: W = vectors * diag(values) * vectors^T,
/// values ascending, vectors orthogonal.
struct SymEig {
  Vector values;
  Matrix vectors;

  Matrix reconstruct() const {
    return vectors * values.asDiagonal() * vectors.transpose();
  }
};

/// Symmetric eigendecomposition. Rejects input whose asymmetry exceeds
/// 1e-10 * ||W||_F; the decomposition itself runs on the symmetrized matrix.
inline SymEig sym_eig(const Matrix& w) {
  require_square(w, "sym_eig");
  const double scale = w.norm();
  const double asym = (w - w.transpose()).norm();
  if (asym > 1e-10 * std::max(scale, 1e-300))
    throw ContractError("sym_eig: input asymmetry " + std::to_string(asym) +
                        " exceeds 1e-10 * ||W||");
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(w));
  if (es.info() != Eigen::Success) throw Error("sym_eig: eigensolver failed to converge");
  ++instrument::counters().factorizations;
  return SymEig{es.eigenvalues(), es.eigenvectors()};
}

// ---------------------------------------------------------------------------
// Symmetric PSD matrix powers
// ---------------------------------------------------------------------------

/// W^e for symmetric PSD W and e in {-1, -1/2, 1/2}, via eigendecomposition.
/// Negative exponents require all eigenvalues above 1e-12 * lambda_max.
inline Matrix spd_power(const Matrix& w, double exponent) {
  SymEig eig = sym_eig(w);
  const Index p = eig.values.size();
  const double lmax = eig.values(p - 1);
  const double lmin = eig.values(0);
  if (exponent < 0.0) {
    const double tol = 1e-12 * std::max(lmax, 0.0);
    if (lmin <= tol)
      throw SingularityError("spd_power: eigenvalue " + std::to_string(lmin) +
                                 " below tolerance for exponent " + std::to_string(exponent),
                             lmin);
  }
  Vector powered(p);
  for (Index i = 0; i < p; ++i) {
    double lam = eig.values(i);
    if (lam < 0.0 && exponent > 0.0) lam = 0.0;  // clamp roundoff negatives for sqrt
    powered(i) = std::pow(lam, exponent);
  }
  return eig.vectors * powered.asDiagonal() * eig.vectors.transpose();
}

// ---------------------------------------------------------------------------
// Thin QR
// ---------------------------------------------------------------------------

/// Q factor of the thin QR of an n x p matrix (n >= p), with the sign
/// convention R_ii > 0 so the factor is a deterministic function of the input.
/// Throws on numerical column-rank deficiency.
inline Matrix qr_qfactor(const Matrix& w) {
  const Index n = w.rows(), p = w.cols();
  if (n < p) throw DimensionError("qr_qfactor: need rows >= cols");
  Eigen::HouseholderQR<Matrix> qr(w);
  ++instrument::counters().factorizations;
  Matrix q = qr.householderQ() * Matrix::Identity(n, p);
  Matrix r = qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
  double diag_max = 0.0;
  for (Index i = 0; i < p; ++i) diag_max = std::max(diag_max, std::abs(r(i, i)));
  const double tol =
      std::numeric_limits<double>::epsilon() * static_cast<double>(std::max(n, p)) * diag_max;
  for (Index i = 0; i < p; ++i) {
    if (std::abs(r(i, i)) <= tol)
      throw SingularityError("qr_qfactor: rank-deficient input (|R_" + std::to_string(i) +
                                 "," + std::to_string(i) + "| below tolerance)",
                             std::abs(r(i, i)));
    if (r(i, i) < 0.0) q.col(i) = -q.col(i);
  }
  return q;
}

}  // namespace slep
