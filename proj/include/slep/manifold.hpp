#pragma once

#include "slep/common.hpp"
#include "slep/linalg.hpp"
#include "slep/sparse_sym.hpp"

#include <cmath>
#include <memory>
#include <mutex>
#include <optional>

namespace slep {

/// Absolute Frobenius feasibility tolerance used by operations that require a
/// feasible base point.
inline constexpr double kFeasTol = 1e-8;

/// Numerical rank of an ascending eigenvalue vector: count above 1e-10 * lambda_max.
/// Shared by ManifoldContext and the generators that declare ranks up front.
inline Index spectral_rank(const Vector& eigs_ascending) {
  const Index n = eigs_ascending.size();
  const double tol = 1e-10 * std::max(eigs_ascending(n - 1), 0.0);
  Index r = 0;
  for (Index i = 0; i < n; ++i)
    if (eigs_ascending(i) > tol) ++r;
  return r;
}

// ---------------------------------------------------------------------------
// Spectral data of M / Mbar
// ---------------------------------------------------------------------------

/// Eigendata of M split at the positive part. With M = V_r diag(sigma) V_r^T,
/// Mbar acts as M on range(M) and as the identity on Null(M); it is stored
/// implicitly through V_r and sigma, never as a dense n x n matrix.
struct SpectralData {
  Matrix v_range;  // n x r, orthonormal columns spanning range(M)
  Vector sigma;    // r positive eigenvalues of M, ascending
  Index rank = 0;
  double lambda_min_mbar = 0.0;
  double lambda_max_mbar = 0.0;
  double kappa_mbar = 0.0;
};

// ---------------------------------------------------------------------------
// ManifoldContext
// ---------------------------------------------------------------------------

/// The generalized Stiefel manifold S_M(n,p) = {X : X^T M X = I_p} for PSD M,
/// possibly rank-deficient. Immutable after construction; the spectral data of
/// M is computed lazily (dense eigendecomposition, guarded to n <= 2000 unless
/// explicitly overridden) and cached once.
class ManifoldContext {
 public:
  /// `known_rank`: callers that generated M with a prescribed spectrum pass the
  /// exact rank so construction stays O(nnz); it is cross-checked if and when
  /// the spectral data materializes. Without it the spectral data is computed
  /// eagerly to establish the rank.
  ManifoldContext(SparseSymmetric m, Index p, std::optional<Index> known_rank = std::nullopt,
                  bool allow_large_dense = false)
      : m_(std::move(m)),
        n_(m_.order()),
        p_(p),
        allow_large_dense_(allow_large_dense),
        cache_(std::make_shared<Cache>()) {
    if (p_ <= 0 || p_ > n_) throw DimensionError("ManifoldContext: need 0 < p <= n");
    if (known_rank) {
      rank_ = *known_rank;
      if (rank_ < 0 || rank_ > n_) throw DimensionError("ManifoldContext: rank out of range");
    } else {
      rank_ = spectral().rank;
    }
    if (rank_ < p_)
      throw ContractError("ManifoldContext: rank(M) = " + std::to_string(rank_) + " < p = " +
                          std::to_string(p_) + ", the manifold is empty");
  }

  Index n() const { return n_; }
  Index p() const { return p_; }
  Index rank() const { return rank_; }
  const SparseSymmetric& m() const { return m_; }
  bool full_rank() const { return rank_ == n_; }

  Matrix apply_m(const Matrix& x) const { return m_ * x; }

  const SpectralData& spectral() const {
    std::call_once(cache_->once, [this] { cache_->data = compute_spectral(); });
    return cache_->data;
  }

  double lambda_min_mbar() const { return spectral().lambda_min_mbar; }
  double lambda_max_mbar() const { return spectral().lambda_max_mbar; }
  double kappa_mbar() const { return spectral().kappa_mbar; }

  /// Mbar X = X + V_r (diag(sigma) - I) V_r^T X.
  Matrix apply_mbar(const Matrix& x) const {
    const SpectralData& s = spectral();
    if (s.rank == 0) return x;  // M = 0 cannot occur with p >= 1, kept for safety
    Matrix coef = s.v_range.transpose() * x;
    return x + s.v_range * ((s.sigma.array() - 1.0).matrix().asDiagonal() * coef);
  }

  /// Mbar^{-1} X = X + V_r (diag(1/sigma) - I) V_r^T X.
  Matrix apply_mbar_inverse(const Matrix& x) const {
    const SpectralData& s = spectral();
    if (s.rank == 0) return x;
    Matrix coef = s.v_range.transpose() * x;
    return x + s.v_range * ((s.sigma.array().inverse() - 1.0).matrix().asDiagonal() * coef);
  }

 private:
  struct Cache {
    std::once_flag once;
    SpectralData data;
  };

  SpectralData compute_spectral() const {
    if (n_ > 2000 && !allow_large_dense_)
      throw ContractError(
          "ManifoldContext: dense spectral data of M requested for n = " + std::to_string(n_) +
          " > 2000; construct with allow_large_dense to override");
    SymEig eig = sym_eig(m_.dense());
    const Index r = spectral_rank(eig.values);
    SpectralData s;
    s.rank = r;
    s.v_range = eig.vectors.rightCols(r);
    s.sigma = eig.values.tail(r);
    if (r == 0) {
      s.lambda_min_mbar = s.lambda_max_mbar = s.kappa_mbar = 1.0;
    } else if (r == n_) {
      s.lambda_min_mbar = s.sigma(0);
      s.lambda_max_mbar = s.sigma(r - 1);
    } else {
      s.lambda_min_mbar = std::min(s.sigma(0), 1.0);
      s.lambda_max_mbar = std::max(s.sigma(r - 1), 1.0);
    }
    if (r > 0) s.kappa_mbar = s.lambda_max_mbar / s.lambda_min_mbar;
    // A rank declared at construction must agree with the computed spectrum.
    if (rank_ >= 0 && rank_ != r)
      throw ContractError("ManifoldContext: declared rank " + std::to_string(rank_) +
                          " but spectral rank is " + std::to_string(r));
    return s;
  }

  SparseSymmetric m_;
  Index n_;
  Index p_;
  Index rank_ = -1;
  bool allow_large_dense_;
  std::shared_ptr<Cache> cache_;
};

// ---------------------------------------------------------------------------
// Tangent vectors
// ---------------------------------------------------------------------------

/// A direction T at base point X with Psi(T^T M X) = 0 (checked on
/// construction, relative to 1 + ||T|| ||MX||).
struct TangentVector {
  Matrix base;
  Matrix dir;

  static TangentVector checked(const ManifoldContext& ctx, Matrix x, Matrix t) {
    Matrix mx = ctx.apply_m(x);
    return checked_with_mx(x, t, mx);
  }

  static TangentVector checked_with_mx(Matrix x, Matrix t, const Matrix& mx) {
    const double viol = symmetrize(t.transpose() * mx).norm();
    if (viol > 1e-8 * (1.0 + t.norm() * mx.norm()))
      throw ContractError("TangentVector: Psi(T^T M X) violation " + std::to_string(viol));
    return TangentVector{std::move(x), std::move(t)};
  }
};

// ---------------------------------------------------------------------------
// Feasibility and the A / R maps
// ---------------------------------------------------------------------------

/// X^T M X - I_p, exactly symmetric.
inline Matrix residual(const ManifoldContext& ctx, const Matrix& x) {
  if (x.rows() != ctx.n() || x.cols() != ctx.p())
    throw DimensionError("residual: X must be n x p");
  return symmetrize(x.transpose() * (ctx.m() * x)) - Matrix::Identity(ctx.p(), ctx.p());
}

inline double feasibility_norm(const ManifoldContext& ctx, const Matrix& x) {
  return residual(ctx, x).norm();
}

inline void require_feasible(const ManifoldContext& ctx, const Matrix& x, const char* who) {
  const double r = feasibility_norm(ctx, x);
  if (r > kFeasTol)
    throw ContractError(std::string(who) + ": base point infeasible, ||X^T M X - I||_F = " +
                        std::to_string(r));
}

/// First-order orthonormalization A(X) = X (3/2 I - 1/2 X^T M X).
/// Matrix products only; no factorization.
inline Matrix a_map(const ManifoldContext& ctx, const Matrix& x) {
  Matrix r = residual(ctx, x);
  return x - 0.5 * (x * r);
}

/// Polar projection R(X) = X (X^T M X)^{-1/2} onto the manifold.
inline Matrix r_map(const ManifoldContext& ctx, const Matrix& x) {
  Matrix gram = residual(ctx, x) + Matrix::Identity(ctx.p(), ctx.p());
  try {
    return x * spd_power(gram, -0.5);
  } catch (const SingularityError& e) {
    throw SingularityError("r_map: X^T M X numerically singular (lambda_min = " +
                               std::to_string(e.lambda_min) + ")",
                           e.lambda_min);
  }
}

// ---------------------------------------------------------------------------
// Range / null projections (require spectral data)
// ---------------------------------------------------------------------------

/// P1: orthogonal projection onto (Null(M))^perp = range(M), columnwise.
inline Matrix project_range(const ManifoldContext& ctx, const Matrix& x) {
  const SpectralData& s = ctx.spectral();
  return s.v_range * (s.v_range.transpose() * x);
}

/// P2 = id - P1: orthogonal projection onto Null(M).
inline Matrix project_null(const ManifoldContext& ctx, const Matrix& x) {
  return x - project_range(ctx, x);
}

// ---------------------------------------------------------------------------
// Riemannian gradient / Hessian under the Mbar metric
// ---------------------------------------------------------------------------

/// grad f(X) = Mbar^{-1} grad f(X) - P1(X) Psi(P1(X)^T grad f(X)) at feasible X.
inline TangentVector riemannian_grad_mbar(const ManifoldContext& ctx, const Matrix& x,
                                          const Matrix& euclid_grad) {
  require_feasible(ctx, x, "riemannian_grad_mbar");
  require_same_shape(x, euclid_grad, "riemannian_grad_mbar");
  Matrix p1x = project_range(ctx, x);
  Matrix t = ctx.apply_mbar_inverse(euclid_grad) -
             p1x * symmetrize(p1x.transpose() * euclid_grad);
  return TangentVector::checked(ctx, x, std::move(t));
}

/// hess f(X)[T] = Mbar^{-1} (D^2 f(X)[T] - M T Psi(P1(X)^T grad f(X))).
inline Matrix riemannian_hess_mbar(const ManifoldContext& ctx, const Matrix& x,
                                   const TangentVector& t, const Matrix& euclid_grad,
                                   const Matrix& euclid_hess_action) {
  require_feasible(ctx, x, "riemannian_hess_mbar");
  Matrix p1x = project_range(ctx, x);
  Matrix s = symmetrize(p1x.transpose() * euclid_grad);
  return ctx.apply_mbar_inverse(euclid_hess_action - ctx.apply_m(t.dir) * s);
}

// ---------------------------------------------------------------------------
// Euclidean-metric tangent projection, retraction, transport (baseline tools)
// ---------------------------------------------------------------------------

/// Orthogonal (Euclidean) projection of D onto the tangent space at feasible X:
/// D - M X S, with symmetric S solving (X^T M^2 X) S + S (X^T M^2 X) =
/// 2 Psi(X^T M D), solved through one p x p eigendecomposition.
inline TangentVector tangent_project_euclidean(const ManifoldContext& ctx, const Matrix& x,
                                               const Matrix& d) {
  require_feasible(ctx, x, "tangent_project_euclidean");
  require_same_shape(x, d, "tangent_project_euclidean");
  Matrix mx = ctx.apply_m(x);
  Matrix w = mx.transpose() * mx;  // X^T M^2 X, symmetric PSD
  SymEig eig = sym_eig(symmetrize(w));
  const Index p = ctx.p();
  const double lmax = eig.values(p - 1);
  if (2.0 * eig.values(0) <= 1e-12 * std::max(lmax, 0.0))
    throw SingularityError(
        "tangent_project_euclidean: X^T M^2 X numerically singular (X aligned with Null(M))",
        eig.values(0));
  Matrix rhs = 2.0 * symmetrize(mx.transpose() * d);
  Matrix rt = eig.vectors.transpose() * rhs * eig.vectors;
  Matrix st(p, p);
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < p; ++j) st(i, j) = rt(i, j) / (eig.values(i) + eig.values(j));
  Matrix s = eig.vectors * st * eig.vectors.transpose();
  Matrix t = d - mx * symmetrize(s);
  return TangentVector::checked_with_mx(x, std::move(t), mx);
}

/// Polar-based retraction R_X(T) = (X + T)(I_p + T^T M T)^{-1/2}; exact
/// feasibility for tangent T since (X+T)^T M (X+T) = I + T^T M T.
inline Matrix polar_retraction(const ManifoldContext& ctx, const TangentVector& t) {
  Matrix mt = ctx.apply_m(t.dir);
  Matrix gram =
      Matrix::Identity(ctx.p(), ctx.p()) + symmetrize(t.dir.transpose() * mt);
  return (t.base + t.dir) * spd_power(gram, -0.5);
}

/// Transport by (Euclidean) projection onto the tangent space at the new point.
inline TangentVector vector_transport(const ManifoldContext& ctx, const Matrix& x_new,
                                      const Matrix& t) {
  return tangent_project_euclidean(ctx, x_new, t);
}

}  // namespace slep
