#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace slep {

// Dense matrices are Eigen double matrices, column-major (Eigen default).
// All modules share this storage convention.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SparseMat = Eigen::SparseMatrix<double>;
using Index = Eigen::Index;

// ---------------------------------------------------------------------------
// Error hierarchy
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shape mismatch or non-square input where a square matrix is required.
struct DimensionError : Error {
  using Error::Error;
};

/// A documented precondition was violated (asymmetry, infeasible base point, ...).
struct ContractError : Error {
  using Error::Error;
};

/// A matrix that must be invertible (or safely powerable) is numerically singular.
struct SingularityError : Error {
  SingularityError(const std::string& what, double lambda_min_)
      : Error(what), lambda_min(lambda_min_) {}
  double lambda_min;
};

/// An optional capability (e.g. an objective Hessian action) is missing.
struct CapabilityError : Error {
  using Error::Error;
};

/// A synthetic-instance generator could not produce a valid instance.
struct GenerationError : Error {
  using Error::Error;
};

/// Malformed CLI/sweep configuration.
struct ConfigError : Error {
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Instrumentation
// ---------------------------------------------------------------------------

namespace instrument {

// Per-thread oracle/factorization counters. Solvers snapshot deltas around
// their loops; tests assert the cost structure (one gradient call and zero
// factorizations per SLG iteration, p x p eigendecompositions in the
// Riemannian baseline).
struct Counters {
  long long objective_value_calls = 0;
  long long objective_gradient_calls = 0;
  long long objective_hessian_calls = 0;
  long long factorizations = 0;  // sym_eig / qr_qfactor (spd_power counts via sym_eig)
  double objective_gradient_seconds = 0.0;

  Counters operator-(const Counters& o) const {
    Counters d;
    d.objective_value_calls = objective_value_calls - o.objective_value_calls;
    d.objective_gradient_calls = objective_gradient_calls - o.objective_gradient_calls;
    d.objective_hessian_calls = objective_hessian_calls - o.objective_hessian_calls;
    d.factorizations = factorizations - o.factorizations;
    d.objective_gradient_seconds = objective_gradient_seconds - o.objective_gradient_seconds;
    return d;
  }
};

inline Counters& counters() {
  thread_local Counters c;
  return c;
}

}  // namespace instrument

// ---------------------------------------------------------------------------
// Small shared helpers
// ---------------------------------------------------------------------------

inline void require_square(const Matrix& w, const char* who) {
  if (w.rows() != w.cols())
    throw DimensionError(std::string(who) + ": expected a square matrix, got " +
                         std::to_string(w.rows()) + "x" + std::to_string(w.cols()));
}

inline void require_same_shape(const Matrix& a, const Matrix& b, const char* who) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError(std::string(who) + ": shape mismatch " + std::to_string(a.rows()) +
                         "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                         "x" + std::to_string(b.cols()));
}

inline bool all_finite(const Matrix& w) { return w.allFinite(); }

inline void require_finite(const Matrix& w, const char* who) {
  if (!w.allFinite()) throw ContractError(std::string(who) + ": non-finite entries");
}

/// Symmetrization operator Psi(W) = (W + W^T)/2. Idempotent and linear.
inline Matrix symmetrize(const Matrix& w) {
  require_square(w, "symmetrize");
  return 0.5 * (w + w.transpose());
}

}  // namespace slep
