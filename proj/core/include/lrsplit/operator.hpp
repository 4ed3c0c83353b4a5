#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>

#include "lrsplit/dense.hpp"
#include "lrsplit/norm.hpp"
#include "lrsplit/sparse.hpp"
#include "lrsplit/tall.hpp"

namespace lrsplit {

/// A_gamma = A + gamma * U U^T, applied matrix-free.
///
/// With a scaling vector d (d_i > 0, the square roots of the diagonal of
/// A_gamma) the operator represents D^{-1/2} A_gamma D^{-1/2}. The scaled
/// matrices are formed once at construction and exposed as effective_a()
/// and effective_u(); everything downstream works on those.
class LowRankUpdatedOperator {
 public:
  /// Throws InvalidArgument unless gamma > 0, k < n, and scaling (when
  /// given) is strictly positive; DimensionError on shape mismatch.
  LowRankUpdatedOperator(CsrMatrix a, TallMatrix u, double gamma,
                         std::optional<Vector> scaling = std::nullopt);

  std::size_t size() const noexcept { return a_.rows(); }
  std::size_t rank() const { return cols(u_); }
  double gamma() const noexcept { return gamma_; }

  const CsrMatrix& a() const noexcept { return a_; }
  const TallMatrix& u() const noexcept { return u_; }
  const std::optional<Vector>& scaling() const noexcept { return scaling_; }
  bool is_scaled() const noexcept { return scaling_.has_value(); }

  const CsrMatrix& effective_a() const noexcept { return eff_a_; }
  const TallMatrix& effective_u() const noexcept { return eff_u_; }
  /// effective_a() symmetric to 1e-12 relative in the Frobenius norm.
  bool a_symmetric() const noexcept { return a_symmetric_; }

  Vector apply(std::span<const double> x) const;

 private:
  CsrMatrix a_;
  TallMatrix u_;
  double gamma_;
  std::optional<Vector> scaling_;
  CsrMatrix eff_a_;
  TallMatrix eff_u_;
  bool a_symmetric_ = false;
};

using Operator = LowRankUpdatedOperator;

struct NormalizationRecord {
  double norm_a = 0.0;
  double norm_u = 0.0;
  double gamma_tilde = 0.0;
};

inline constexpr std::size_t kDenseCap = 2000;

/// t = U^T x, then A x + gamma * (U t).
Vector apply(const Operator& op, std::span<const double> x);

/// Diagonal of the (effective) operator: a_ii + gamma * ||u_i||^2.
Vector diag_gamma(const Operator& op);

/// D^{-1/2} A_gamma D^{-1/2} with D = diag_gamma(op). Composes with an
/// existing scaling. Throws InvalidArgument naming the first nonpositive
/// diagonal entry.
Operator with_diagonal_scaling(const Operator& op);

/// A / ||A||_2, U / ||U||_2 and gamma * ||U||_2^2 / ||A||_2, with the norms
/// estimated by power iteration to `tol`. Works on the effective matrices
/// and returns an unscaled operator.
std::pair<Operator, NormalizationRecord> normalize(const Operator& op, double tol = kNormTol);

/// Dense effective operator; throws SizeCapExceeded when n > cap.
DenseMatrix assemble_dense(const Operator& op, std::size_t cap = kDenseCap);

/// Randomized check x^T A_gamma x > 0 on `trials` Gaussian vectors.
bool probe_positive_definite(const Operator& op, std::size_t trials = 50, std::uint64_t seed = 1);

/// A + gamma B^T W^{-1} B with U = B^T W^{-1/2} (sparse). B is k-by-n.
Operator from_augmented_lagrangian(const CsrMatrix& a, const CsrMatrix& b,
                                   std::span<const double> w_diag, double gamma);

/// H + C^T Z^{-1} Lambda C with U = C^T diag(sqrt(lambda_i / z_i)), gamma = 1.
Operator from_kkt_schur(const CsrMatrix& h, const CsrMatrix& c, std::span<const double> z,
                        std::span<const double> lambda);

struct NormalEquations {
  Operator op;
  /// c (length m) -> B1^T c1 + B2^T c2.
  std::function<Vector(std::span<const double>)> rhs;
};

/// B^T B for B = [B1; B2]: A = B1^T B1 (sparse), U = B2^T (dense), gamma = 1.
NormalEquations from_normal_equations(const CsrMatrix& b1, const DenseMatrix& b2);

}  // namespace lrsplit
