#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "lrsplit/dense.hpp"
#include "lrsplit/operator.hpp"
#include "lrsplit/preconditioner.hpp"

namespace lrsplit {

inline constexpr std::size_t kSymmetricEigCap = 2000;
inline constexpr std::size_t kGeneralEigCap = 1000;

struct Spectrum {
  std::vector<std::complex<double>> eigenvalues;

  double min_re() const;
  double max_re() const;
  double max_abs_im() const;
  /// max |lambda - center|
  double max_distance_from(std::complex<double> center) const;
  /// Sorted by (re, im) for stable output.
  Spectrum sorted() const;
};

/// Cyclic Jacobi; stops when the off-diagonal Frobenius norm is at most
/// 1e-12 * ||M||_F. Ascending eigenvalues. Throws InvalidArgument when the
/// asymmetry exceeds 1e-10 * ||M||_F and SizeCapExceeded above `cap`.
Vector eig_symmetric(const DenseMatrix& m, std::size_t cap = kSymmetricEigCap);

/// Householder Hessenberg reduction followed by Francis double-shift QR.
/// Throws ConvergenceError after 100 n iterations.
Spectrum eig_general(const DenseMatrix& m, std::size_t cap = kGeneralEigCap);

/// Unit eigenvector for a real eigenvalue by inverse iteration.
Vector real_eigenvector(const DenseMatrix& m, double lambda);

enum class ScalarConvention { Dropped, Retained };

/// Dense P^{-1} A_gamma, assembled column by column.
DenseMatrix preconditioned_matrix(const Operator& op, const Preconditioner& p,
                                  std::size_t cap = kGeneralEigCap);

/// Spectrum of P^{-1} A_gamma. With Retained, eigenvalues are multiplied by
/// p.scalar_factor(). A symmetrized preconditioner on symmetric A goes
/// through eig_symmetric on R^T A_gamma R where P^{-1} = R R^T.
Spectrum preconditioned_spectrum(const Operator& op, const Preconditioner& p,
                                 ScalarConvention convention = ScalarConvention::Dropped,
                                 std::size_t cap = kGeneralEigCap);

/// T = (aI + gUU^T)^{-1} (aI - A) (aI + A)^{-1} (aI - gUU^T), dense.
DenseMatrix iteration_matrix(const Operator& op, double alpha, std::size_t cap = kGeneralEigCap);
double iteration_matrix_radius(const Operator& op, double alpha, std::size_t cap = kGeneralEigCap);

/// lambda_min(A + A^T) of the effective A.
double lambda_min_symmetric_part(const Operator& op, std::size_t cap = kSymmetricEigCap);

double bound_mu(double alpha, double gamma, double lambda_min_sym);
double bound_re_lower(double alpha, double gamma, double lambda_min_a);
std::pair<double, double> bound_symm_interval(double alpha, double gamma, double lambda_min_a);
/// 2 eta / (eta + alpha)
double eig_kernel_u(double eta, double alpha);
/// 2 / (1 + alpha / (gamma ||U^T x||^2))
double eig_kernel_at(double utx_norm_sq, double alpha, double gamma);

/// 2a (x'Ax + g|U'x|^2) / (a x'Ax + g x'AUU'x + a^2 + a g |U'x|^2) for unit x,
/// evaluated on the effective operator. The imaginary part is zero.
std::complex<double> rayleigh_lambda(const Operator& op, double alpha, std::span<const double> x);

struct RhoBound {
  Vector eigenvalues;
  double alpha_star = 0.0;
  /// max_i |alpha - lambda_i| / (alpha + lambda_i)
  double operator()(double alpha) const;
};

RhoBound rho_upper_and_alpha_star(std::span<const double> eigs_a);

double alpha_heuristic(double gamma);

struct BoundsReport {
  double alpha = 0.0;
  double gamma = 0.0;
  double lambda_min_sym = 0.0;
  /// Quantities that need symmetric A are NaN otherwise.
  double lambda_min_a = 0.0;
  double lambda_max_a = 0.0;
  double mu = 0.0;
  double lower_bound_re = 0.0;
  std::pair<double, double> symm_interval{0.0, 0.0};
  double rho_upper = 0.0;
  double alpha_star = 0.0;
  double alpha_heuristic = 0.0;
  /// From the spectrum of the exact product preconditioner with the scalar
  /// retained; NaN when not computed.
  double min_re = 0.0;
  double max_re = 0.0;
  double max_abs_im = 0.0;
};

BoundsReport compute_bounds_report(const Operator& op, double alpha, bool with_spectrum = true);

}  // namespace lrsplit
