#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string_view>
#include <variant>

#include "lrsplit/factor.hpp"
#include "lrsplit/operator.hpp"
#include "lrsplit/tall.hpp"

namespace lrsplit {

inline constexpr std::size_t kDenseInnerThreshold = 512;

/// Solves (alpha I + gamma U U^T) z = r through the k-by-k system
/// alpha I_k + gamma U^T U, factored once (dense Cholesky for
/// k <= dense_threshold, sparse Cholesky with AMD otherwise).
class SmwSolver {
 public:
  SmwSolver(TallMatrix u, double alpha, double gamma,
            std::size_t dense_threshold = kDenseInnerThreshold);

  std::size_t size() const { return rows(u_); }
  std::size_t rank() const { return cols(u_); }
  double alpha() const noexcept { return alpha_; }
  double gamma() const noexcept { return gamma_; }
  bool dense_inner() const noexcept { return std::holds_alternative<DenseCholesky>(inner_); }
  const TallMatrix& u() const noexcept { return u_; }

  Vector apply(std::span<const double> r) const;
  /// (alpha I_k + gamma U^T U)^{-1} t.
  Vector inner_solve(std::span<const double> t) const;

 private:
  TallMatrix u_;
  double alpha_;
  double gamma_;
  std::variant<std::monostate, DenseCholesky, SparseCholesky> inner_;
};

SmwSolver build_smw(const TallMatrix& u, double alpha, double gamma);
Vector smw_apply(const SmwSolver& s, std::span<const double> r);

enum class PrecondKind { Product, ProductInexact, Symmetrized, Unshifted, ShiftOnly, Identity, Custom };
enum class FactorMode { Exact, Inexact };

std::string_view to_string(PrecondKind kind);

/// z = P^{-1} r, a fixed linear map for the lifetime of the object.
class Preconditioner {
 public:
  virtual ~Preconditioner() = default;
  virtual Vector apply(std::span<const double> r) const = 0;
  virtual PrecondKind kind() const noexcept = 0;
  virtual std::size_t size() const noexcept = 0;
  /// Shift parameter, 0 when not applicable.
  virtual double alpha() const noexcept { return 0.0; }
  /// Factor c with c * apply(r) = P^{-1} r for the preconditioner including
  /// its 1/(2 alpha) scalar; apply() itself drops that scalar.
  double scalar_factor() const noexcept;
};

using PreconditionerPtr = std::shared_ptr<const Preconditioner>;

/// P = (A + alpha I)(alpha I + gamma U U^T), or M_alpha (alpha I + gamma U U^T)
/// in Inexact mode; apply(r) = F2^{-1}(F1^{-1} r). Exact mode uses sparse
/// Cholesky (A symmetric) or no-pivot sparse LU; Inexact mode uses IC(0)
/// (A symmetric) or ILU(0).
PreconditionerPtr build_product(const Operator& op, double alpha, FactorMode mode = FactorMode::Exact);

/// P = L (alpha I + gamma U U^T) L^T with L L^T = A + alpha I (exact, AMD
/// ordered) or the IC(0) factor. Requires symmetric A; the map is SPD.
PreconditionerPtr build_symmetrized(const Operator& op, double alpha,
                                    FactorMode mode = FactorMode::Exact);

/// P = A (alpha I + gamma U U^T); apply(r) = F2^{-1}(A^{-1} r).
PreconditionerPtr build_unshifted(const Operator& op, double alpha);

/// P = M_alpha, the no-fill incomplete factor of A + alpha I.
PreconditionerPtr build_shift_only(const Operator& op, double alpha);

PreconditionerPtr identity_preconditioner(std::size_t n);

/// Exact solve with M (sparse Cholesky when symmetric, else no-pivot LU).
PreconditionerPtr build_exact_solve(const CsrMatrix& m);

/// Dispatch on kind; Custom is rejected.
PreconditionerPtr build_preconditioner(const Operator& op, PrecondKind kind, double alpha);

}  // namespace lrsplit
