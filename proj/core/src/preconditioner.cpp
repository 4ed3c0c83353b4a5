#include <cmath>
#include <optional>

#include "lrsplit/errors.hpp"
#include "lrsplit/ordering.hpp"
#include "lrsplit/preconditioner.hpp"

namespace lrsplit {

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("preconditioner: alpha must be positive");
}

// Exact or incomplete solver for a square sparse matrix.
class MatrixSolver {
 public:
  static MatrixSolver exact(const CsrMatrix& m, bool symmetric) {
    MatrixSolver s;
    if (symmetric) {
      s.impl_.emplace<SparseCholesky>(m, amd_ordering(m));
    } else {
      s.impl_.emplace<SparseLu>(m, amd_ordering(m));
    }
    return s;
  }

  static MatrixSolver incomplete(const CsrMatrix& m, bool symmetric) {
    MatrixSolver s;
    s.impl_.emplace<IncompleteFactor>(symmetric ? ic0(m) : ilu0(m));
    return s;
  }

  Vector solve(std::span<const double> b) const {
    return std::visit([&](const auto& f) -> Vector {
      if constexpr (std::is_same_v<std::decay_t<decltype(f)>, std::monostate>) {
        return Vector(b.begin(), b.end());
      } else {
        return f.solve(b);
      }
    }, impl_);
  }

 private:
  std::variant<std::monostate, SparseCholesky, SparseLu, IncompleteFactor> impl_;
};

class ProductPreconditioner final : public Preconditioner {
 public:
  ProductPreconditioner(PrecondKind kind, double alpha, MatrixSolver f1, SmwSolver f2)
      : kind_(kind), alpha_(alpha), f1_(std::move(f1)), f2_(std::move(f2)) {}

  Vector apply(std::span<const double> r) const override {
    if (r.size() != size()) throw DimensionError("preconditioner apply: dimension mismatch");
    return f2_.apply(f1_.solve(r));
  }
  PrecondKind kind() const noexcept override { return kind_; }
  std::size_t size() const noexcept override { return f2_.size(); }
  double alpha() const noexcept override { return alpha_; }

 private:
  PrecondKind kind_;
  double alpha_;
  MatrixSolver f1_;
  SmwSolver f2_;
};

// L^{-T} SMW L^{-1} with L lower triangular in the ordering `perm`.
class SymmetrizedPreconditioner final : public Preconditioner {
 public:
  SymmetrizedPreconditioner(double alpha, Permutation perm, CsrMatrix l, SmwSolver f2)
      : alpha_(alpha), perm_(std::move(perm)), l_(std::move(l)), f2_(std::move(f2)) {}

  Vector apply(std::span<const double> r) const override {
    const std::size_t n = size();
    if (r.size() != n) throw DimensionError("preconditioner apply: dimension mismatch");
    Vector pr(n);
    for (std::size_t i = 0; i < n; ++i) pr[i] = r[perm_[i]];
    const Vector y = solve_lower(l_, pr);
    Vector sy(n);
    for (std::size_t i = 0; i < n; ++i) sy[perm_[i]] = y[i];
    const Vector w = f2_.apply(sy);
    for (std::size_t i = 0; i < n; ++i) pr[i] = w[perm_[i]];
    const Vector z = solve_lower_transposed(l_, pr);
    Vector out(n);
    for (std::size_t i = 0; i < n; ++i) out[perm_[i]] = z[i];
    return out;
  }
  PrecondKind kind() const noexcept override { return PrecondKind::Symmetrized; }
  std::size_t size() const noexcept override { return f2_.size(); }
  double alpha() const noexcept override { return alpha_; }

 private:
  double alpha_;
  Permutation perm_;
  CsrMatrix l_;
  SmwSolver f2_;
};

class SolvePreconditioner final : public Preconditioner {
 public:
  SolvePreconditioner(PrecondKind kind, double alpha, std::size_t n, MatrixSolver f)
      : kind_(kind), alpha_(alpha), n_(n), f_(std::move(f)) {}

  Vector apply(std::span<const double> r) const override {
    if (r.size() != n_) throw DimensionError("preconditioner apply: dimension mismatch");
    return f_.solve(r);
  }
  PrecondKind kind() const noexcept override { return kind_; }
  std::size_t size() const noexcept override { return n_; }
  double alpha() const noexcept override { return alpha_; }

 private:
  PrecondKind kind_;
  double alpha_;
  std::size_t n_;
  MatrixSolver f_;
};

}  // namespace

std::string_view to_string(PrecondKind kind) {
  switch (kind) {
    case PrecondKind::Product: return "product";
    case PrecondKind::ProductInexact: return "product-inexact";
    case PrecondKind::Symmetrized: return "symmetrized";
    case PrecondKind::Unshifted: return "unshifted";
    case PrecondKind::ShiftOnly: return "shift-only";
    case PrecondKind::Identity: return "identity";
    case PrecondKind::Custom: return "custom";
  }
  return "unknown";
}

double Preconditioner::scalar_factor() const noexcept {
  switch (kind()) {
    case PrecondKind::Product:
    case PrecondKind::ProductInexact:
    case PrecondKind::Symmetrized:
      return 2.0 * alpha();
    default:
      return 1.0;
  }
}

PreconditionerPtr build_product(const Operator& op, double alpha, FactorMode mode) {
  require_alpha(alpha);
  const CsrMatrix shifted = op.effective_a().shifted(alpha);
  const bool sym = op.a_symmetric();
  MatrixSolver f1 = mode == FactorMode::Exact ? MatrixSolver::exact(shifted, sym)
                                              : MatrixSolver::incomplete(shifted, sym);
  const PrecondKind kind = mode == FactorMode::Exact ? PrecondKind::Product : PrecondKind::ProductInexact;
  return std::make_shared<ProductPreconditioner>(kind, alpha, std::move(f1),
                                                 SmwSolver(op.effective_u(), alpha, op.gamma()));
}

PreconditionerPtr build_symmetrized(const Operator& op, double alpha, FactorMode mode) {
  require_alpha(alpha);
  if (!op.a_symmetric()) throw InvalidArgument("symmetrized preconditioner requires symmetric A");
  const CsrMatrix shifted = op.effective_a().shifted(alpha);
  SmwSolver f2(op.effective_u(), alpha, op.gamma());
  if (mode == FactorMode::Exact) {
    SparseCholesky c(shifted, amd_ordering(shifted));
    return std::make_shared<SymmetrizedPreconditioner>(alpha, c.perm(), c.factor(), std::move(f2));
  }
  IncompleteFactor f = ic0(shifted);
  Permutation natural(op.size());
  for (std::size_t i = 0; i < natural.size(); ++i) natural[i] = i;
  return std::make_shared<SymmetrizedPreconditioner>(alpha, std::move(natural), std::move(f.l),
                                                     std::move(f2));
}

PreconditionerPtr build_unshifted(const Operator& op, double alpha) {
  require_alpha(alpha);
  std::optional<MatrixSolver> f1;
  try {
    f1 = MatrixSolver::exact(op.effective_a(), op.a_symmetric());
  } catch (const FactorizationError& e) {
    throw NotPositiveDefinite(std::string("unshifted preconditioner: A could not be factored (") +
                                  e.what() + "); use the shifted product preconditioner",
                              e.index());
  }
  return std::make_shared<ProductPreconditioner>(PrecondKind::Unshifted, alpha, std::move(*f1),
                                                 SmwSolver(op.effective_u(), alpha, op.gamma()));
}

PreconditionerPtr build_shift_only(const Operator& op, double alpha) {
  require_alpha(alpha);
  const CsrMatrix shifted = op.effective_a().shifted(alpha);
  return std::make_shared<SolvePreconditioner>(PrecondKind::ShiftOnly, alpha, op.size(),
                                               MatrixSolver::incomplete(shifted, op.a_symmetric()));
}

PreconditionerPtr identity_preconditioner(std::size_t n) {
  return std::make_shared<SolvePreconditioner>(PrecondKind::Identity, 0.0, n, MatrixSolver{});
}

PreconditionerPtr build_exact_solve(const CsrMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("exact solve preconditioner: matrix is not square");
  return std::make_shared<SolvePreconditioner>(PrecondKind::Custom, 0.0, m.rows(),
                                               MatrixSolver::exact(m, m.is_symmetric(1e-12)));
}

PreconditionerPtr build_preconditioner(const Operator& op, PrecondKind kind, double alpha) {
  switch (kind) {
    case PrecondKind::Product: return build_product(op, alpha, FactorMode::Exact);
    case PrecondKind::ProductInexact: return build_product(op, alpha, FactorMode::Inexact);
    case PrecondKind::Symmetrized: return build_symmetrized(op, alpha, FactorMode::Exact);
    case PrecondKind::Unshifted: return build_unshifted(op, alpha);
    case PrecondKind::ShiftOnly: return build_shift_only(op, alpha);
    case PrecondKind::Identity: return identity_preconditioner(op.size());
    case PrecondKind::Custom: break;
  }
  throw InvalidArgument("build_preconditioner: custom preconditioners must be built directly");
}

}  // namespace lrsplit
