#include "lrsplit/tall.hpp"

#include "lrsplit/errors.hpp"

namespace lrsplit {

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace

std::size_t rows(const TallMatrix& u) {
  return std::visit([](const auto& m) { return m.rows(); }, u);
}

std::size_t cols(const TallMatrix& u) {
  return std::visit([](const auto& m) { return m.cols(); }, u);
}

bool is_sparse(const TallMatrix& u) { return std::holds_alternative<CsrMatrix>(u); }

Vector tall_apply(const TallMatrix& u, std::span<const double> x, Trans trans) {
  return std::visit(overloaded{
                        [&](const CsrMatrix& m) { return spmv(m, x, trans); },
                        [&](const DenseMatrix& m) { return matvec(m, x, trans); },
                    },
                    u);
}

DenseMatrix to_dense(const TallMatrix& u) {
  return std::visit(overloaded{
                        [](const CsrMatrix& m) { return m.to_dense(); },
                        [](const DenseMatrix& m) { return m; },
                    },
                    u);
}

TallMatrix scaled(const TallMatrix& u, double s) {
  return std::visit(overloaded{
                        [&](const CsrMatrix& m) -> TallMatrix { return m.scaled(s); },
                        [&](const DenseMatrix& m) -> TallMatrix {
                          DenseMatrix r = m;
                          scale(s, r.values());
                          return r;
                        },
                    },
                    u);
}

TallMatrix row_scaled(const TallMatrix& u, std::span<const double> d) {
  if (d.size() != rows(u)) throw DimensionError("row_scaled: length mismatch");
  return std::visit(overloaded{
                        [&](const CsrMatrix& m) -> TallMatrix {
                          Vector ones(m.cols(), 1.0);
                          return m.diag_scaled(d, ones);
                        },
                        [&](const DenseMatrix& m) -> TallMatrix {
                          DenseMatrix r = m;
                          for (std::size_t j = 0; j < r.cols(); ++j)
                            for (std::size_t i = 0; i < r.rows(); ++i) r(i, j) *= d[i];
                          return r;
                        },
                    },
                    u);
}

TallMatrix col_scaled(const TallMatrix& u, std::span<const double> d) {
  if (d.size() != cols(u)) throw DimensionError("col_scaled: length mismatch");
  return std::visit(overloaded{
                        [&](const CsrMatrix& m) -> TallMatrix {
                          Vector ones(m.rows(), 1.0);
                          return m.diag_scaled(ones, d);
                        },
                        [&](const DenseMatrix& m) -> TallMatrix {
                          DenseMatrix r = m;
                          for (std::size_t j = 0; j < r.cols(); ++j) scale(d[j], r.column(j));
                          return r;
                        },
                    },
                    u);
}

Vector row_norms_squared(const TallMatrix& u) {
  return std::visit(overloaded{
                        [](const CsrMatrix& m) {
                          Vector r(m.rows(), 0.0);
                          for (std::size_t i = 0; i < m.rows(); ++i)
                            for (double v : m.row_values(i)) r[i] += v * v;
                          return r;
                        },
                        [](const DenseMatrix& m) {
                          Vector r(m.rows(), 0.0);
                          for (std::size_t j = 0; j < m.cols(); ++j) {
                            const auto c = m.column(j);
                            for (std::size_t i = 0; i < m.rows(); ++i) r[i] += c[i] * c[i];
                          }
                          return r;
                        },
                    },
                    u);
}

std::variant<CsrMatrix, DenseMatrix> gram(const TallMatrix& u) {
  return std::visit(overloaded{
                        [](const CsrMatrix& m) -> std::variant<CsrMatrix, DenseMatrix> {
                          return multiply(m.transposed(), m);
                        },
                        [](const DenseMatrix& m) -> std::variant<CsrMatrix, DenseMatrix> {
                          return matmul_tn(m, m);
                        },
                    },
                    u);
}

}  // namespace lrsplit
