#include <algorithm>
#include <cmath>

#include "lrsplit/errors.hpp"
#include "lrsplit/spectra.hpp"

namespace lrsplit {

Vector eig_symmetric(const DenseMatrix& m, std::size_t cap) {
  if (m.rows() != m.cols()) throw DimensionError("eig_symmetric: matrix is not square");
  const std::size_t n = m.rows();
  if (n > cap) {
    throw SizeCapExceeded("eig_symmetric: n = " + std::to_string(n) + " exceeds the cap of " +
                          std::to_string(cap));
  }
  const double fro = m.frobenius_norm();
  if (m.max_asymmetry() > 1e-10 * fro) throw InvalidArgument("eig_symmetric: matrix is not symmetric");
  if (n == 0) return {};

  DenseMatrix a(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) a(i, j) = 0.5 * (m(i, j) + m(j, i));

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  const double target = 1e-12 * fro;
  constexpr int kMaxSweeps = 100;
  int sweep = 0;
  while (off_norm() > target) {
    if (++sweep > kMaxSweeps) throw ConvergenceError("eig_symmetric: Jacobi sweeps did not converge");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        auto colp = a.column(p);
        auto colq = a.column(q);
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = colp[k];
          const double akq = colq[k];
          colp[k] = c * akp - s * akq;
          colq[k] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          a(p, k) = colp[k];
          a(q, k) = colq[k];
        }
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
  }
  Vector eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

}  // namespace lrsplit
