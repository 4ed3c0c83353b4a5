#include <algorithm>
#include <cmath>

#include "lrsplit/errors.hpp"
#include "lrsplit/spectra.hpp"

namespace lrsplit {

namespace {

double sign_of(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

void reduce_to_hessenberg(DenseMatrix& a) {
  const std::size_t n = a.rows();
  Vector v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double alpha = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) alpha = std::max(alpha, std::abs(a(i, k)));
    if (alpha == 0.0) continue;
    double sigma = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) {
      v[i] = a(i, k) / alpha;
      sigma += v[i] * v[i];
    }
    const double norm = std::sqrt(sigma);
    const double s = v[k + 1] >= 0.0 ? norm : -norm;
    v[k + 1] += s;
    const double vtv = sigma + 2.0 * s * (v[k + 1] - s) + s * s;
    if (vtv == 0.0) continue;
    // A <- H A H with H = I - 2 v v^T / (v^T v).
    for (std::size_t j = 0; j < n; ++j) {
      double d = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) d += v[i] * a(i, j);
      d = 2.0 * d / vtv;
      for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= d * v[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      double d = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) d += a(i, j) * v[j];
      d = 2.0 * d / vtv;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= d * v[j];
    }
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
  }
}

// Francis double-shift QR on an upper Hessenberg matrix (eigenvalues only).
void hessenberg_qr(DenseMatrix& a, Vector& wr, Vector& wi) {
  const int n = static_cast<int>(a.rows());
  auto at = [&](int i, int j) -> double& {
    return a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  };
  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(at(i, j));

  const long max_total = 100L * std::max(n, 1);
  long total = 0;
  int nn = n - 1;
  double t = 0.0;
  int l = 0;
  while (nn >= 0) {
    int its = 0;
    do {
      for (l = nn; l >= 1; --l) {
        double s = std::abs(at(l - 1, l - 1)) + std::abs(at(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(at(l, l - 1)) + s == s) {
          at(l, l - 1) = 0.0;
          break;
        }
      }
      double x = at(nn, nn);
      if (l == nn) {
        wr[nn] = x + t;
        wi[nn--] = 0.0;
      } else {
        double y = at(nn - 1, nn - 1);
        double w = at(nn, nn - 1) * at(nn - 1, nn);
        if (l == nn - 1) {
          const double p = 0.5 * (y - x);
          const double q = p * p + w;
          double z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + sign_of(z, p);
            wr[nn - 1] = wr[nn] = x + z;
            if (z != 0.0) wr[nn] = x - w / z;
            wi[nn - 1] = wi[nn] = 0.0;
          } else {
            wr[nn - 1] = wr[nn] = x + p;
            wi[nn - 1] = -(wi[nn] = z);
          }
          nn -= 2;
        } else {
          if (++total > max_total) throw ConvergenceError("eig_general: QR iteration did not converge");
          if (its > 0 && its % 30 == 0) {
            t += x;
            for (int i = 0; i <= nn; ++i) at(i, i) -= x;
            const double s = std::abs(at(nn, nn - 1)) + std::abs(at(nn - 1, nn - 2));
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          int m = nn - 2;
          double p = 0.0, q = 0.0, r = 0.0, z = 0.0;
          for (; m >= l; --m) {
            z = at(m, m);
            r = x - z;
            double s = y - z;
            p = (r * s - w) / at(m + 1, m) + at(m, m + 1);
            q = at(m + 1, m + 1) - z - r - s;
            r = at(m + 2, m + 1);
            s = std::abs(p) + std::abs(q) + std::abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            const double u = std::abs(at(m, m - 1)) * (std::abs(q) + std::abs(r));
            const double v = std::abs(p) * (std::abs(at(m - 1, m - 1)) + std::abs(z) + std::abs(at(m + 1, m + 1)));
            if (u + v == v) break;
          }
          for (int i = m + 2; i <= nn; ++i) {
            at(i, i - 2) = 0.0;
            if (i != m + 2) at(i, i - 3) = 0.0;
          }
          for (int k = m; k <= nn - 1; ++k) {
            if (k != m) {
              p = at(k, k - 1);
              q = at(k + 1, k - 1);
              r = 0.0;
              if (k != nn - 1) r = at(k + 2, k - 1);
              if ((x = std::abs(p) + std::abs(q) + std::abs(r)) != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            const double s = sign_of(std::sqrt(p * p + q * q + r * r), p);
            if (s != 0.0) {
              if (k == m) {
                if (l != m) at(k, k - 1) = -at(k, k - 1);
              } else {
                at(k, k - 1) = -s * x;
              }
              p += s;
              x = p / s;
              y = q / s;
              z = r / s;
              q /= p;
              r /= p;
              for (int j = k; j <= nn; ++j) {
                p = at(k, j) + q * at(k + 1, j);
                if (k != nn - 1) {
                  p += r * at(k + 2, j);
                  at(k + 2, j) -= p * z;
                }
                at(k + 1, j) -= p * y;
                at(k, j) -= p * x;
              }
              const int mmin = nn < k + 3 ? nn : k + 3;
              for (int i = l; i <= mmin; ++i) {
                p = x * at(i, k) + y * at(i, k + 1);
                if (k != nn - 1) {
                  p += z * at(i, k + 2);
                  at(i, k + 2) -= p * r;
                }
                at(i, k + 1) -= p * q;
                at(i, k) -= p;
              }
            }
          }
        }
      }
    } while (l < nn - 1);
  }
}

// Solves (M - shift I) x = b with partial pivoting; tiny pivots are
// replaced so that inverse iteration stays finite.
class ShiftedLu {
 public:
  ShiftedLu(const DenseMatrix& m, double shift) : lu_(m), piv_(m.rows()) {
    const std::size_t n = m.rows();
    for (std::size_t i = 0; i < n; ++i) lu_(i, i) -= shift;
    const double tiny = std::max(m.frobenius_norm(), 1.0) * 1e-300;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      for (std::size_t i = k + 1; i < n; ++i)
        if (std::abs(lu_(i, k)) > std::abs(lu_(p, k))) p = i;
      piv_[k] = p;
      if (p != k)
        for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
      if (std::abs(lu_(k, k)) < tiny) lu_(k, k) = tiny;
      for (std::size_t i = k + 1; i < n; ++i) {
        lu_(i, k) /= lu_(k, k);
        const double f = lu_(i, k);
        for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
      }
    }
  }

  Vector solve(Vector b) const {
    const std::size_t n = lu_.rows();
    for (std::size_t k = 0; k < n; ++k) std::swap(b[k], b[piv_[k]]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) b[i] -= lu_(i, j) * b[j];
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t j = i + 1; j < n; ++j) b[i] -= lu_(i, j) * b[j];
      b[i] /= lu_(i, i);
    }
    return b;
  }

 private:
  DenseMatrix lu_;
  std::vector<std::size_t> piv_;
};

}  // namespace

Spectrum eig_general(const DenseMatrix& m, std::size_t cap) {
  if (m.rows() != m.cols()) throw DimensionError("eig_general: matrix is not square");
  const std::size_t n = m.rows();
  if (n > cap) {
    throw SizeCapExceeded("eig_general: n = " + std::to_string(n) + " exceeds the cap of " +
                          std::to_string(cap));
  }
  Spectrum out;
  if (n == 0) return out;
  if (!all_finite(m.values())) throw NumericalBreakdown("eig_general: non-finite matrix entry");
  DenseMatrix a = m;
  reduce_to_hessenberg(a);
  Vector wr(n), wi(n);
  hessenberg_qr(a, wr, wi);
  out.eigenvalues.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.eigenvalues.emplace_back(wr[i], wi[i]);
  return out;
}

Vector real_eigenvector(const DenseMatrix& m, double lambda) {
  if (m.rows() != m.cols()) throw DimensionError("real_eigenvector: matrix is not square");
  const std::size_t n = m.rows();
  const double shift = lambda + 1e-10 * std::max(1.0, std::abs(lambda));
  const ShiftedLu lu(m, shift);
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.1 * static_cast<double>(i % 7);
  for (int it = 0; it < 4; ++it) {
    x = lu.solve(std::move(x));
    const double nx = norm2(x);
    if (!(nx > 0.0) || !std::isfinite(nx)) throw NumericalBreakdown("real_eigenvector: inverse iteration failed");
    scale(1.0 / nx, x);
  }
  return x;
}

}  // namespace lrsplit
