#include "lrsplit/problems.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "lrsplit/errors.hpp"
#include "lrsplit/norm.hpp"
#include "lrsplit/rng.hpp"

namespace lrsplit {

namespace {

constexpr std::uint64_t kRhsStream = 0x5851F42D4C957F2DULL;

struct MacGrid {
  std::size_t nx, ny;
  double hx, hy;

  std::size_t u_count() const { return (nx - 1) * ny; }
  std::size_t v_count() const { return nx * (ny - 1); }
  std::size_t n() const { return u_count() + v_count(); }
  // u on face x = i hx, 1 <= i <= nx-1, row j.
  std::size_t u(std::size_t i, std::size_t j) const { return j * (nx - 1) + (i - 1); }
  // v on face y = j hy, 1 <= j <= ny-1, column i.
  std::size_t v(std::size_t i, std::size_t j) const { return u_count() + (j - 1) * nx + i; }
};

MacGrid make_grid(std::size_t nx, std::size_t ny) {
  if (nx < 3 || ny < 3) throw InvalidArgument("MAC grid needs at least 3 cells per direction");
  return {nx, ny, 1.0 / static_cast<double>(nx), 1.0 / static_cast<double>(ny)};
}

// Scaled stream function: wind = (d psi/dy, -d psi/dx) on the unit square.
double psi(double x, double y) {
  const double xs = 2.0 * x - 1.0;
  const double ys = 2.0 * y - 1.0;
  return -0.5 * (1.0 - xs * xs) * (1.0 - ys * ys);
}

constexpr std::size_t kBoundary = static_cast<std::size_t>(-1);

struct Face {
  double flux;
  std::size_t neighbor;
};

void add_upwind(std::vector<Triplet>& t, std::size_t row, const std::array<Face, 4>& faces) {
  double diag = 0.0;
  for (const Face& f : faces) {
    diag += std::max(f.flux, 0.0);
    if (f.neighbor != kBoundary && f.flux < 0.0) t.push_back({row, f.neighbor, f.flux});
  }
  t.push_back({row, row, diag});
}

// Outward fluxes through the four faces of the box [xw,xe] x [ys,yn],
// ordered east, west, north, south.
std::array<double, 4> box_fluxes(double xw, double xe, double ys, double yn) {
  return {psi(xe, yn) - psi(xe, ys), -(psi(xw, yn) - psi(xw, ys)), psi(xw, yn) - psi(xe, yn),
          -(psi(xw, ys) - psi(xe, ys))};
}

std::vector<Triplet> laplacian_triplets(const MacGrid& g, double scale) {
  const double cx = scale * g.hy / g.hx;
  const double cy = scale * g.hx / g.hy;
  std::vector<Triplet> t;
  t.reserve(5 * g.n());
  for (std::size_t j = 0; j < g.ny; ++j) {
    for (std::size_t i = 1; i < g.nx; ++i) {
      const std::size_t r = g.u(i, j);
      double diag = 2.0 * cx;
      if (i > 1) t.push_back({r, g.u(i - 1, j), -cx});
      if (i + 1 < g.nx) t.push_back({r, g.u(i + 1, j), -cx});
      if (j > 0) {
        diag += cy;
        t.push_back({r, g.u(i, j - 1), -cy});
      } else {
        diag += 2.0 * cy;
      }
      if (j + 1 < g.ny) {
        diag += cy;
        t.push_back({r, g.u(i, j + 1), -cy});
      } else {
        diag += 2.0 * cy;
      }
      t.push_back({r, r, diag});
    }
  }
  for (std::size_t j = 1; j < g.ny; ++j) {
    for (std::size_t i = 0; i < g.nx; ++i) {
      const std::size_t r = g.v(i, j);
      double diag = 2.0 * cy;
      if (j > 1) t.push_back({r, g.v(i, j - 1), -cy});
      if (j + 1 < g.ny) t.push_back({r, g.v(i, j + 1), -cy});
      if (i > 0) {
        diag += cx;
        t.push_back({r, g.v(i - 1, j), -cx});
      } else {
        diag += 2.0 * cx;
      }
      if (i + 1 < g.nx) {
        diag += cx;
        t.push_back({r, g.v(i + 1, j), -cx});
      } else {
        diag += 2.0 * cx;
      }
      t.push_back({r, r, diag});
    }
  }
  return t;
}

CsrMatrix divergence(const MacGrid& g) {
  std::vector<Triplet> t;
  t.reserve(4 * g.nx * g.ny);
  for (std::size_t j = 0; j < g.ny; ++j) {
    for (std::size_t i = 0; i < g.nx; ++i) {
      const std::size_t p = j * g.nx + i;
      if (i > 0) t.push_back({p, g.u(i, j), -g.hy});
      if (i + 1 < g.nx) t.push_back({p, g.u(i + 1, j), g.hy});
      if (j > 0) t.push_back({p, g.v(i, j), -g.hx});
      if (j + 1 < g.ny) t.push_back({p, g.v(i, j + 1), g.hx});
    }
  }
  return CsrMatrix::from_triplets(g.nx * g.ny, g.n(), std::move(t));
}

MacProblem assemble_mac(const MacGrid& g, std::vector<Triplet> t) {
  MacProblem p;
  p.a = CsrMatrix::from_triplets(g.n(), g.n(), std::move(t));
  p.b = divergence(g);
  p.w.assign(g.nx * g.ny, g.hx * g.hy);
  return p;
}

Vector logspace_diagonal(std::size_t n, double cond) {
  Vector d(n, 1.0);
  if (n < 2) return d;
  const double lo = -std::log10(cond);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(n - 1);
    d[i] = std::pow(10.0, lo * (1.0 - f));
  }
  return d;
}

CsrMatrix givens_layer(std::size_t n, std::size_t first, Rng& rng) {
  std::vector<Triplet> t;
  std::vector<bool> touched(n, false);
  constexpr double kTwoPi = 6.283185307179586;
  for (std::size_t p = first; p + 1 < n; p += 2) {
    const double theta = kTwoPi * rng.uniform();
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    t.push_back({p, p, c});
    t.push_back({p, p + 1, s});
    t.push_back({p + 1, p, -s});
    t.push_back({p + 1, p + 1, c});
    touched[p] = touched[p + 1] = true;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!touched[i]) t.push_back({i, i, 1.0});
  return CsrMatrix::from_triplets(n, n, std::move(t));
}

void check_low_rank_dims(std::size_t n, std::size_t k) {
  if (k < 1 || k >= n) throw InvalidArgument("generator: need 1 <= k < n");
}

DenseMatrix gaussian_unit_columns(std::size_t n, std::size_t k, Rng& rng) {
  DenseMatrix u(n, k);
  for (std::size_t j = 0; j < k; ++j) {
    auto col = u.column(j);
    for (double& v : col) v = rng.normal();
    scale(1.0 / norm2(col), col);
  }
  return u;
}

}  // namespace

MacProblem gen_stokes_mac(std::size_t nx, std::size_t ny) {
  const MacGrid g = make_grid(nx, ny);
  return assemble_mac(g, laplacian_triplets(g, 1.0));
}

MacProblem gen_oseen_mac(std::size_t nx, std::size_t ny, double nu, Wind wind) {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw InvalidArgument("gen_oseen_mac: nu must be positive");
  const MacGrid g = make_grid(nx, ny);
  std::vector<Triplet> t = laplacian_triplets(g, nu);
  if (wind == Wind::RecirculatingVortex) {
    const double hx = g.hx;
    const double hy = g.hy;
    for (std::size_t j = 0; j < g.ny; ++j) {
      for (std::size_t i = 1; i < g.nx; ++i) {
        const double x = static_cast<double>(i) * hx;
        const double y = static_cast<double>(j) * hy;
        const auto f = box_fluxes(x - 0.5 * hx, x + 0.5 * hx, y, y + hy);
        add_upwind(t, g.u(i, j),
                   {Face{f[0], i + 1 < g.nx ? g.u(i + 1, j) : kBoundary},
                    Face{f[1], i > 1 ? g.u(i - 1, j) : kBoundary},
                    Face{f[2], j + 1 < g.ny ? g.u(i, j + 1) : kBoundary},
                    Face{f[3], j > 0 ? g.u(i, j - 1) : kBoundary}});
      }
    }
    for (std::size_t j = 1; j < g.ny; ++j) {
      for (std::size_t i = 0; i < g.nx; ++i) {
        const double x = static_cast<double>(i) * hx;
        const double y = static_cast<double>(j) * hy;
        const auto f = box_fluxes(x, x + hx, y - 0.5 * hy, y + 0.5 * hy);
        add_upwind(t, g.v(i, j),
                   {Face{f[0], i + 1 < g.nx ? g.v(i + 1, j) : kBoundary},
                    Face{f[1], i > 0 ? g.v(i - 1, j) : kBoundary},
                    Face{f[2], j + 1 < g.ny ? g.v(i, j + 1) : kBoundary},
                    Face{f[3], j > 1 ? g.v(i, j - 1) : kBoundary}});
      }
    }
  }
  return assemble_mac(g, std::move(t));
}

LowRankProblem gen_random_spd_lowrank(std::size_t n, std::size_t k, double cond_target,
                                      std::uint64_t seed, bool normalize) {
  check_low_rank_dims(n, k);
  if (!(cond_target >= 1.0) || !std::isfinite(cond_target)) {
    throw InvalidArgument("gen_random_spd_lowrank: cond_target must be >= 1");
  }
  Rng rng(seed);
  const CsrMatrix g1 = givens_layer(n, 0, rng);
  const CsrMatrix g2 = givens_layer(n, 1, rng);
  const CsrMatrix q = multiply(g2, g1);
  const CsrMatrix d = CsrMatrix::diagonal(logspace_diagonal(n, cond_target));
  LowRankProblem p;
  p.a = multiply(multiply(q, d), q.transposed());
  // Exact symmetry regardless of rounding in the products.
  p.a = add(p.a, p.a.transposed(), 0.5, 0.5);
  p.u = gaussian_unit_columns(n, k, rng);
  if (normalize) {
    const double nu = two_norm_estimate(TallMatrix(p.u)).value;
    scale(1.0 / nu, p.u.values());
  }
  return p;
}

LowRankProblem gen_random_positive_real_lowrank(std::size_t n, std::size_t k, double cond_target,
                                                double skew, std::uint64_t seed) {
  if (!(skew >= 0.0) || !std::isfinite(skew)) throw InvalidArgument("skew must be nonnegative");
  LowRankProblem p = gen_random_spd_lowrank(n, k, cond_target, seed);
  Rng rng(seed ^ 0xA24BAED4963EE407ULL);
  std::vector<Triplet> t;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double s = rng.uniform(-skew, skew);
    t.push_back({i, i + 1, s});
    t.push_back({i + 1, i, -s});
  }
  p.a = add(p.a, CsrMatrix::from_triplets(n, n, std::move(t)));
  return p;
}

KktProblem gen_kkt_schur(std::size_t n, std::size_t k, std::uint64_t seed) {
  check_low_rank_dims(n, k);
  Rng rng(seed);
  std::vector<Triplet> h;
  for (std::size_t i = 0; i < n; ++i) {
    h.push_back({i, i, 2.1});
    if (i > 0) h.push_back({i, i - 1, -1.0});
    if (i + 1 < n) h.push_back({i, i + 1, -1.0});
  }
  std::vector<bool> pivot(n, false);
  std::vector<std::size_t> pivot_col(k);
  for (std::size_t i = 0; i < k; ++i) {
    pivot_col[i] = i * n / k;
    pivot[pivot_col[i]] = true;
  }
  std::vector<Triplet> c;
  for (std::size_t i = 0; i < k; ++i) {
    c.push_back({i, pivot_col[i], 3.0});
    std::size_t added = 0;
    std::size_t last = kBoundary;
    const std::size_t extra = std::min<std::size_t>(2, n - k);
    while (added < extra) {
      const auto col = static_cast<std::size_t>(rng.below(n));
      if (pivot[col] || col == last) continue;
      c.push_back({i, col, rng.uniform(-1.0, 1.0)});
      last = col;
      ++added;
    }
  }
  KktProblem p;
  p.h = CsrMatrix::from_triplets(n, n, std::move(h));
  p.c = CsrMatrix::from_triplets(k, n, std::move(c));
  p.z.resize(k);
  p.lambda.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    p.z[i] = std::pow(10.0, rng.uniform(-2.0, 2.0));
    p.lambda[i] = std::pow(10.0, rng.uniform(-2.0, 2.0));
  }
  return p;
}

LsProblem gen_sparse_dense_ls(std::size_t m1, std::size_t k, std::size_t n, double density,
                              std::uint64_t seed, bool rank_deficient) {
  check_low_rank_dims(n, k);
  if (m1 < n) throw InvalidArgument("gen_sparse_dense_ls: need m1 >= n");
  if (!(density >= 0.0 && density <= 1.0)) throw InvalidArgument("gen_sparse_dense_ls: density must lie in [0, 1]");
  Rng rng(seed);
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  for (std::size_t i = n; i < m1; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (rng.uniform() < density) t.push_back({i, j, rng.normal()});
  if (rank_deficient) {
    std::vector<Triplet> kept;
    for (const Triplet& e : t) {
      if (e.col == n - 1) continue;
      kept.push_back(e);
      if (e.col == 0) kept.push_back({e.row, n - 1, e.value});
    }
    t = std::move(kept);
  }
  LsProblem p;
  p.b1 = CsrMatrix::from_triplets(m1, n, std::move(t));
  p.b2 = DenseMatrix(k, n);
  for (double& v : p.b2.values()) v = rng.normal();
  p.c.resize(m1 + k);
  for (double& v : p.c) v = rng.normal();
  return p;
}

std::string_view to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::StokesMac: return "stokes";
    case ProblemKind::OseenMac: return "oseen";
    case ProblemKind::RandomSpdLowRank: return "random-spd";
    case ProblemKind::RandomPositiveRealLowRank: return "random-positive-real";
    case ProblemKind::KktSchur: return "kkt";
    case ProblemKind::SparseDenseLs: return "ls";
  }
  return "unknown";
}

std::optional<ProblemKind> parse_problem_kind(std::string_view name) {
  for (ProblemKind k : {ProblemKind::StokesMac, ProblemKind::OseenMac, ProblemKind::RandomSpdLowRank,
                        ProblemKind::RandomPositiveRealLowRank, ProblemKind::KktSchur,
                        ProblemKind::SparseDenseLs}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::string_view to_string(Wind wind) {
  return wind == Wind::RecirculatingVortex ? "vortex" : "none";
}

std::optional<Wind> parse_wind(std::string_view name) {
  if (name == "vortex") return Wind::RecirculatingVortex;
  if (name == "none") return Wind::None;
  return std::nullopt;
}

Vector random_rhs(std::size_t n, std::uint64_t seed) {
  Rng rng(seed ^ kRhsStream);
  Vector b(n);
  for (double& v : b) v = rng.uniform(-1.0, 1.0);
  return b;
}

Instance build_instance(const ProblemSpec& spec, double gamma) {
  switch (spec.kind) {
    case ProblemKind::StokesMac:
    case ProblemKind::OseenMac: {
      const MacProblem p = spec.kind == ProblemKind::StokesMac
                               ? gen_stokes_mac(spec.nx, spec.ny)
                               : gen_oseen_mac(spec.nx, spec.ny, spec.nu, spec.wind);
      Operator op = from_augmented_lagrangian(p.a, p.b, p.w, gamma);
      Vector b = random_rhs(op.size(), spec.seed);
      return {std::move(op), std::move(b)};
    }
    case ProblemKind::RandomSpdLowRank:
    case ProblemKind::RandomPositiveRealLowRank: {
      LowRankProblem p = spec.kind == ProblemKind::RandomSpdLowRank
                             ? gen_random_spd_lowrank(spec.n, spec.k, spec.cond, spec.seed)
                             : gen_random_positive_real_lowrank(spec.n, spec.k, spec.cond, spec.skew, spec.seed);
      Operator op(std::move(p.a), TallMatrix(std::move(p.u)), gamma);
      Vector b = random_rhs(op.size(), spec.seed);
      return {std::move(op), std::move(b)};
    }
    case ProblemKind::KktSchur: {
      const KktProblem p = gen_kkt_schur(spec.n, spec.k, spec.seed);
      Operator op = from_kkt_schur(p.h, p.c, p.z, p.lambda);
      Vector b = random_rhs(op.size(), spec.seed);
      return {std::move(op), std::move(b)};
    }
    case ProblemKind::SparseDenseLs: {
      const std::size_t m1 = spec.m1 == 0 ? 2 * spec.n : spec.m1;
      const LsProblem p = gen_sparse_dense_ls(m1, spec.k, spec.n, spec.density, spec.seed, spec.rank_deficient);
      NormalEquations ne = from_normal_equations(p.b1, p.b2);
      Vector b = ne.rhs(p.c);
      return {std::move(ne.op), std::move(b)};
    }
  }
  throw InvalidArgument("build_instance: unknown problem kind");
}

}  // namespace lrsplit
