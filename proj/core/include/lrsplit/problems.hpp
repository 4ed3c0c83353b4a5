#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "lrsplit/dense.hpp"
#include "lrsplit/operator.hpp"
#include "lrsplit/sparse.hpp"

namespace lrsplit {

/// Staggered (MAC) discretization on the unit square with nx-by-ny cells.
/// Velocity unknowns: u on interior vertical faces, then v on interior
/// horizontal faces, n = (nx-1) ny + nx (ny-1); one pressure per cell,
/// k = nx ny. A is the cell-integrated vector Laplacian with no-slip walls,
/// B the integrated divergence, W the cell areas.
struct MacProblem {
  CsrMatrix a;
  CsrMatrix b;
  Vector w;
};

enum class Wind { RecirculatingVortex, None };

MacProblem gen_stokes_mac(std::size_t nx, std::size_t ny);

/// nu * Laplacian plus first-order upwind convection in flux form. Face
/// fluxes come from the stream function of the wind (2y(1-x^2), -2x(1-y^2))
/// on [-1,1]^2 mapped to the unit square, so they are discretely
/// divergence-free and A + A^T is positive definite.
MacProblem gen_oseen_mac(std::size_t nx, std::size_t ny, double nu, Wind wind = Wind::RecirculatingVortex);

struct LowRankProblem {
  CsrMatrix a;
  DenseMatrix u;
};

/// A = Q diag(logspace(1/cond, 1)) Q^T with Q two layers of random Givens
/// rotations (A is pentadiagonal); U Gaussian with unit-norm columns,
/// divided by its 2-norm when `normalize` is set.
LowRankProblem gen_random_spd_lowrank(std::size_t n, std::size_t k, double cond_target,
                                      std::uint64_t seed, bool normalize = false);

/// As above plus a random skew-symmetric tridiagonal part with entries in
/// [-skew, skew]; A + A^T stays positive definite.
LowRankProblem gen_random_positive_real_lowrank(std::size_t n, std::size_t k, double cond_target,
                                                double skew, std::uint64_t seed);

struct KktProblem {
  CsrMatrix h;
  CsrMatrix c;
  Vector z;
  Vector lambda;
};

/// H = 1D Laplacian + 0.1 I, C k-by-n sparse with full row rank, z and
/// lambda log-uniform in [1e-2, 1e2].
KktProblem gen_kkt_schur(std::size_t n, std::size_t k, std::uint64_t seed);

struct LsProblem {
  CsrMatrix b1;
  DenseMatrix b2;
  Vector c;
};

/// B1 (m1-by-n, m1 >= n) = [I; random sparse rows of the given density];
/// rank-deficient mode overwrites the last column with a copy of the first.
/// B2 is dense Gaussian k-by-n, c Gaussian of length m1 + k.
LsProblem gen_sparse_dense_ls(std::size_t m1, std::size_t k, std::size_t n, double density,
                              std::uint64_t seed, bool rank_deficient = false);

enum class ProblemKind { StokesMac, OseenMac, RandomSpdLowRank, RandomPositiveRealLowRank, KktSchur, SparseDenseLs };

std::string_view to_string(ProblemKind kind);
std::optional<ProblemKind> parse_problem_kind(std::string_view name);
std::string_view to_string(Wind wind);
std::optional<Wind> parse_wind(std::string_view name);

struct ProblemSpec {
  ProblemKind kind = ProblemKind::StokesMac;
  std::size_t nx = 16;
  std::size_t ny = 16;
  double nu = 0.01;
  Wind wind = Wind::RecirculatingVortex;
  std::size_t n = 100;
  std::size_t k = 5;
  double cond = 100.0;
  double skew = 0.5;
  std::size_t m1 = 0;
  double density = 0.1;
  bool rank_deficient = false;
  std::uint64_t seed = 1;
};

struct Instance {
  Operator op;
  Vector b;
};

/// Builds the operator and right-hand side described by `spec`. gamma is
/// used by the MAC and random kinds; KKT and least-squares kinds fix
/// gamma = 1. The right-hand side is B^T c for least squares and a seeded
/// uniform [-1, 1] vector otherwise.
Instance build_instance(const ProblemSpec& spec, double gamma);

/// Seeded uniform [-1, 1] vector.
Vector random_rhs(std::size_t n, std::uint64_t seed);

}  // namespace lrsplit
