#include "app.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "lrsplit/errors.hpp"
#include "lrsplit/krylov.hpp"
#include "lrsplit/matrix_market.hpp"
#include "lrsplit/spectra.hpp"

namespace lrsplit::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Flags {
  std::string config;
  std::optional<std::string> matrix_a, matrix_u, rhs, problem, wind, alpha_grid, method, precond, convention, out,
      solution;
  std::optional<double> gamma, alpha, tol, beta, nu, cond, skew, density;
  std::optional<std::size_t> maxit, restart, nx, ny, n, k, m1;
  std::optional<std::uint64_t> seed;
  bool scale_diag = false;
  bool normalize = false;
  bool no_timing = false;
  bool rank_deficient = false;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON config file; flags override its values");
  app->add_option("--matrix-a", f.matrix_a, "Matrix Market file with A");
  app->add_option("--matrix-u", f.matrix_u, "Matrix Market file with U (n-by-k)");
  app->add_option("--rhs", f.rhs, "Matrix Market file with b (default: seeded random)");
  app->add_option("--problem", f.problem, "generator: stokes, oseen, random-spd, random-positive-real, kkt, ls");
  app->add_option("--nx", f.nx, "grid cells in x (stokes, oseen)");
  app->add_option("--ny", f.ny, "grid cells in y (stokes, oseen)");
  app->add_option("--nu", f.nu, "viscosity (oseen)");
  app->add_option("--wind", f.wind, "vortex or none (oseen)");
  app->add_option("--n", f.n, "size (random, kkt, ls)");
  app->add_option("--k", f.k, "rank (random, kkt, ls)");
  app->add_option("--cond", f.cond, "condition number of A (random)");
  app->add_option("--skew", f.skew, "skew part magnitude (random-positive-real)");
  app->add_option("--m1", f.m1, "rows of the sparse block (ls, default 2n)");
  app->add_option("--density", f.density, "density of the random sparse rows (ls)");
  app->add_flag("--rank-deficient", f.rank_deficient, "duplicate a column of the sparse block (ls)");
  app->add_option("--gamma", f.gamma, "gamma > 0");
  app->add_option("--seed", f.seed, "seed for generators and the default right-hand side");
  app->add_flag("--scale-diag", f.scale_diag, "symmetric diagonal scaling by diag(A + gamma U U^T)");
  app->add_flag("--normalize", f.normalize, "scale A and U to unit 2-norm");
  app->add_option("--out", f.out, "output path");
}

void add_solver(CLI::App* app, Flags& f) {
  app->add_option("--alpha", f.alpha, "shift alpha > 0 (default sqrt(gamma) of the solved system)");
  app->add_option("--method", f.method, "gmres, pcg or stationary");
  app->add_option("--precond", f.precond,
                  "product, product-inexact, symmetrized, unshifted, shift-only, identity (none)");
  app->add_option("--tol", f.tol, "relative residual tolerance");
  app->add_option("--maxit", f.maxit, "iteration limit");
  app->add_option("--restart", f.restart, "GMRES restart length");
  app->add_option("--beta", f.beta, "damping of the stationary iteration, in (0, 1]");
  app->add_flag("--no-timing", f.no_timing, "write zero timings (byte-reproducible output)");
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidArgument("config file '" + path + "': " + e.what());
  }
}

RunConfig resolve(const Flags& f) {
  RunConfig c;
  if (!f.config.empty()) apply_json(c, read_json_file(f.config));

  if (f.matrix_a || f.matrix_u) c.problem.reset();
  if (f.matrix_a) c.matrix_a = *f.matrix_a;
  if (f.matrix_u) c.matrix_u = *f.matrix_u;
  if (f.problem) {
    const auto kind = parse_problem_kind(*f.problem);
    if (!kind) throw InvalidArgument("unknown problem '" + *f.problem + "'");
    if (!c.problem || c.problem->kind != *kind) {
      c.problem = ProblemSpec{};
      c.problem->kind = *kind;
    }
    c.matrix_a.clear();
    c.matrix_u.clear();
  }
  const bool gen_flags = f.nx || f.ny || f.nu || f.wind || f.n || f.k || f.cond || f.skew || f.m1 || f.density ||
                         f.rank_deficient;
  if (gen_flags && !c.problem) throw InvalidArgument("generator options need --problem");
  if (c.problem) {
    ProblemSpec& p = *c.problem;
    if (f.nx) p.nx = *f.nx;
    if (f.ny) p.ny = *f.ny;
    if (f.nu) p.nu = *f.nu;
    if (f.wind) {
      const auto w = parse_wind(*f.wind);
      if (!w) throw InvalidArgument("unknown wind '" + *f.wind + "' (vortex, none)");
      p.wind = *w;
    }
    if (f.n) p.n = *f.n;
    if (f.k) p.k = *f.k;
    if (f.cond) p.cond = *f.cond;
    if (f.skew) p.skew = *f.skew;
    if (f.m1) p.m1 = *f.m1;
    if (f.density) p.density = *f.density;
    if (f.rank_deficient) p.rank_deficient = true;
  }
  if (f.rhs) c.rhs = *f.rhs;
  if (f.gamma) c.gamma = *f.gamma;
  if (f.alpha) c.alpha = *f.alpha;
  if (f.alpha_grid) c.alpha_grid = parse_alpha_grid(*f.alpha_grid);
  if (f.method) c.method = parse_method(*f.method);
  if (f.precond) c.precond = parse_precond_list(*f.precond);
  if (f.tol) c.tol = *f.tol;
  if (f.maxit) c.maxit = *f.maxit;
  if (f.restart) c.restart = *f.restart;
  if (f.beta) c.beta = *f.beta;
  if (f.convention) c.convention = *f.convention;
  if (f.seed) c.seed = *f.seed;
  if (f.out) c.out = *f.out;
  if (f.solution) c.solution = *f.solution;
  if (f.scale_diag) c.scale_diag = true;
  if (f.normalize) c.normalize = true;
  if (f.no_timing) c.no_timing = true;
  if (c.problem) c.problem->seed = c.seed;
  return c;
}

struct System {
  Operator original;
  Vector b_original;
  Operator op;
  Vector b;
  std::optional<Vector> d;
  std::optional<NormalizationRecord> normalization;
};

Instance load_instance(const RunConfig& c) {
  if (c.problem) {
    Instance inst = build_instance(*c.problem, c.gamma);
    if (!c.rhs.empty()) inst.b = mm_read_vector(c.rhs);
    if (inst.b.size() != inst.op.size()) throw DimensionError("right-hand side length does not match A");
    return inst;
  }
  Operator op(mm_read_sparse(c.matrix_a), mm_read(c.matrix_u), c.gamma);
  Vector b = c.rhs.empty() ? random_rhs(op.size(), c.seed) : mm_read_vector(c.rhs);
  if (b.size() != op.size()) throw DimensionError("right-hand side length does not match A");
  return {std::move(op), std::move(b)};
}

System prepare(const RunConfig& c, bool force_normalize) {
  Instance inst = load_instance(c);
  Operator op = inst.op;
  Vector b = inst.b;
  std::optional<Vector> d;
  if (c.scale_diag) {
    op = with_diagonal_scaling(op);
    d = *op.scaling();
    for (std::size_t i = 0; i < b.size(); ++i) b[i] /= (*d)[i];
  }
  std::optional<NormalizationRecord> rec;
  if (c.normalize || force_normalize) {
    auto [nop, r] = normalize(op);
    op = std::move(nop);
    scale(1.0 / r.norm_a, b);
    rec = r;
  }
  return {std::move(inst.op), std::move(inst.b), std::move(op), std::move(b), std::move(d), rec};
}

double chosen_alpha(const RunConfig& c, const System& s) {
  return c.alpha ? *c.alpha : alpha_heuristic(s.op.gamma());
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SolveResult run_cell(const System& s, double alpha, PrecondKind kind, const RunConfig& c) {
  SolveOptions o;
  o.tol = c.tol;
  o.maxit = c.maxit;
  o.restart = c.restart;
  o.beta = c.beta;
  SolveResult r;
  if (c.method == Method::Stationary) {
    r = stationary_alternating(s.op, s.b, alpha, o);
  } else {
    const auto t0 = std::chrono::steady_clock::now();
    const PreconditionerPtr p = build_preconditioner(s.op, kind, alpha);
    const double setup = seconds_since(t0);
    r = c.method == Method::Gmres ? gmres_right(s.op, s.b, *p, o) : pcg(s.op, s.b, *p, o);
    r.report.setup_seconds = setup;
  }
  if (c.no_timing) {
    r.report.setup_seconds = 0.0;
    r.report.solve_seconds = 0.0;
  }
  return r;
}

/// Maps the solution of the solved system back and measures it on the
/// original one.
Vector unscale(const System& s, const Vector& x) {
  Vector out = x;
  if (s.d)
    for (std::size_t i = 0; i < out.size(); ++i) out[i] /= (*s.d)[i];
  return out;
}

double relres(const Operator& op, const Vector& b, const Vector& x) {
  const double nb = norm2(b);
  const Vector r = subtract(b, op.apply(x));
  return nb == 0.0 ? norm2(r) : norm2(r) / nb;
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw Error("cannot open '" + path + "' for writing");
    }
    stream_ = path.empty() ? &fallback : &file_;
  }
  std::ostream& get() { return *stream_; }
  bool is_file() const { return file_.is_open(); }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

std::string precond_name(PrecondKind k) { return std::string(to_string(k)); }

json normalization_json(const System& s) {
  if (!s.normalization) return nullptr;
  return {{"norm_a", s.normalization->norm_a},
          {"norm_u", s.normalization->norm_u},
          {"gamma_tilde", s.normalization->gamma_tilde}};
}

int cmd_solve(const RunConfig& c, std::ostream& out, std::ostream& err) {
  validate(c);
  if (c.precond.size() != 1) throw InvalidArgument("solve takes a single --precond");
  const System s = prepare(c, false);
  const double alpha = chosen_alpha(c, s);
  const SolveResult r = run_cell(s, alpha, c.precond.front(), c);
  const Vector x = unscale(s, r.x);

  std::string solution = c.solution;
  if (solution.empty() && !c.out.empty()) solution = fs::path(c.out).replace_extension(".solution.mtx").string();

  json j;
  j["config"] = to_json(c);
  j["n"] = s.op.size();
  j["k"] = s.op.rank();
  j["gamma_solved"] = s.op.gamma();
  j["normalization"] = normalization_json(s);
  j["alpha"] = alpha;
  j["precond"] = precond_name(c.precond.front());
  j["method"] = std::string(to_string(c.method));
  j["converged"] = r.report.converged;
  j["iterations"] = r.report.iterations;
  j["relres"] = r.report.final_relres();
  j["relres_unscaled"] = relres(s.original, s.b_original, x);
  j["setup_s"] = r.report.setup_seconds;
  j["solve_s"] = r.report.solve_seconds;
  j["residual_history"] = r.report.residual_history;
  j["solution"] = solution.empty() ? json(nullptr) : json(solution);

  if (!solution.empty()) mm_write_vector(x, solution);
  Output o(c.out, out);
  o.get() << j.dump(2) << '\n';
  if (!r.report.converged) {
    err << "not converged after " << r.report.iterations << " iterations (relres "
        << format_real(r.report.final_relres()) << ")\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

struct SweepRow {
  double alpha;
  PrecondKind kind;
  std::size_t iterations;
  bool converged;
  double setup_s;
  double solve_s;
  double relres;
};

int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream& err) {
  validate(c);
  const System s = prepare(c, false);
  const std::vector<double> alphas =
      c.alpha_grid ? alpha_values(*c.alpha_grid) : std::vector<double>{chosen_alpha(c, s)};

  std::vector<SweepRow> rows;
  for (double alpha : alphas) {
    for (PrecondKind kind : c.precond) {
      SweepRow row{alpha, kind, c.maxit, false, 0.0, 0.0, std::numeric_limits<double>::quiet_NaN()};
      try {
        const SolveResult r = run_cell(s, alpha, kind, c);
        row.iterations = r.report.iterations;
        row.converged = r.report.converged;
        row.setup_s = r.report.setup_seconds;
        row.solve_s = r.report.solve_seconds;
        row.relres = r.report.final_relres();
      } catch (const NumericalBreakdown& e) {
        err << "alpha=" << format_real(alpha) << " " << precond_name(kind) << ": " << e.what() << '\n';
      } catch (const FactorizationError& e) {
        err << "alpha=" << format_real(alpha) << " " << precond_name(kind) << ": " << e.what() << '\n';
      }
      rows.push_back(row);
    }
  }

  Output o(c.out, out);
  std::ostream& csv = o.get();
  csv << "# config: " << to_json(c).dump() << '\n';
  csv << "alpha,precond,iterations,converged,setup_s,solve_s,relres\n";
  for (const SweepRow& r : rows) {
    csv << format_real(r.alpha) << ',' << precond_name(r.kind) << ',' << r.iterations << ','
        << (r.converged ? "true" : "false") << ',' << format_real(r.setup_s) << ',' << format_real(r.solve_s) << ','
        << format_real(r.relres) << '\n';
  }

  std::ostream& summary = o.is_file() ? out : err;
  for (PrecondKind kind : c.precond) {
    const SweepRow* best = nullptr;
    for (const SweepRow& r : rows)
      if (r.kind == kind && r.converged && (!best || r.iterations < best->iterations)) best = &r;
    summary << "best " << precond_name(kind);
    if (best) {
      summary << " alpha=" << format_real(best->alpha) << " iterations=" << best->iterations << '\n';
    } else {
      summary << " none converged\n";
    }
  }
  return kExitOk;
}

json pair_json(std::pair<double, double> p) { return json::array({p.first, p.second}); }

int cmd_bounds(const RunConfig& c, std::ostream& out, std::ostream& err) {
  validate(c);
  const System s = prepare(c, true);
  const double alpha = chosen_alpha(c, s);
  const bool with_spectrum = s.op.size() <= kGeneralEigCap;
  if (!with_spectrum) err << "n = " << s.op.size() << " exceeds the spectrum cap; spectrum fields left null\n";
  const BoundsReport b = compute_bounds_report(s.op, alpha, with_spectrum);

  json j;
  j["config"] = to_json(c);
  j["n"] = s.op.size();
  j["k"] = s.op.rank();
  j["normalization"] = normalization_json(s);
  j["alpha"] = b.alpha;
  j["gamma"] = b.gamma;
  j["lambda_min_sym"] = b.lambda_min_sym;
  j["lambda_min_a"] = b.lambda_min_a;
  j["lambda_max_a"] = b.lambda_max_a;
  j["mu"] = b.mu;
  j["lower_bound_re"] = b.lower_bound_re;
  j["symm_interval"] = pair_json(b.symm_interval);
  j["rho_upper"] = b.rho_upper;
  j["alpha_star"] = b.alpha_star;
  j["alpha_heuristic"] = b.alpha_heuristic;
  j["spectrum_computed"] = with_spectrum;
  j["min_re"] = b.min_re;
  j["max_re"] = b.max_re;
  j["max_abs_im"] = b.max_abs_im;
  Output o(c.out, out);
  o.get() << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_spectrum(const RunConfig& c, std::ostream& out, std::ostream&) {
  validate(c);
  if (c.precond.size() != 1) throw InvalidArgument("spectrum takes a single --precond");
  const System s = prepare(c, false);
  if (s.op.size() > kGeneralEigCap) {
    throw SizeCapExceeded("spectrum: n = " + std::to_string(s.op.size()) + " exceeds the cap of " +
                          std::to_string(kGeneralEigCap));
  }
  const double alpha = chosen_alpha(c, s);
  const PreconditionerPtr p = build_preconditioner(s.op, c.precond.front(), alpha);
  const ScalarConvention conv = c.convention == "retained" ? ScalarConvention::Retained : ScalarConvention::Dropped;
  const Spectrum sp = preconditioned_spectrum(s.op, *p, conv, kGeneralEigCap).sorted();

  json cfg = to_json(c);
  cfg["alpha_used"] = alpha;
  Output o(c.out, out);
  std::ostream& csv = o.get();
  csv << "# config: " << cfg.dump() << '\n';
  csv << "re,im\n";
  for (const auto& z : sp.eigenvalues) csv << format_real(z.real()) << ',' << format_real(z.imag()) << '\n';
  return kExitOk;
}

void write_tall(const TallMatrix& u, const fs::path& path) {
  std::visit([&](const auto& m) { mm_write(m, path); }, u);
}

int cmd_gen(const RunConfig& c, std::ostream& out, std::ostream&) {
  if (!c.problem) throw InvalidArgument("gen needs --problem");
  if (c.out.empty()) throw InvalidArgument("gen needs --out <directory>");
  validate(c);
  const ProblemSpec& spec = *c.problem;
  const Instance inst = build_instance(spec, c.gamma);
  const fs::path dir(c.out);
  fs::create_directories(dir);

  mm_write(inst.op.a(), dir / "A.mtx");
  write_tall(inst.op.u(), dir / "U.mtx");
  mm_write_vector(inst.b, dir / "b.mtx");
  switch (spec.kind) {
    case ProblemKind::StokesMac:
    case ProblemKind::OseenMac: {
      const MacProblem p = spec.kind == ProblemKind::StokesMac ? gen_stokes_mac(spec.nx, spec.ny)
                                                               : gen_oseen_mac(spec.nx, spec.ny, spec.nu, spec.wind);
      mm_write(p.b, dir / "B.mtx");
      mm_write_vector(p.w, dir / "W.mtx");
      break;
    }
    case ProblemKind::KktSchur: {
      const KktProblem p = gen_kkt_schur(spec.n, spec.k, spec.seed);
      mm_write(p.h, dir / "H.mtx");
      mm_write(p.c, dir / "C.mtx");
      mm_write_vector(p.z, dir / "z.mtx");
      mm_write_vector(p.lambda, dir / "lambda.mtx");
      break;
    }
    case ProblemKind::SparseDenseLs: {
      const LsProblem p =
          gen_sparse_dense_ls(spec.m1 == 0 ? 2 * spec.n : spec.m1, spec.k, spec.n, spec.density, spec.seed,
                              spec.rank_deficient);
      mm_write(p.b1, dir / "B1.mtx");
      mm_write(p.b2, dir / "B2.mtx");
      mm_write_vector(p.c, dir / "c.mtx");
      break;
    }
    case ProblemKind::RandomSpdLowRank:
    case ProblemKind::RandomPositiveRealLowRank:
      break;
  }

  json side;
  side["problem"] = to_json(spec);
  side["gamma"] = inst.op.gamma();
  side["n"] = inst.op.size();
  side["k"] = inst.op.rank();
  side["files"] = {{"matrix-a", "A.mtx"}, {"matrix-u", "U.mtx"}, {"rhs", "b.mtx"}};
  {
    std::ofstream f(dir / "spec.json", std::ios::binary);
    if (!f) throw Error("cannot write '" + (dir / "spec.json").string() + "'");
    f << side.dump(2) << '\n';
  }
  out << "wrote " << dir.string() << '\n';
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Preconditioned solvers for A + gamma U U^T"};
  app.name("lrsplit");
  app.require_subcommand(1);
  Flags f;

  CLI::App* solve = app.add_subcommand("solve", "solve one system, write a JSON report and the solution");
  CLI::App* sweep = app.add_subcommand("sweep", "iteration counts over an alpha grid and preconditioners (CSV)");
  CLI::App* bounds = app.add_subcommand("bounds", "eigenvalue bounds of the normalized system (JSON)");
  CLI::App* spectrum = app.add_subcommand("spectrum", "eigenvalues of the preconditioned matrix (CSV)");
  CLI::App* gen = app.add_subcommand("gen", "write a generated problem as Matrix Market files");

  for (CLI::App* sub : {solve, sweep, bounds, spectrum, gen}) add_common(sub, f);
  for (CLI::App* sub : {solve, sweep, bounds, spectrum}) add_solver(sub, f);
  sweep->add_option("--alpha-grid", f.alpha_grid, "min:max:points, log-spaced");
  solve->add_option("--solution", f.solution, "solution file (default: next to --out)");
  spectrum->add_option("--convention", f.convention, "dropped or retained scalar factor");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const RunConfig c = resolve(f);
    if (*solve) return cmd_solve(c, out, err);
    if (*sweep) return cmd_sweep(c, out, err);
    if (*bounds) return cmd_bounds(c, out, err);
    if (*spectrum) return cmd_spectrum(c, out, err);
    return cmd_gen(c, out, err);
  } catch (const NumericalBreakdown& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const FactorizationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ParseError& e) {
    err << "error: " << e.what();
    if (e.line() > 0) err << " (line " << e.line() << ")";
    err << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace lrsplit::cli
