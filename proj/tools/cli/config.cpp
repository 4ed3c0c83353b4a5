#include "config.hpp"

#include <charconv>
#include <cmath>

#include "lrsplit/errors.hpp"
#include "lrsplit/matrix_market.hpp"

namespace lrsplit::cli {

namespace {

double parse_double(std::string_view s, const char* what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw InvalidArgument(std::string("invalid ") + what + ": '" + std::string(s) + "'");
  }
  return v;
}

std::size_t parse_count(std::string_view s, const char* what) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw InvalidArgument(std::string("invalid ") + what + ": '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

AlphaGrid parse_alpha_grid(std::string_view text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
  if (c2 == std::string_view::npos) throw InvalidArgument("alpha grid must look like min:max:points");
  AlphaGrid g;
  g.min = parse_double(text.substr(0, c1), "alpha grid minimum");
  g.max = parse_double(text.substr(c1 + 1, c2 - c1 - 1), "alpha grid maximum");
  g.points = parse_count(text.substr(c2 + 1), "alpha grid point count");
  if (!(g.min > 0.0) || !(g.max >= g.min) || !std::isfinite(g.max)) {
    throw InvalidArgument("alpha grid needs 0 < min <= max");
  }
  if (g.points < 1) throw InvalidArgument("alpha grid needs at least one point");
  return g;
}

std::string format_alpha_grid(const AlphaGrid& g) {
  return format_real(g.min) + ":" + format_real(g.max) + ":" + std::to_string(g.points);
}

std::vector<double> alpha_values(const AlphaGrid& g) {
  if (g.points == 1) return {g.min};
  std::vector<double> v(g.points);
  const double lo = std::log10(g.min);
  const double hi = std::log10(g.max);
  for (std::size_t i = 0; i < g.points; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(g.points - 1);
    v[i] = std::pow(10.0, lo + f * (hi - lo));
  }
  v.front() = g.min;
  v.back() = g.max;
  return v;
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Gmres: return "gmres";
    case Method::Pcg: return "pcg";
    case Method::Stationary: return "stationary";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::Gmres, Method::Pcg, Method::Stationary})
    if (to_string(m) == name) return m;
  throw InvalidArgument("unknown method '" + std::string(name) + "' (gmres, pcg, stationary)");
}

PrecondKind parse_precond(std::string_view name) {
  if (name == "none") return PrecondKind::Identity;
  for (PrecondKind k : {PrecondKind::Product, PrecondKind::ProductInexact, PrecondKind::Symmetrized,
                        PrecondKind::Unshifted, PrecondKind::ShiftOnly, PrecondKind::Identity}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("unknown preconditioner '" + std::string(name) +
                        "' (product, product-inexact, symmetrized, unshifted, shift-only, identity)");
}

std::vector<PrecondKind> parse_precond_list(std::string_view names) {
  std::vector<PrecondKind> out;
  std::size_t start = 0;
  while (start <= names.size()) {
    const auto comma = names.find(',', start);
    const auto item = names.substr(start, comma == std::string_view::npos ? names.size() - start : comma - start);
    out.push_back(parse_precond(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

void validate(const RunConfig& c, bool needs_input) {
  const bool files = !c.matrix_a.empty();
  const bool gen = c.problem.has_value();
  if (needs_input && files == gen) {
    throw InvalidArgument("give exactly one input: --matrix-a/--matrix-u or --problem");
  }
  if (files && c.matrix_u.empty()) throw InvalidArgument("--matrix-a needs --matrix-u");
  if (!(c.gamma > 0.0)) throw InvalidArgument("--gamma must be positive");
  if (c.alpha && !(*c.alpha > 0.0)) throw InvalidArgument("--alpha must be positive");
  if (!(c.tol > 0.0)) throw InvalidArgument("--tol must be positive");
  if (c.restart < 1) throw InvalidArgument("--restart must be at least 1");
  if (!(c.beta > 0.0 && c.beta <= 1.0)) throw InvalidArgument("--beta must lie in (0, 1]");
  if (c.precond.empty()) throw InvalidArgument("--precond is empty");
  if (c.convention != "dropped" && c.convention != "retained") {
    throw InvalidArgument("--convention must be dropped or retained");
  }
}

nlohmann::json to_json(const ProblemSpec& s) {
  nlohmann::json j;
  j["kind"] = std::string(to_string(s.kind));
  j["seed"] = s.seed;
  switch (s.kind) {
    case ProblemKind::OseenMac:
      j["nu"] = s.nu;
      j["wind"] = std::string(to_string(s.wind));
      [[fallthrough]];
    case ProblemKind::StokesMac:
      j["nx"] = s.nx;
      j["ny"] = s.ny;
      break;
    case ProblemKind::RandomPositiveRealLowRank:
      j["skew"] = s.skew;
      [[fallthrough]];
    case ProblemKind::RandomSpdLowRank:
      j["n"] = s.n;
      j["k"] = s.k;
      j["cond"] = s.cond;
      break;
    case ProblemKind::KktSchur:
      j["n"] = s.n;
      j["k"] = s.k;
      break;
    case ProblemKind::SparseDenseLs:
      j["n"] = s.n;
      j["k"] = s.k;
      j["m1"] = s.m1 == 0 ? 2 * s.n : s.m1;
      j["density"] = s.density;
      j["rank_deficient"] = s.rank_deficient;
      break;
  }
  return j;
}

ProblemSpec problem_from_json(const nlohmann::json& j) {
  ProblemSpec s;
  const auto kind = parse_problem_kind(j.at("kind").get<std::string>());
  if (!kind) throw InvalidArgument("unknown problem kind '" + j.at("kind").get<std::string>() + "'");
  s.kind = *kind;
  if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("nx")) s.nx = j["nx"].get<std::size_t>();
  if (j.contains("ny")) s.ny = j["ny"].get<std::size_t>();
  if (j.contains("nu")) s.nu = j["nu"].get<double>();
  if (j.contains("wind")) {
    const auto w = parse_wind(j["wind"].get<std::string>());
    if (!w) throw InvalidArgument("unknown wind '" + j["wind"].get<std::string>() + "'");
    s.wind = *w;
  }
  if (j.contains("n")) s.n = j["n"].get<std::size_t>();
  if (j.contains("k")) s.k = j["k"].get<std::size_t>();
  if (j.contains("cond")) s.cond = j["cond"].get<double>();
  if (j.contains("skew")) s.skew = j["skew"].get<double>();
  if (j.contains("m1")) s.m1 = j["m1"].get<std::size_t>();
  if (j.contains("density")) s.density = j["density"].get<double>();
  if (j.contains("rank_deficient")) s.rank_deficient = j["rank_deficient"].get<bool>();
  return s;
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  if (c.problem) {
    j["problem"] = to_json(*c.problem);
  } else {
    j["matrix-a"] = c.matrix_a;
    j["matrix-u"] = c.matrix_u;
  }
  j["rhs"] = c.rhs;
  j["gamma"] = c.gamma;
  j["alpha"] = c.alpha ? nlohmann::json(*c.alpha) : nlohmann::json(nullptr);
  j["alpha-grid"] = c.alpha_grid ? nlohmann::json(format_alpha_grid(*c.alpha_grid)) : nlohmann::json(nullptr);
  j["method"] = std::string(to_string(c.method));
  std::string names;
  for (PrecondKind k : c.precond) {
    if (!names.empty()) names += ',';
    names += to_string(k);
  }
  j["precond"] = names;
  j["tol"] = c.tol;
  j["maxit"] = c.maxit;
  j["restart"] = c.restart;
  j["beta"] = c.beta;
  j["scale-diag"] = c.scale_diag;
  j["normalize"] = c.normalize;
  j["no-timing"] = c.no_timing;
  j["convention"] = c.convention;
  j["seed"] = c.seed;
  return j;
}

void apply_json(RunConfig& c, const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidArgument("config file must hold a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "matrix-a") c.matrix_a = v.get<std::string>();
    else if (key == "matrix-u") c.matrix_u = v.get<std::string>();
    else if (key == "rhs") c.rhs = v.get<std::string>();
    else if (key == "problem") c.problem = problem_from_json(v);
    else if (key == "gamma") c.gamma = v.get<double>();
    else if (key == "alpha") c.alpha = v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
    else if (key == "alpha-grid") {
      c.alpha_grid = v.is_null() ? std::nullopt : std::optional<AlphaGrid>(parse_alpha_grid(v.get<std::string>()));
    } else if (key == "method") c.method = parse_method(v.get<std::string>());
    else if (key == "precond") c.precond = parse_precond_list(v.get<std::string>());
    else if (key == "tol") c.tol = v.get<double>();
    else if (key == "maxit") c.maxit = v.get<std::size_t>();
    else if (key == "restart") c.restart = v.get<std::size_t>();
    else if (key == "beta") c.beta = v.get<double>();
    else if (key == "scale-diag") c.scale_diag = v.get<bool>();
    else if (key == "normalize") c.normalize = v.get<bool>();
    else if (key == "no-timing") c.no_timing = v.get<bool>();
    else if (key == "convention") c.convention = v.get<std::string>();
    else if (key == "seed") c.seed = v.get<std::uint64_t>();
    else if (key == "out") c.out = v.get<std::string>();
    else if (key == "solution") c.solution = v.get<std::string>();
    else throw InvalidArgument("unknown config key '" + key + "'");
  }
}

}  // namespace lrsplit::cli
