#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "lrsplit/preconditioner.hpp"
#include "lrsplit/problems.hpp"

namespace lrsplit::cli {

struct AlphaGrid {
  double min = 1e-3;
  double max = 10.0;
  std::size_t points = 25;
};

/// "min:max:points", log-spaced inclusive of both ends.
AlphaGrid parse_alpha_grid(std::string_view text);
std::string format_alpha_grid(const AlphaGrid& g);
std::vector<double> alpha_values(const AlphaGrid& g);

enum class Method { Gmres, Pcg, Stationary };

std::string_view to_string(Method m);
Method parse_method(std::string_view name);
PrecondKind parse_precond(std::string_view name);
std::vector<PrecondKind> parse_precond_list(std::string_view names);

struct RunConfig {
  std::string matrix_a;
  std::string matrix_u;
  std::string rhs;
  std::optional<ProblemSpec> problem;
  double gamma = 1.0;
  std::optional<double> alpha;
  std::optional<AlphaGrid> alpha_grid;
  Method method = Method::Gmres;
  std::vector<PrecondKind> precond{PrecondKind::Product};
  double tol = 1e-6;
  std::size_t maxit = 2000;
  std::size_t restart = 20;
  double beta = 1.0;
  bool scale_diag = false;
  bool normalize = false;
  bool no_timing = false;
  std::string convention = "dropped";
  std::uint64_t seed = 1;
  std::string out;
  std::string solution;
};

/// Throws InvalidArgument when the input source is missing or ambiguous.
void validate(const RunConfig& c, bool needs_input = true);

nlohmann::json to_json(const RunConfig& c);
nlohmann::json to_json(const ProblemSpec& s);
ProblemSpec problem_from_json(const nlohmann::json& j);

/// Overwrites the fields present in `j` (keys use the flag spelling).
void apply_json(RunConfig& c, const nlohmann::json& j);

}  // namespace lrsplit::cli
