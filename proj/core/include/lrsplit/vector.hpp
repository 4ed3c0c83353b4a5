#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lrsplit {

using Vector = std::vector<double>;

enum class Trans { No, Yes };

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);
void scale(double a, std::span<double> x);
/// x - y
Vector subtract(std::span<const double> x, std::span<const double> y);
bool all_finite(std::span<const double> x);

}  // namespace lrsplit
