#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>

#include "lrsplit/dense.hpp"
#include "lrsplit/sparse.hpp"

namespace lrsplit {

using MatrixMarketData = std::variant<CsrMatrix, DenseMatrix>;

/// Reads `matrix coordinate real {general|symmetric}` or
/// `matrix array real general`. Symmetric files are expanded to full storage
/// and repeated coordinates are summed. Anything else is a ParseError.
MatrixMarketData mm_read(const std::filesystem::path& path);
MatrixMarketData mm_read(std::istream& in);

CsrMatrix mm_read_sparse(const std::filesystem::path& path);
/// Reads an array file with a single column (or a 1-by-n coordinate/array).
Vector mm_read_vector(const std::filesystem::path& path);

/// Coordinate format, 1-based indices, 17 significant digits.
void mm_write(const CsrMatrix& m, const std::filesystem::path& path);
void mm_write(const CsrMatrix& m, std::ostream& out);
/// Array format (column-major), 17 significant digits.
void mm_write(const DenseMatrix& m, const std::filesystem::path& path);
void mm_write(const DenseMatrix& m, std::ostream& out);
void mm_write_vector(std::span<const double> v, const std::filesystem::path& path);

/// Shortest-round-trip-safe rendering used by every text output: `%.17g`.
std::string format_real(double v);

}  // namespace lrsplit
