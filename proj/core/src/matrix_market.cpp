#include "lrsplit/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "lrsplit/errors.hpp"

namespace lrsplit {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool blank_or_comment(const std::string& line) {
  for (char c : line) {
    if (c == '%') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

MatrixMarketData mm_read(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError("empty input", 1);
  ++lineno;

  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket") throw ParseError("missing %%MatrixMarket banner", lineno);
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix") throw ParseError("unsupported object '" + object + "'", lineno);
  if (format != "coordinate" && format != "array") {
    throw ParseError("unsupported format '" + format + "'", lineno);
  }
  if (field != "real") throw ParseError("unsupported field '" + field + "' (need real)", lineno);
  const bool symmetric = symmetry == "symmetric";
  if (!symmetric && symmetry != "general") {
    throw ParseError("unsupported symmetry '" + symmetry + "'", lineno);
  }
  if (format == "array" && symmetric) {
    throw ParseError("symmetric array files are not supported", lineno);
  }

  do {
    if (!std::getline(in, line)) throw ParseError("missing size line", lineno + 1);
    ++lineno;
  } while (blank_or_comment(line));

  std::istringstream sizes(line);
  long long nr = -1, nc = -1, nz = -1;
  sizes >> nr >> nc;
  if (format == "coordinate") sizes >> nz;
  if (!sizes || nr < 0 || nc < 0 || (format == "coordinate" && nz < 0)) {
    throw ParseError("malformed size line", lineno);
  }
  const auto rows = static_cast<std::size_t>(nr);
  const auto cols = static_cast<std::size_t>(nc);

  auto next_data_line = [&](const char* what) {
    do {
      if (!std::getline(in, line)) {
        throw ParseError(std::string("unexpected end of file reading ") + what, lineno + 1);
      }
      ++lineno;
    } while (blank_or_comment(line));
  };

  if (format == "array") {
    std::vector<double> vals(rows * cols);
    for (std::size_t p = 0; p < vals.size(); ++p) {
      next_data_line("array value");
      std::istringstream ls(line);
      if (!(ls >> vals[p])) throw ParseError("malformed real value", lineno);
    }
    return DenseMatrix(rows, cols, std::move(vals));
  }

  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(nz) * (symmetric ? 2 : 1));
  for (long long e = 0; e < nz; ++e) {
    next_data_line("coordinate entry");
    std::istringstream ls(line);
    long long i = 0, j = 0;
    double v = 0.0;
    if (!(ls >> i >> j >> v)) throw ParseError("malformed coordinate entry", lineno);
    if (i < 1 || j < 1 || static_cast<std::size_t>(i) > rows ||
        static_cast<std::size_t>(j) > cols) {
      throw ParseError("index out of range", lineno);
    }
    const auto r = static_cast<std::size_t>(i - 1);
    const auto c = static_cast<std::size_t>(j - 1);
    entries.push_back({r, c, v});
    if (symmetric && r != c) entries.push_back({c, r, v});
  }
  return CsrMatrix::from_triplets(rows, cols, std::move(entries));
}

MatrixMarketData mm_read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'", 0);
  return mm_read(in);
}

CsrMatrix mm_read_sparse(const std::filesystem::path& path) {
  MatrixMarketData d = mm_read(path);
  if (auto* s = std::get_if<CsrMatrix>(&d)) return std::move(*s);
  return CsrMatrix::from_dense(std::get<DenseMatrix>(d));
}

Vector mm_read_vector(const std::filesystem::path& path) {
  MatrixMarketData d = mm_read(path);
  const DenseMatrix m =
      std::holds_alternative<DenseMatrix>(d) ? std::get<DenseMatrix>(d)
                                             : std::get<CsrMatrix>(d).to_dense();
  if (m.cols() != 1 && m.rows() != 1) {
    throw ParseError("'" + path.string() + "' is not a vector", 0);
  }
  auto v = m.values();
  return Vector(v.begin(), v.end());
}

void mm_write(const CsrMatrix& m, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << m.nnz() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto rc = m.row_cols(i);
    const auto rv = m.row_values(i);
    for (std::size_t p = 0; p < rc.size(); ++p) {
      out << (i + 1) << ' ' << (rc[p] + 1) << ' ' << format_real(rv[p]) << '\n';
    }
  }
}

void mm_write(const CsrMatrix& m, const std::filesystem::path& path) {
  auto out = open_out(path);
  mm_write(m, out);
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

void mm_write(const DenseMatrix& m, std::ostream& out) {
  out << "%%MatrixMarket matrix array real general\n";
  out << m.rows() << ' ' << m.cols() << '\n';
  for (double v : m.values()) out << format_real(v) << '\n';
}

void mm_write(const DenseMatrix& m, const std::filesystem::path& path) {
  auto out = open_out(path);
  mm_write(m, out);
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

void mm_write_vector(std::span<const double> v, const std::filesystem::path& path) {
  mm_write(DenseMatrix(v.size(), 1, Vector(v.begin(), v.end())), path);
}

}  // namespace lrsplit
