#include "lrcare/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "lrcare/log.hpp"

namespace lrcare {

namespace {

enum class Field { real, complex, integer, pattern };
enum class Symmetry { general, symmetric, skew, hermitian };

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void fail(const std::string& source, long line, const std::string& what) {
  throw InputError(source + ":" + std::to_string(line) + ": " + what);
}

// Reads the next non-comment, non-blank line.
bool next_data_line(std::istream& in, std::string& line, long& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '%') continue;
    return true;
  }
  return false;
}

cplx read_value(std::istringstream& ls, Field field, const std::string& source, long lineno) {
  double re = 0.0, im = 0.0;
  switch (field) {
    case Field::pattern:
      return {1.0, 0.0};
    case Field::complex:
      if (!(ls >> re >> im)) fail(source, lineno, "expected real and imaginary part");
      return {re, im};
    case Field::real:
    case Field::integer:
      if (!(ls >> re)) fail(source, lineno, "expected a value");
      return {re, 0.0};
  }
  return {};
}

}  // namespace

MarketMatrix read_matrix_market(std::istream& in, const std::string& source) {
  std::string header;
  long lineno = 0;
  if (!std::getline(in, header)) fail(source, 1, "empty file");
  ++lineno;
  std::istringstream hs(header);
  std::string banner, object, format, field_s, sym_s;
  hs >> banner >> object >> format >> field_s >> sym_s;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix")
    fail(source, lineno, "missing '%%MatrixMarket matrix' banner");
  format = lower(format);
  if (format != "coordinate" && format != "array")
    fail(source, lineno, "unknown format '" + format + "'");

  Field field;
  field_s = lower(field_s);
  if (field_s == "real") field = Field::real;
  else if (field_s == "complex") field = Field::complex;
  else if (field_s == "integer") field = Field::integer;
  else if (field_s == "pattern") field = Field::pattern;
  else fail(source, lineno, "unknown field '" + field_s + "'");

  Symmetry sym;
  sym_s = lower(sym_s);
  if (sym_s == "general") sym = Symmetry::general;
  else if (sym_s == "symmetric") sym = Symmetry::symmetric;
  else if (sym_s == "skew-symmetric") sym = Symmetry::skew;
  else if (sym_s == "hermitian") sym = Symmetry::hermitian;
  else fail(source, lineno, "unknown symmetry '" + sym_s + "'");

  const bool dense = format == "array";
  if (dense && field == Field::pattern) fail(source, lineno, "array format cannot be pattern");
  if (sym == Symmetry::hermitian && field != Field::complex)
    fail(source, lineno, "hermitian symmetry requires complex field");

  std::string line;
  if (!next_data_line(in, line, lineno)) fail(source, lineno, "missing size line");
  std::istringstream ss(line);
  long rows = -1, cols = -1, nnz = -1;
  if (dense) {
    if (!(ss >> rows >> cols)) fail(source, lineno, "malformed size line");
  } else if (!(ss >> rows >> cols >> nnz)) {
    fail(source, lineno, "malformed size line");
  }
  if (rows < 0 || cols < 0 || (!dense && nnz < 0)) fail(source, lineno, "negative dimension");
  if (sym != Symmetry::general && rows != cols)
    fail(source, lineno, "symmetric storage requires a square matrix");

  // (col, row) ordering keeps the assembly column major and deterministic.
  std::map<std::pair<long, long>, cplx> entries;
  long duplicates = 0;
  auto add = [&](long i, long j, cplx v) {
    auto [it, inserted] = entries.try_emplace({j, i}, v);
    if (!inserted) {
      it->second += v;
      ++duplicates;
    }
  };
  auto add_with_symmetry = [&](long i, long j, cplx v) {
    add(i, j, v);
    if (i == j) return;
    switch (sym) {
      case Symmetry::general: break;
      case Symmetry::symmetric: add(j, i, v); break;
      case Symmetry::skew: add(j, i, -v); break;
      case Symmetry::hermitian: add(j, i, std::conj(v)); break;
    }
  };

  if (dense) {
    for (long j = 0; j < cols; ++j) {
      const long first = sym == Symmetry::general ? 0 : (sym == Symmetry::skew ? j + 1 : j);
      for (long i = first; i < rows; ++i) {
        if (!next_data_line(in, line, lineno)) fail(source, lineno, "too few array entries");
        std::istringstream ls(line);
        cplx v = read_value(ls, field, source, lineno);
        if (v != cplx(0.0)) add_with_symmetry(i, j, v);
      }
    }
  } else {
    for (long k = 0; k < nnz; ++k) {
      if (!next_data_line(in, line, lineno)) fail(source, lineno, "too few coordinate entries");
      std::istringstream ls(line);
      long i = 0, j = 0;
      if (!(ls >> i >> j)) fail(source, lineno, "malformed entry");
      if (i < 1 || i > rows || j < 1 || j > cols)
        fail(source, lineno, "index (" + std::to_string(i) + "," + std::to_string(j) +
                                 ") out of range");
      if (sym == Symmetry::skew && i == j) fail(source, lineno, "diagonal entry in skew matrix");
      add_with_symmetry(i - 1, j - 1, read_value(ls, field, source, lineno));
    }
  }
  if (next_data_line(in, line, lineno)) fail(source, lineno, "trailing data after entries");
  if (duplicates > 0)
    warn(source + ": summed " + std::to_string(duplicates) + " duplicate entries");

  MarketMatrix out;
  out.is_complex = field == Field::complex;
  out.is_dense = dense;
  out.values.resize(rows, cols);
  std::vector<Eigen::Triplet<cplx>> triplets;
  triplets.reserve(entries.size());
  for (const auto& [pos, v] : entries) triplets.emplace_back(pos.second, pos.first, v);
  out.values.setFromTriplets(triplets.begin(), triplets.end());
  out.values.makeCompressed();
  return out;
}

MarketMatrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open matrix file '" + path.string() + "'");
  return read_matrix_market(in, path.string());
}

namespace {

void put(std::ostream& out, cplx v, bool as_complex) {
  out << v.real();
  if (as_complex) out << ' ' << v.imag();
}

}  // namespace

void write_matrix_market(std::ostream& out, const SparseXc& m, bool as_complex) {
  out << "%%MatrixMarket matrix coordinate " << (as_complex ? "complex" : "real") << " general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  out << std::setprecision(17);
  for (Index j = 0; j < m.outerSize(); ++j) {
    for (SparseXc::InnerIterator it(m, j); it; ++it) {
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ';
      put(out, it.value(), as_complex);
      out << '\n';
    }
  }
}

void write_matrix_market(std::ostream& out, const SparseXd& m) {
  write_matrix_market(out, SparseXc(m.cast<cplx>()), false);
}

void write_matrix_market_dense(std::ostream& out, const MatrixXc& m, bool as_complex) {
  out << "%%MatrixMarket matrix array " << (as_complex ? "complex" : "real") << " general\n";
  out << m.rows() << ' ' << m.cols() << '\n';
  out << std::setprecision(17);
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      put(out, m(i, j), as_complex);
      out << '\n';
    }
  }
}

void write_matrix_market_dense(std::ostream& out, const MatrixXd& m) {
  write_matrix_market_dense(out, MatrixXc(m.cast<cplx>()), false);
}

template <typename Scalar>
void write_matrix_market_file(const std::filesystem::path& path, const Matrix<Scalar>& m) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  write_matrix_market_dense(out, m);
}

template <typename Scalar>
void write_matrix_market_file(const std::filesystem::path& path, const SparseMatrix<Scalar>& m) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  if constexpr (is_complex_v<Scalar>) {
    write_matrix_market(out, m, true);
  } else {
    write_matrix_market(out, m);
  }
}

template <>
void write_matrix_market_file<cplx>(const std::filesystem::path& path, const MatrixXc& m) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  write_matrix_market_dense(out, m, true);
}

template void write_matrix_market_file<double>(const std::filesystem::path&, const MatrixXd&);
template void write_matrix_market_file<double>(const std::filesystem::path&, const SparseXd&);
template void write_matrix_market_file<cplx>(const std::filesystem::path&, const SparseXc&);

}  // namespace lrcare
