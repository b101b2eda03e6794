#pragma once

#include <filesystem>
#include <iosfwd>

#include "lrcare/types.hpp"

namespace lrcare {

/// Contents of a Matrix Market file. Symmetric, skew-symmetric and hermitian
/// storage is expanded to general form on read.
struct MarketMatrix {
  SparseXc values;
  bool is_complex = false;  // field was "complex"
  bool is_dense = false;    // "array" format

  Index rows() const { return values.rows(); }
  Index cols() const { return values.cols(); }
  MatrixXc dense() const { return MatrixXc(values); }
};

MarketMatrix read_matrix_market(std::istream& in, const std::string& source = "<stream>");
MarketMatrix read_matrix_market(const std::filesystem::path& path);

// Writers emit 17 significant digits so that a round trip is exact.
void write_matrix_market(std::ostream& out, const SparseXc& m, bool as_complex);
void write_matrix_market(std::ostream& out, const SparseXd& m);
void write_matrix_market_dense(std::ostream& out, const MatrixXc& m, bool as_complex);
void write_matrix_market_dense(std::ostream& out, const MatrixXd& m);

template <typename Scalar>
void write_matrix_market_file(const std::filesystem::path& path, const Matrix<Scalar>& m);
template <typename Scalar>
void write_matrix_market_file(const std::filesystem::path& path, const SparseMatrix<Scalar>& m);
template <>
void write_matrix_market_file<cplx>(const std::filesystem::path& path, const MatrixXc& m);

}  // namespace lrcare
