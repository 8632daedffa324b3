#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <iosfwd>

#include "nnsr/error.hpp"

namespace nnsr {

/// Dense real matrix, the universal carrier for X, M, S and Lambda.
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Set of observed entries of an m-by-n matrix as a boolean raster.
///
/// The cardinality (number of observed entries) is computed once at
/// construction and kept consistent thereafter; the flags are immutable.
class ObservationMask {
 public:
  using Flags = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

  explicit ObservationMask(Flags observed);

  /// Every entry observed.
  static ObservationMask full(Index rows, Index cols);
  /// No entry observed.
  static ObservationMask none(Index rows, Index cols);

  Index rows() const { return observed_.rows(); }
  Index cols() const { return observed_.cols(); }
  bool observed(Index i, Index j) const { return observed_(i, j); }
  const Flags& flags() const { return observed_; }

  /// Number of observed entries, |Omega|.
  Index cardinality() const { return cardinality_; }

  /// Mask of the complement set Omega^c.
  ObservationMask complement() const;

 private:
  Flags observed_;
  Index cardinality_;
};

/// Keeps entries on the observed set, zeroes the complement.
Matrix project_mask(const Matrix& a, const ObservationMask& mask);

/// Frobenius norm sqrt(sum a_ij^2).
double fro_norm(const Matrix& a);

/// Frobenius inner product trace(a^T b). Throws ShapeError on mismatch.
double fro_inner(const Matrix& a, const Matrix& b);

/// True when every entry is finite.
bool all_finite(const Matrix& a);

/// Throws NumericError naming `what` unless every entry is finite.
void require_finite(const Matrix& a, const char* what);

/// CSV text I/O: one row per line, '.' decimal separator, no header.
/// The reader rejects ragged rows, empty input and non-numeric fields.
Matrix read_matrix_csv(std::istream& in);
Matrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(const Matrix& a, std::ostream& out);
void write_matrix_csv(const Matrix& a, const std::filesystem::path& path);

}  // namespace nnsr
