#include "nnsr/matrix.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace nnsr {

namespace {

std::string shape_str(Index rows, Index cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

void require_same_shape(const Matrix& a, Index rows, Index cols,
                        const char* op) {
  if (a.rows() != rows || a.cols() != cols) {
    throw ShapeError(std::string(op) + ": shape mismatch, " +
                     shape_str(a.rows(), a.cols()) + " vs " +
                     shape_str(rows, cols));
  }
}

}  // namespace

ObservationMask::ObservationMask(Flags observed)
    : observed_(std::move(observed)) {
  if (observed_.rows() < 1 || observed_.cols() < 1) {
    throw ShapeError("ObservationMask: dimensions must be positive");
  }
  cardinality_ = observed_.count();
}

ObservationMask ObservationMask::full(Index rows, Index cols) {
  return ObservationMask(Flags::Constant(rows, cols, true));
}

ObservationMask ObservationMask::none(Index rows, Index cols) {
  return ObservationMask(Flags::Constant(rows, cols, false));
}

ObservationMask ObservationMask::complement() const {
  return ObservationMask(!observed_);
}

Matrix project_mask(const Matrix& a, const ObservationMask& mask) {
  require_same_shape(a, mask.rows(), mask.cols(), "project_mask");
  return mask.flags().select(a.array(), 0.0).matrix();
}

double fro_norm(const Matrix& a) { return a.norm(); }

double fro_inner(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b.rows(), b.cols(), "fro_inner");
  return a.cwiseProduct(b).sum();
}

bool all_finite(const Matrix& a) { return a.allFinite(); }

void require_finite(const Matrix& a, const char* what) {
  if (!a.allFinite()) {
    throw NumericError(std::string(what) + ": non-finite entries");
  }
}

Matrix read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.peek() == std::char_traits<char>::eof() &&
        !rows.empty()) {
      break;  // trailing newline
    }
    std::vector<double> row;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      std::size_t pos = 0;
      double value = 0;
      try {
        value = std::stod(field, &pos);
      } catch (const std::exception&) {
        throw FormatError("csv: non-numeric field at line " +
                          std::to_string(line_no));
      }
      while (pos < field.size() &&
             (field[pos] == ' ' || field[pos] == '\t')) {
        ++pos;
      }
      if (pos != field.size()) {
        throw FormatError("csv: trailing garbage in field at line " +
                          std::to_string(line_no));
      }
      if (!std::isfinite(value)) {
        throw FormatError("csv: non-finite value at line " +
                          std::to_string(line_no));
      }
      row.push_back(value);
    }
    if (row.empty()) {
      throw FormatError("csv: empty row at line " + std::to_string(line_no));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw FormatError("csv: ragged row at line " + std::to_string(line_no) +
                        " (" + std::to_string(row.size()) + " fields, expected " +
                        std::to_string(rows.front().size()) + ")");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw FormatError("csv: empty input");
  Matrix a(static_cast<Index>(rows.size()),
           static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      a(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return a;
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("csv: cannot open " + path.string());
  return read_matrix_csv(in);
}

void write_matrix_csv(const Matrix& a, std::ostream& out) {
  char buf[64];
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", a(i, j));
      if (j) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

void write_matrix_csv(const Matrix& a, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("csv: cannot open " + path.string() +
                              " for writing");
  write_matrix_csv(a, out);
}

}  // namespace nnsr
