#pragma once

// Test-only oracles and helpers, independent of the library paths they check.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nnsr/matrix.hpp"
#include "nnsr/rng.hpp"

namespace testsup {

using nnsr::Index;
using nnsr::Matrix;

// Coefficients c of det(lambda I - A) = lambda^n + c[0] lambda^{n-1} + ...
// + c[n-1] via the Faddeev-LeVerrier recurrence.
inline std::vector<double> charpoly(const Matrix& a) {
  const Index n = a.rows();
  std::vector<double> c(static_cast<std::size_t>(n));
  Matrix m = a;
  c[0] = -m.trace();
  for (Index k = 2; k <= n; ++k) {
    m = a * (m + c[static_cast<std::size_t>(k - 2)] *
                     Matrix::Identity(n, n));
    c[static_cast<std::size_t>(k - 1)] = -m.trace() / static_cast<double>(k);
  }
  return c;
}

inline double polyval(const std::vector<double>& c, double x) {
  double v = 1.0;
  for (double ck : c) v = v * x + ck;
  return v;
}

// Eigenvalues of a small symmetric PSD matrix by bracketing the sign changes
// of its characteristic polynomial and bisecting. Needs distinct eigenvalues
// (use random instances); throws if it cannot isolate n roots.
inline std::vector<double> charpoly_eigenvalues(const Matrix& sym) {
  const Index n = sym.rows();
  const std::vector<double> c = charpoly(sym);
  double bound = 1.0;
  for (double ck : c) bound = std::max(bound, std::abs(ck));
  bound += 1.0;

  const int grid = 20000 * static_cast<int>(n);
  std::vector<double> roots;
  double lo = -1e-9;
  double flo = polyval(c, lo);
  const double step = (bound - lo) / grid;
  for (int i = 1; i <= grid && static_cast<Index>(roots.size()) < n; ++i) {
    const double hi = lo + step;
    const double fhi = polyval(c, hi);
    if ((flo <= 0 && fhi > 0) || (flo >= 0 && fhi < 0)) {
      double a = lo, b = hi, fa = flo;
      for (int it = 0; it < 200 && (b - a) > 1e-13 * bound; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = polyval(c, mid);
        if ((fa <= 0 && fm <= 0) || (fa >= 0 && fm >= 0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    lo = hi;
    flo = fhi;
  }
  if (static_cast<Index>(roots.size()) != n) {
    throw std::runtime_error("charpoly_eigenvalues: could not isolate " +
                             std::to_string(n) + " roots (got " +
                             std::to_string(roots.size()) + ")");
  }
  return roots;  // ascending by construction
}

inline Matrix random_matrix(Index rows, Index cols, nnsr::Rng& rng) {
  Matrix a(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) a(i, j) = rng.normal();
  return a;
}

inline Matrix random_orthogonal(Index n, nnsr::Rng& rng) {
  const Matrix g = random_matrix(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(n, n);
}

// Product of plane rotations: an exactly orthogonal 3x3 matrix built from
// closed-form sines/cosines (no factorization involved).
inline Matrix rotation3(double a, double b) {
  Matrix r01 = Matrix::Identity(3, 3);
  r01(0, 0) = std::cos(a);
  r01(0, 1) = -std::sin(a);
  r01(1, 0) = std::sin(a);
  r01(1, 1) = std::cos(a);
  Matrix r12 = Matrix::Identity(3, 3);
  r12(1, 1) = std::cos(b);
  r12(1, 2) = -std::sin(b);
  r12(2, 1) = std::sin(b);
  r12(2, 2) = std::cos(b);
  return r01 * r12;
}

inline double central_diff(const std::function<double(double)>& f, double x,
                           double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double second_diff(const std::function<double(double)>& f, double x,
                          double h) {
  return f(x + h) - 2.0 * f(x) + f(x - h);
}

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            (tag + "-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testsup
