#include <doctest.h>

#include <cmath>
#include <sstream>

#include "nnsr/matrix.hpp"
#include "nnsr/rng.hpp"
#include "nnsr/svd.hpp"
#include "test_support.hpp"

using namespace nnsr;
using testsup::random_matrix;

TEST_CASE("mask construction and cardinality") {
  ObservationMask::Flags flags(2, 3);
  flags << true, false, true, false, false, true;
  ObservationMask mask{flags};
  CHECK(mask.cardinality() == 3);
  CHECK(mask.complement().cardinality() == 2 * 3 - 3);
  CHECK(ObservationMask::full(4, 5).cardinality() == 20);
  CHECK(ObservationMask::none(4, 5).cardinality() == 0);
}

TEST_CASE("project_mask basics") {
  Rng rng(11);
  const Matrix a = random_matrix(5, 4, rng);

  CHECK(project_mask(a, ObservationMask::full(5, 4)) == a);
  CHECK(project_mask(a, ObservationMask::none(5, 4)).isZero(0.0));

  ObservationMask::Flags flags(5, 4);
  for (Index i = 0; i < 5; ++i)
    for (Index j = 0; j < 4; ++j) flags(i, j) = rng.coin();
  ObservationMask mask{flags};

  const Matrix p = project_mask(a, mask);
  CHECK(project_mask(p, mask) == p);  // idempotent
  // complement decomposition is exact
  CHECK((p + project_mask(a, mask.complement())) == a);
  CHECK(fro_norm(p) <= fro_norm(a));

  CHECK_THROWS_AS(project_mask(a, ObservationMask::full(4, 5)), ShapeError);
}

TEST_CASE("frobenius norm and inner product") {
  CHECK(fro_norm(Matrix::Zero(3, 3)) == 0.0);
  CHECK(fro_norm(Matrix::Identity(2, 2)) == doctest::Approx(std::sqrt(2.0)));
  Matrix row(1, 2);
  row << 3, 4;
  CHECK(fro_norm(row) == doctest::Approx(5.0));

  Rng rng(7);
  const Matrix a = random_matrix(3, 3, rng);
  CHECK(fro_inner(a, Matrix::Zero(3, 3)) == 0.0);
  CHECK(fro_inner(a, a) == doctest::Approx(fro_norm(a) * fro_norm(a)));
  Matrix b(2, 2), eye(2, 2);
  b << 1, 2, 3, 4;
  eye << 1, 0, 0, 1;
  CHECK(fro_inner(b, eye) == doctest::Approx(5.0));
  CHECK_THROWS_AS(fro_inner(b, Matrix::Zero(3, 3)), ShapeError);
}

TEST_CASE("csv round trip and rejection") {
  Rng rng(3);
  const Matrix a = random_matrix(6, 3, rng);
  std::ostringstream out;
  write_matrix_csv(a, out);
  std::istringstream in(out.str());
  const Matrix back = read_matrix_csv(in);
  CHECK(back == a);  // %.17g round-trips doubles exactly

  auto reject = [](const std::string& text) {
    std::istringstream s(text);
    CHECK_THROWS_AS(read_matrix_csv(s), FormatError);
  };
  reject("");
  reject("1,2\n3\n");       // ragged
  reject("1,2\n3,oops\n");  // non-numeric
  reject("1,2\n3,nan\n");   // non-finite
  reject("1,2\n\n3,4\n");   // empty row in the middle

  std::istringstream single("42\n");
  CHECK(read_matrix_csv(single)(0, 0) == 42.0);
}

TEST_CASE("thin_svd contract") {
  CHECK(thin_svd(Matrix::Zero(3, 2)).s.isZero(0.0));

  SUBCASE("signs absorbed into factors") {
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 3;
    d(1, 1) = -2;
    const SvdFactors f = thin_svd(d);
    CHECK(f.s(0) == doctest::Approx(3.0));
    CHECK(f.s(1) == doctest::Approx(2.0));
    CHECK(fro_norm(f.reconstruct() - d) < 1e-12);
  }

  SUBCASE("reconstruction and orthonormality") {
    Rng rng(21);
    const Matrix a = random_matrix(20, 8, rng);
    const SvdFactors f = thin_svd(a);
    CHECK(f.s.size() == 8);
    for (Index i = 0; i + 1 < f.s.size(); ++i) CHECK(f.s(i) >= f.s(i + 1));
    CHECK(f.s.minCoeff() >= 0.0);
    CHECK(fro_norm(f.reconstruct() - a) <= 1e-10 * fro_norm(a));
    const Matrix utu = f.u.transpose() * f.u - Matrix::Identity(8, 8);
    const Matrix vtv = f.v.transpose() * f.v - Matrix::Identity(8, 8);
    CHECK(utu.cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(vtv.cwiseAbs().maxCoeff() <= 1e-10);
  }

  SUBCASE("singular values match characteristic-polynomial oracle") {
    Rng rng(5);
    for (Index n = 2; n <= 5; ++n) {
      const Matrix a = random_matrix(n + 1, n, rng);
      const std::vector<double> eig =
          testsup::charpoly_eigenvalues(a.transpose() * a);
      const SvdFactors f = thin_svd(a);
      REQUIRE(static_cast<Index>(eig.size()) == n);
      for (Index i = 0; i < n; ++i) {
        // oracle is ascending, s is descending
        const double expected =
            std::sqrt(std::max(0.0, eig[static_cast<std::size_t>(n - 1 - i)]));
        CHECK(std::abs(f.s(i) - expected) <= 1e-8);
      }
    }
  }
}

TEST_CASE("spectral norm") {
  CHECK(spectral_norm(Matrix::Zero(4, 2)) == 0.0);
  Matrix d = Matrix::Zero(2, 3);
  d(0, 0) = 2;
  d(1, 1) = 7;
  CHECK(spectral_norm(d) == doctest::Approx(7.0));
}

TEST_CASE("finiteness guards") {
  Matrix a = Matrix::Zero(2, 2);
  CHECK(all_finite(a));
  a(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(all_finite(a));
  CHECK_THROWS_AS(require_finite(a, "test"), NumericError);
}
