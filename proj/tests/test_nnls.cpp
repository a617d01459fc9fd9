#include <doctest.h>

#include "oracles.hpp"
#include "sse/nnls.hpp"
#include "sse/rng.hpp"

using namespace sse;

namespace {

SpectralLibrary library_from(const Eigen::MatrixXd& cols) {
  SpectralLibrary lib(cols.rows());
  for (Eigen::Index i = 0; i < cols.cols(); ++i) lib.append(cols.col(i), Provenance::Remote);
  return lib;
}

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, RandomStream& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.next_double();
  }
  return m;
}

// Dual feasibility of the returned abundances at the given tolerance.
void check_kkt(const Eigen::MatrixXd& y, const Eigen::VectorXd& x, const AbundanceVector& a,
               double tol) {
  const Eigen::VectorXd grad = y.transpose() * (y * a - x);
  const double scale = std::max(1.0, (y.transpose() * x).cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) > 0.0) {
      CHECK(std::abs(grad(i)) <= tol * scale * 10.0);
    } else {
      CHECK(grad(i) >= -tol * scale * 10.0);
    }
  }
}

}  // namespace

TEST_CASE("pixel equal to a library column") {
  RandomStream rng(1);
  Eigen::MatrixXd y = random_matrix(4, 1, rng);
  auto lib = library_from(y);
  const auto result = nnls_solve(lib, y.col(0));
  REQUIRE(result.abundances.size() == 1);
  CHECK(result.abundances(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(result.residual == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("scaled pixel without sum constraint") {
  RandomStream rng(2);
  Eigen::MatrixXd y = random_matrix(5, 1, rng);
  auto lib = library_from(y);
  const Spectrum pixel = 0.5 * y.col(0);
  const auto result = nnls_solve(lib, pixel);
  CHECK(result.abundances(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(result.residual == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("matches the refinement grid oracle on random instances") {
  RandomStream rng(3);
  for (int inst = 0; inst < 25; ++inst) {
    const int d = 2 + rng.next_int(3);  // 2..4
    const int k = 1 + rng.next_int(3);  // 1..3
    Eigen::MatrixXd y = random_matrix(d, k, rng);
    Eigen::VectorXd x(d);
    if (inst % 2 == 0) {
      // Mixture inside the cone plus noise.
      Eigen::VectorXd a(k);
      for (int i = 0; i < k; ++i) a(i) = rng.next_double();
      x = y * a;
      for (int i = 0; i < d; ++i) x(i) += rng.next_gaussian(0.0, 0.02);
    } else {
      for (int i = 0; i < d; ++i) x(i) = rng.next_double();
    }
    const auto result = nnls_solve(library_from(y), x);
    const double oracle = oracles::grid_nnls_residual(y, x, 0.0, 2.0, 1e-3);
    CHECK(result.residual <= oracle + 1e-9);
    CHECK(std::abs(result.residual - oracle) <= 1e-3);
    check_kkt(y, x, result.abundances, 1e-8);
  }
}

TEST_CASE("refinement oracle equals the one-shot exhaustive grid for small K") {
  RandomStream rng(4);
  for (int inst = 0; inst < 5; ++inst) {
    const int d = 2 + rng.next_int(3);
    const int k = 1 + rng.next_int(2);  // 1..2 so the one-shot grid stays feasible
    Eigen::MatrixXd y = random_matrix(d, k, rng);
    Eigen::VectorXd x(d);
    for (int i = 0; i < d; ++i) x(i) = rng.next_double();
    const double refined = oracles::grid_nnls_residual(y, x, 0.0, 2.0, 1e-3);
    const double one_shot = oracles::exhaustive_grid_nnls(y, x, 0.0, 2.0, 1e-3);
    CHECK(refined == doctest::Approx(one_shot).epsilon(1e-9));
  }
}

TEST_CASE("frozen reference instances") {
  // Expected values computed with an independent NNLS implementation before
  // this solver was written.
  Eigen::MatrixXd y1(3, 3);
  y1 << 0.9, 0.1, 0.4, 0.2, 0.8, 0.5, 0.1, 0.3, 0.7;
  Eigen::VectorXd x1(3);
  x1 << 0.55, 0.45, 0.30;
  auto r1 = nnls_solve(library_from(y1), x1);
  CHECK(r1.abundances(0) == doctest::Approx(0.474431818181818).epsilon(1e-9));
  CHECK(r1.abundances(1) == doctest::Approx(0.2982954545454546).epsilon(1e-9));
  CHECK(r1.abundances(2) == doctest::Approx(0.23295454545454555).epsilon(1e-9));
  CHECK(r1.residual == doctest::Approx(0.0).epsilon(1e-10));

  Eigen::MatrixXd y2(3, 2);
  y2 << 1.0, 0.0, 0.0, 1.0, 0.5, 0.5;
  Eigen::VectorXd x2(3);
  x2 << 1.0, -0.3, 0.2;
  auto r2 = nnls_solve(library_from(y2), x2);
  CHECK(r2.abundances(0) == doctest::Approx(0.88).epsilon(1e-9));
  CHECK(r2.abundances(1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r2.residual == doctest::Approx(0.40249223594996214).epsilon(1e-9));

  Eigen::MatrixXd y3(4, 3);
  y3 << 0.2, 0.7, 0.3, 0.9, 0.1, 0.4, 0.4, 0.5, 0.8, 0.3, 0.2, 0.6;
  Eigen::VectorXd x3(4);
  x3 << 0.8, 0.3, 0.9, 0.5;
  auto r3 = nnls_solve(library_from(y3), x3);
  CHECK(r3.abundances(0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r3.abundances(1) == doctest::Approx(0.9183983781044097).epsilon(1e-9));
  CHECK(r3.abundances(2) == doctest::Approx(0.5382665990876836).epsilon(1e-9));
  CHECK(r3.residual == doctest::Approx(0.01476286625183582).epsilon(1e-9));
}

TEST_CASE("sum-to-one augmentation pulls abundances onto the simplex") {
  RandomStream rng(5);
  Eigen::MatrixXd y = random_matrix(6, 3, rng);
  Eigen::VectorXd a_true(3);
  a_true << 0.2, 0.5, 0.3;
  const Eigen::VectorXd x = y * a_true;
  SolverOptions opts;
  opts.sum_to_one = true;
  const auto r = nnls_solve(library_from(y), x, opts);
  CHECK(r.abundances.sum() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.residual < 1e-6);
}

TEST_CASE("duplicate columns are tolerated") {
  RandomStream rng(6);
  Eigen::MatrixXd y(4, 2);
  y.col(0) = random_matrix(4, 1, rng);
  y.col(1) = y.col(0);
  const Spectrum pixel = 0.7 * y.col(0);
  const auto r = nnls_solve(library_from(y), pixel);
  CHECK(r.residual == doctest::Approx(0.0).epsilon(1e-10));
  // Lowest-index tie break: all mass on the first copy.
  CHECK(r.abundances(0) == doctest::Approx(0.7).epsilon(1e-9));
  CHECK(r.abundances(1) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("error paths") {
  SpectralLibrary empty;
  Spectrum x(3);
  x.setConstant(0.5);
  CHECK_THROWS_AS(nnls_solve(empty, x), DimensionMismatch);

  RandomStream rng(7);
  Eigen::MatrixXd y = random_matrix(4, 2, rng);
  auto lib = library_from(y);
  CHECK_THROWS_AS(nnls_solve(lib, x), DimensionMismatch);  // 3 bands vs 4

  Spectrum bad(4);
  bad.setConstant(0.5);
  bad(2) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(nnls_solve(lib, bad), NonFinite);

  SolverOptions opts;
  opts.tolerance = 0.0;
  Spectrum ok(4);
  ok.setConstant(0.5);
  CHECK_THROWS_AS(nnls_solve(lib, ok, opts), ConfigInvalid);
}

TEST_CASE("reconstruct basics") {
  RandomStream rng(8);
  Eigen::MatrixXd y = random_matrix(5, 3, rng);
  auto lib = library_from(y);

  AbundanceVector unit(3);
  unit << 1.0, 0.0, 0.0;
  CHECK((reconstruct(lib, unit) - y.col(0)).norm() == doctest::Approx(0.0));

  AbundanceVector zero = AbundanceVector::Zero(3);
  CHECK(reconstruct(lib, zero).norm() == doctest::Approx(0.0));

  AbundanceVector mix(3);
  mix << 0.3, 0.7, 0.0;
  const Spectrum got = reconstruct(lib, mix);
  // Independent summation loop.
  Spectrum expect = Spectrum::Zero(5);
  for (int b = 0; b < 5; ++b) expect(b) = 0.3 * y(b, 0) + 0.7 * y(b, 1);
  CHECK((got - expect).norm() == doctest::Approx(0.0).epsilon(1e-15));

  AbundanceVector wrong(2);
  wrong << 1.0, 0.0;
  CHECK_THROWS_AS(reconstruct(lib, wrong), DimensionMismatch);
}

TEST_CASE("reported residual matches the reconstruction distance") {
  RandomStream rng(9);
  for (int inst = 0; inst < 20; ++inst) {
    const int d = 3 + rng.next_int(4);
    const int k = 1 + rng.next_int(4);
    Eigen::MatrixXd y = random_matrix(d, k, rng);
    Eigen::VectorXd x(d);
    for (int i = 0; i < d; ++i) x(i) = rng.next_double();
    auto lib = library_from(y);
    const auto r = nnls_solve(lib, x);
    const double dist = (reconstruct(lib, r.abundances) - x).norm();
    CHECK(std::abs(dist - r.residual) <= 1e-9);
    for (Eigen::Index i = 0; i < r.abundances.size(); ++i) CHECK(r.abundances(i) >= 0.0);
  }
}
