#include <doctest.h>

#include "oracles.hpp"
#include "sse/rng.hpp"
#include "sse/scene_error.hpp"

using namespace sse;

namespace {

OrbitalImage image_from(const Eigen::MatrixXd& pixels, int width, int height) {
  OrbitalImage img;
  img.width = width;
  img.height = height;
  img.data = pixels;
  return img;
}

}  // namespace

TEST_CASE("residual never grows when the library grows") {
  RandomStream rng(11);
  for (int inst = 0; inst < 100; ++inst) {
    const int d = 3 + rng.next_int(4);
    const int k = 1 + rng.next_int(3);
    const int extra = 1 + rng.next_int(3);
    Eigen::MatrixXd y(d, k + extra);
    for (Eigen::Index j = 0; j < y.cols(); ++j) {
      for (int i = 0; i < d; ++i) y(i, j) = rng.next_double();
    }
    Eigen::VectorXd x(d);
    for (int i = 0; i < d; ++i) x(i) = rng.next_double();

    const double small = nnls_solve(y.leftCols(k), x).residual;
    const double big = nnls_solve(y, x).residual;
    CHECK(big <= small + 1e-9);
  }
}

TEST_CASE("exact cover gives zero scene error") {
  RandomStream rng(12);
  Eigen::MatrixXd pixels(4, 6);
  for (Eigen::Index j = 0; j < pixels.cols(); ++j) {
    for (int i = 0; i < 4; ++i) pixels(i, j) = rng.next_double();
  }
  SpectralLibrary lib(4);
  for (Eigen::Index j = 0; j < pixels.cols(); ++j) lib.append(pixels.col(j), Provenance::InSitu);
  const auto img = image_from(pixels, 3, 2);
  CHECK(scene_reconstruction_error(lib, img) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("single pixel, scaled library column") {
  RandomStream rng(13);
  Eigen::MatrixXd pixel(5, 1);
  for (int i = 0; i < 5; ++i) pixel(i, 0) = rng.next_double();
  const auto img = image_from(pixel, 1, 1);

  SpectralLibrary exact(5);
  exact.append(pixel.col(0), Provenance::InSitu);
  CHECK(scene_reconstruction_error(exact, img) == doctest::Approx(0.0).epsilon(1e-12));

  SpectralLibrary doubled(5);
  doubled.append(2.0 * pixel.col(0), Provenance::InSitu);
  CHECK(scene_reconstruction_error(doubled, img) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("four-pixel image equals the sum of per-pixel grid oracles") {
  RandomStream rng(14);
  Eigen::MatrixXd endmembers(3, 2);
  for (Eigen::Index j = 0; j < 2; ++j) {
    for (int i = 0; i < 3; ++i) endmembers(i, j) = rng.next_double();
  }
  Eigen::MatrixXd pixels(3, 4);
  for (int j = 0; j < 4; ++j) {
    const double w = rng.next_double();
    pixels.col(j) = w * endmembers.col(0) + (1.2 - w) * endmembers.col(1);
    for (int i = 0; i < 3; ++i) pixels(i, j) += rng.next_gaussian(0.0, 0.05);
  }
  SpectralLibrary lib(3);
  lib.append(endmembers.col(0), Provenance::InSitu);
  lib.append(endmembers.col(1), Provenance::InSitu);
  const auto img = image_from(pixels, 2, 2);

  double oracle_sum = 0.0;
  for (int j = 0; j < 4; ++j) {
    oracle_sum += oracles::grid_nnls_residual(endmembers, pixels.col(j), 0.0, 2.0, 1e-3);
  }
  const double got = scene_reconstruction_error(lib, img);
  CHECK(got <= oracle_sum + 1e-9);
  CHECK(std::abs(got - oracle_sum) < 4e-3);  // 1e-3 grid slack per pixel
}

TEST_CASE("openmp kernel equals the serial reference") {
  RandomStream rng(15);
  Eigen::MatrixXd pixels(8, 64);
  for (Eigen::Index j = 0; j < pixels.cols(); ++j) {
    for (int i = 0; i < 8; ++i) pixels(i, j) = rng.next_double();
  }
  SpectralLibrary lib(8);
  for (int k = 0; k < 5; ++k) {
    Spectrum s(8);
    for (int i = 0; i < 8; ++i) s(i) = rng.next_double();
    lib.append(s, Provenance::InSitu);
  }
  const auto img = image_from(pixels, 8, 8);
  const double parallel = scene_reconstruction_error(lib, img);
  const double serial = scene_reconstruction_error_serial(lib, img);
  CHECK(parallel == serial);  // same per-pixel code, same summation order
}

TEST_CASE("scene error validation") {
  SpectralLibrary lib(3);
  Spectrum s(3);
  s.setConstant(0.5);
  lib.append(s, Provenance::InSitu);

  OrbitalImage empty;
  CHECK_THROWS_AS(scene_reconstruction_error(lib, empty), DimensionMismatch);

  OrbitalImage wrong;
  wrong.width = 1;
  wrong.height = 1;
  wrong.data = Eigen::MatrixXd::Constant(4, 1, 0.5);
  CHECK_THROWS_AS(scene_reconstruction_error(lib, wrong), DimensionMismatch);
}
