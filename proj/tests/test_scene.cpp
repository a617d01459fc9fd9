#include <doctest.h>

#include <cmath>

#include "sse/scene_error.hpp"
#include "sse/scene_gen.hpp"

using namespace sse;

namespace {

SceneConfig small_config() {
  SceneConfig cfg;
  cfg.endmembers = 3;
  cfg.bands = 8;
  cfg.highres_w = 32;
  cfg.highres_h = 32;
  cfg.downsample = 4;
  cfg.noise_sigma = 0.0;
  cfg.blur_radius = 2;
  return cfg;
}

}  // namespace

TEST_CASE("generation is deterministic in (cfg, seed)") {
  const auto cfg = small_config();
  const auto a = generate_synthetic_scene(cfg, 5);
  const auto b = generate_synthetic_scene(cfg, 5);
  CHECK(a.orbital.data == b.orbital.data);
  CHECK(a.oracle.truth.data == b.oracle.truth.data);
  const auto c = generate_synthetic_scene(cfg, 6);
  CHECK(a.orbital.data != c.orbital.data);
}

TEST_CASE("orbital pixels are block means of the high-res image") {
  auto cfg = small_config();
  cfg.noise_sigma = 0.0;
  const auto scene = generate_synthetic_scene(cfg, 9);
  const int ds = cfg.downsample;
  for (int r = 0; r < scene.orbital.height; ++r) {
    for (int c = 0; c < scene.orbital.width; ++c) {
      Spectrum mean = Spectrum::Zero(cfg.bands);
      for (int rr = r * ds; rr < (r + 1) * ds; ++rr) {
        for (int cc = c * ds; cc < (c + 1) * ds; ++cc) {
          mean += scene.oracle.truth.pixel(rr, cc);
        }
      }
      mean /= ds * ds;
      CHECK((scene.orbital.pixel(r, c) - mean).cwiseAbs().maxCoeff() < 1e-6);
    }
  }
}

TEST_CASE("single-endmember scene reconstructs exactly with its endmember") {
  auto cfg = small_config();
  cfg.endmembers = 1;
  cfg.noise_sigma = 0.0;
  const auto scene = generate_synthetic_scene(cfg, 4);
  SpectralLibrary lib(cfg.bands);
  lib.append(scene.true_endmembers.col(0), Provenance::InSitu);
  CHECK(scene_reconstruction_error(lib, scene.orbital) < 1e-6);
}

TEST_CASE("noisy orbital pixels stay near the true endmember cone") {
  auto cfg = small_config();
  cfg.endmembers = 5;
  cfg.bands = 16;
  cfg.highres_w = 128;
  cfg.highres_h = 128;
  cfg.noise_sigma = 0.01;
  const auto scene = generate_synthetic_scene(cfg, 21);
  SpectralLibrary truth(cfg.bands);
  for (int k = 0; k < cfg.endmembers; ++k) {
    truth.append(scene.true_endmembers.col(k), Provenance::InSitu);
  }
  // Block-mean noise has std sigma/downsample per band; allow a wide margin.
  const double bound = cfg.noise_sigma * std::sqrt(static_cast<double>(cfg.bands));
  for (int j = 0; j < scene.orbital.pixel_count(); ++j) {
    const double residual = nnls_solve(truth.matrix(), scene.orbital.data.col(j)).residual;
    REQUIRE(residual < bound);
  }
}

TEST_CASE("abundance fields live on the simplex") {
  // Noiseless pixels must be convex combinations of the true endmembers:
  // zero unmixing residual and weights summing to one.
  auto cfg = small_config();
  cfg.noise_sigma = 0.0;
  const auto scene = generate_synthetic_scene(cfg, 17);
  for (int j = 0; j < scene.oracle.truth.pixel_count(); j += 37) {
    const auto r = nnls_solve(scene.true_endmembers, scene.oracle.truth.data.col(j));
    REQUIRE(r.residual < 1e-6);
    REQUIRE(r.abundances.minCoeff() >= 0.0);
    REQUIRE(r.abundances.sum() == doctest::Approx(1.0).epsilon(5e-3));
  }
}

TEST_CASE("noiseless oracle returns the block mean exactly") {
  auto cfg = small_config();
  cfg.noise_sigma = 0.0;
  const auto scene = generate_synthetic_scene(cfg, 3);
  RandomStream rng(1);
  const GridCell cell{2, 3};
  const Spectrum s = sample_in_situ(scene.oracle, cell, rng);
  CHECK((s - in_situ_truth(scene.oracle, cell)).norm() == doctest::Approx(0.0));
}

TEST_CASE("in-situ sampling is deterministic per stream seed") {
  auto cfg = small_config();
  cfg.noise_sigma = 0.02;
  const auto scene = generate_synthetic_scene(cfg, 3);
  RandomStream r1(42), r2(42);
  const GridCell cell{1, 1};
  CHECK((sample_in_situ(scene.oracle, cell, r1) - sample_in_situ(scene.oracle, cell, r2)).norm() ==
        doctest::Approx(0.0));
}

TEST_CASE("sampling noise has the configured scale") {
  auto cfg = small_config();
  cfg.noise_sigma = 0.01;
  const auto scene = generate_synthetic_scene(cfg, 8);
  RandomStream rng(123);
  const GridCell cell{4, 4};
  const Spectrum truth = in_situ_truth(scene.oracle, cell);
  const int draws = 10000;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(cfg.bands);
  Eigen::VectorXd sq = Eigen::VectorXd::Zero(cfg.bands);
  for (int i = 0; i < draws; ++i) {
    const Spectrum s = sample_in_situ(scene.oracle, cell, rng) - truth;
    sum += s;
    sq += s.cwiseProduct(s);
  }
  for (int b = 0; b < cfg.bands; ++b) {
    const double mean = sum(b) / draws;
    const double std = std::sqrt(sq(b) / draws - mean * mean);
    CHECK(std::abs(std - cfg.noise_sigma) < 0.05 * cfg.noise_sigma);
  }
}

TEST_CASE("out-of-bounds sampling is rejected") {
  const auto scene = generate_synthetic_scene(small_config(), 1);
  RandomStream rng(0);
  CHECK_THROWS_AS(sample_in_situ(scene.oracle, {-1, 0}, rng), OutOfBounds);
  CHECK_THROWS_AS(sample_in_situ(scene.oracle, {0, scene.grid.cols}, rng), OutOfBounds);
}

TEST_CASE("config validation") {
  auto cfg = small_config();
  cfg.highres_w = 33;  // not divisible by 4
  CHECK_THROWS_AS(generate_synthetic_scene(cfg, 0), ConfigInvalid);
  cfg = small_config();
  cfg.endmembers = 0;
  CHECK_THROWS_AS(generate_synthetic_scene(cfg, 0), ConfigInvalid);
  cfg = small_config();
  cfg.noise_sigma = -0.1;
  CHECK_THROWS_AS(generate_synthetic_scene(cfg, 0), ConfigInvalid);
}

TEST_CASE("grid geometry with stride") {
  auto cfg = small_config();
  cfg.grid_stride = 2;
  const auto scene = generate_synthetic_scene(cfg, 2);
  CHECK(scene.grid.rows == scene.orbital.height / 2);
  CHECK(scene.grid.cols == scene.orbital.width / 2);
  const GridCell cell{1, 2};
  CHECK(scene.grid.to_pixel_index(cell) == 2 * scene.orbital.width + 4);
}
