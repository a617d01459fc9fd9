// Benchmark of the whole-image reconstruction-error kernel: OpenMP-parallel
// implementation against the serial reference, plus the greedy waypoint
// entropy scan in both modes.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "sse/entropy.hpp"
#include "sse/scene_error.hpp"
#include "sse/scene_gen.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double time_of(const std::function<double()>& fn, double* result) {
  const auto t0 = Clock::now();
  *result = fn();
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  int grid = 32;
  int bands = 32;
  int library_size = 25;
  int repeats = 3;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string key = argv[i];
    const int value = std::atoi(argv[i + 1]);
    if (key == "--grid") grid = value;
    else if (key == "--bands") bands = value;
    else if (key == "--library") library_size = value;
    else if (key == "--repeats") repeats = value;
    else {
      std::fprintf(stderr, "unknown option %s\n", key.c_str());
      return 2;
    }
  }

  sse::SceneConfig cfg;
  cfg.bands = bands;
  cfg.highres_w = grid * cfg.downsample;
  cfg.highres_h = grid * cfg.downsample;
  const sse::SceneryPair scene = sse::generate_synthetic_scene(cfg, 7);

  // Library of in-situ samples scattered over the grid.
  sse::RandomStream rng(11);
  sse::SpectralLibrary library;
  for (int i = 0; i < library_size; ++i) {
    const sse::GridCell cell{rng.next_int(scene.grid.rows), rng.next_int(scene.grid.cols)};
    library.append(sse::sample_in_situ(scene.oracle, cell, rng), sse::Provenance::InSitu);
  }

  std::printf("scene %dx%d grid, %d bands, library %d, %d threads\n", scene.grid.rows,
              scene.grid.cols, bands, library_size, omp_get_max_threads());

  double serial_result = 0.0, parallel_result = 0.0;
  double serial_best = 1e300, parallel_best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    serial_best = std::min(serial_best, time_of([&] {
      return sse::scene_reconstruction_error_serial(library, scene.orbital);
    }, &serial_result));
    parallel_best = std::min(parallel_best, time_of([&] {
      return sse::scene_reconstruction_error(library, scene.orbital);
    }, &parallel_result));
  }
  std::printf("scene_reconstruction_error  serial %.4fs  openmp %.4fs  speedup %.2fx\n",
              serial_best, parallel_best, serial_best / parallel_best);
  if (serial_result != parallel_result) {
    std::printf("MISMATCH: serial %.17g vs openmp %.17g\n", serial_result, parallel_result);
    return 1;
  }
  std::printf("results identical: %.17g\n", serial_result);

  // Entropy scan over every cell, the inner loop of greedy selection.
  {
    Eigen::MatrixXd base = library.matrix();
    const sse::EntropyExtender extender(base, 1.0, sse::median_pairwise_distance(scene.orbital), 0.1);
    const int n = scene.grid.cell_count();
    std::vector<double> scores(static_cast<std::size_t>(n));
    double best_serial = 1e300, best_parallel = 1e300;
    for (int r = 0; r < repeats; ++r) {
      auto t0 = Clock::now();
      for (int i = 0; i < n; ++i) {
        scores[static_cast<std::size_t>(i)] = extender.entropy_with(
            scene.orbital_spectrum({i / scene.grid.cols, i % scene.grid.cols}));
      }
      best_serial = std::min(best_serial, std::chrono::duration<double>(Clock::now() - t0).count());
      t0 = Clock::now();
#pragma omp parallel for schedule(static)
      for (int i = 0; i < n; ++i) {
        scores[static_cast<std::size_t>(i)] = extender.entropy_with(
            scene.orbital_spectrum({i / scene.grid.cols, i % scene.grid.cols}));
      }
      best_parallel = std::min(best_parallel, std::chrono::duration<double>(Clock::now() - t0).count());
    }
    std::printf("entropy waypoint scan       serial %.4fs  openmp %.4fs  speedup %.2fx\n",
                best_serial, best_parallel, best_serial / best_parallel);
  }
  return 0;
}
