#include "sse/scene.hpp"

namespace sse {

Spectrum in_situ_truth(const InSituOracle& oracle, GridCell cell) {
  if (cell.row < 0 || cell.row >= oracle.cell_rows() || cell.col < 0 ||
      cell.col >= oracle.cell_cols()) {
    throw OutOfBounds("in-situ query at (" + std::to_string(cell.row) + ", " +
                      std::to_string(cell.col) + ") outside " +
                      std::to_string(oracle.cell_rows()) + "x" +
                      std::to_string(oracle.cell_cols()) + " grid");
  }
  const int pitch = oracle.block * oracle.grid_stride;
  const int r0 = cell.row * pitch;
  const int c0 = cell.col * pitch;
  if (oracle.mode == InSituOracle::Mode::PointSample) {
    return oracle.truth.pixel(r0, c0);
  }
  Spectrum mean = Spectrum::Zero(oracle.truth.bands());
  for (int r = r0; r < r0 + oracle.block; ++r) {
    for (int c = c0; c < c0 + oracle.block; ++c) {
      mean += oracle.truth.pixel(r, c);
    }
  }
  return mean / static_cast<double>(oracle.block * oracle.block);
}

Spectrum sample_in_situ(const InSituOracle& oracle, GridCell cell, RandomStream& rng) {
  Spectrum s = in_situ_truth(oracle, cell);
  if (oracle.noise_sigma > 0.0) {
    for (Eigen::Index b = 0; b < s.size(); ++b) {
      s(b) += rng.next_gaussian(0.0, oracle.noise_sigma);
    }
    s = s.cwiseMax(0.0);
  }
  return s;
}

SceneryPair make_scene_pair(OrbitalImage orbital, OrbitalImage highres, double noise_sigma,
                            int grid_stride, double step_cost, SceneMetadata meta) {
  if (orbital.bands() != highres.bands()) {
    throw DimensionMismatch("scene: orbital has " + std::to_string(orbital.bands()) +
                            " bands, in-situ has " + std::to_string(highres.bands()));
  }
  if (orbital.width <= 0 || orbital.height <= 0) throw ConfigInvalid("scene: empty orbital image");
  if (highres.width % orbital.width != 0 || highres.height % orbital.height != 0 ||
      highres.width / orbital.width != highres.height / orbital.height) {
    throw ConfigInvalid("scene: high-res " + std::to_string(highres.width) + "x" +
                        std::to_string(highres.height) + " is not an integer block multiple of orbital " +
                        std::to_string(orbital.width) + "x" + std::to_string(orbital.height));
  }
  if (grid_stride < 1) throw ConfigInvalid("scene: grid stride must be >= 1");
  if (noise_sigma < 0.0) throw ConfigInvalid("scene: noise sigma must be >= 0");

  const int block = highres.width / orbital.width;
  SceneryPair scene;
  scene.grid.rows = orbital.height / grid_stride;
  scene.grid.cols = orbital.width / grid_stride;
  scene.grid.stride = grid_stride;
  scene.grid.image_width = orbital.width;
  scene.grid.step_cost = step_cost;
  if (scene.grid.rows < 1 || scene.grid.cols < 1) {
    throw ConfigInvalid("scene: grid stride leaves an empty grid");
  }
  scene.orbital = std::move(orbital);
  scene.oracle.truth = std::move(highres);
  scene.oracle.block = block;
  scene.oracle.grid_stride = grid_stride;
  scene.oracle.noise_sigma = noise_sigma;
  scene.meta = std::move(meta);
  scene.meta.downsample = block;
  return scene;
}

}  // namespace sse
