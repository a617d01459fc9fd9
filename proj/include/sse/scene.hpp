#pragma once

#include <string>

#include "sse/rng.hpp"
#include "sse/types.hpp"

namespace sse {

/// Raster of pixel spectra. Column j of `data` is the spectrum of pixel j,
/// pixels ordered row-major (j = row * width + col).
struct OrbitalImage {
  int width = 0;
  int height = 0;
  Eigen::MatrixXd data;  // bands x (width * height)

  int bands() const { return static_cast<int>(data.rows()); }
  int pixel_count() const { return width * height; }
  Spectrum pixel(int index) const { return data.col(index); }
  Spectrum pixel(int row, int col) const { return data.col(row * width + col); }
};

/// Sampling grid over the orbital image. Cell (r, c) maps to orbital pixel
/// (r * stride, c * stride); by default one cell per orbital pixel.
struct GridMap {
  int rows = 0;
  int cols = 0;
  int stride = 1;
  int image_width = 0;
  double step_cost = 10.0;  // cost of one eight-connected move

  bool in_bounds(GridCell c) const {
    return c.row >= 0 && c.row < rows && c.col >= 0 && c.col < cols;
  }
  int to_pixel_index(GridCell c) const {
    return (c.row * stride) * image_width + c.col * stride;
  }
  int cell_count() const { return rows * cols; }
};

/// Ground-truth spectra provider for in-situ sampling. f(cell) is the mean
/// spectrum of the high-res block under the cell's orbital pixel (or the
/// block's top-left pixel in PointSample mode); sampling adds i.i.d. N(0,
/// sigma) per band and clips at zero.
struct InSituOracle {
  enum class Mode { BlockMean, PointSample };

  OrbitalImage truth;     // high-resolution ground-truth raster
  int block = 1;          // high-res pixels per orbital pixel, per side
  int grid_stride = 1;    // orbital pixels per grid cell, per side
  double noise_sigma = 0.0;
  Mode mode = Mode::BlockMean;

  int cell_rows() const { return truth.height / (block * grid_stride); }
  int cell_cols() const { return truth.width / (block * grid_stride); }
};

struct SceneMetadata {
  std::string name = "scene";
  std::uint64_t seed = 0;
  int downsample = 1;
  int endmembers = 0;  // 0 when unknown (loaded scenes)
};

/// Co-registered orbital image + in-situ oracle + sampling grid.
struct SceneryPair {
  OrbitalImage orbital;
  InSituOracle oracle;
  GridMap grid;
  SceneMetadata meta;
  Eigen::MatrixXd true_endmembers;  // bands x K for synthetic scenes, else empty

  Spectrum orbital_spectrum(GridCell c) const {
    return orbital.pixel(grid.to_pixel_index(c));
  }
};

/// Noise-free oracle spectrum f(cell).
Spectrum in_situ_truth(const InSituOracle& oracle, GridCell cell);

/// f(cell) + per-band Gaussian noise, clipped to >= 0.
Spectrum sample_in_situ(const InSituOracle& oracle, GridCell cell, RandomStream& rng);

/// Assembles a validated SceneryPair from an orbital/high-res raster pair.
/// Throws DimensionMismatch on band disagreement and ConfigInvalid when the
/// high-res dimensions are not an integer multiple of the orbital ones.
SceneryPair make_scene_pair(OrbitalImage orbital, OrbitalImage highres, double noise_sigma,
                            int grid_stride, double step_cost, SceneMetadata meta);

}  // namespace sse
