#pragma once

#include "sse/scene.hpp"

namespace sse {

struct SceneConfig {
  int endmembers = 5;   // K
  int bands = 32;
  int highres_w = 128;
  int highres_h = 128;
  int downsample = 4;
  double noise_sigma = 0.01;
  int blur_radius = 4;       // box half-width for abundance-field smoothing
  std::uint64_t seed = 0;    // default; generate takes an explicit seed
  int grid_stride = 1;
  double step_cost = 10.0;
  std::string name = "synthetic";
};

/// Synthetic paired scene, deterministic in (cfg, seed):
///  1. K smooth endmembers: Gaussian absorption features subtracted from a
///     flat continuum, clipped to [0.01, 1].
///  2. A spatially smooth abundance field: per-pixel Dirichlet draws, box
///     blurred, renormalised onto the simplex.
///  3. High-res image = linear mixtures (+ optional per-band noise).
///  4. Orbital image = block-mean downsample of the high-res image.
/// Image values are quantised to f32 so raster round-trips are exact.
SceneryPair generate_synthetic_scene(const SceneConfig& cfg, std::uint64_t seed);

}  // namespace sse
