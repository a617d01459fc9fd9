#pragma once

#include <string>

#include "sse/scene.hpp"

namespace sse {

/// Raster container formats.
///
/// Binary ("SSER"): magic bytes 'S''S''E''R', then little-endian u32 width,
/// height, bands, then width*height*bands little-endian f32 values, pixels
/// row-major with all bands of a pixel stored consecutively.
///
/// CSV: first line "width,height,bands", then one pixel per line with its
/// band values comma-separated. Chosen when the path ends in ".csv".
///
/// Values are stored at f32 precision in both formats; images produced by
/// this library are quantised to f32 on creation, so save/load round-trips
/// are exact.
void save_raster(const OrbitalImage& image, const std::string& path);
OrbitalImage load_raster(const std::string& path);

struct SceneLoadOptions {
  int downsample = 0;       // 0: infer from the two rasters' dimensions
  double noise_sigma = 0.0; // oracle sampling noise
  int grid_stride = 1;
  double step_cost = 10.0;
  std::string name = "loaded";
};

/// Loads a pre-registered orbital/in-situ raster pair and validates band
/// equality and block divisibility.
SceneryPair load_scene(const std::string& orbital_path, const std::string& insitu_path,
                       const SceneLoadOptions& opts = {});

/// Writes scene.orbital and scene.oracle.truth to the two paths.
void save_scene(const SceneryPair& scene, const std::string& orbital_path,
                const std::string& insitu_path);

}  // namespace sse
