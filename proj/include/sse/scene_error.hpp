#pragma once

#include "sse/nnls.hpp"
#include "sse/scene.hpp"

namespace sse {

/// Whole-image reconstruction risk: sum over pixels x_j of
/// min_{a >= 0} ||Y a - x_j||_2, one NNLS solve per pixel.
///
/// OpenMP-parallel over pixels. Per-pixel residuals are accumulated in pixel
/// order, so the result is bit-identical across thread counts and matches
/// the serial reference exactly.
double scene_reconstruction_error(const SpectralLibrary& library, const OrbitalImage& image,
                                  const SolverOptions& opts = {});

/// Serial reference implementation, kept for testing and benchmarking.
double scene_reconstruction_error_serial(const SpectralLibrary& library, const OrbitalImage& image,
                                         const SolverOptions& opts = {});

}  // namespace sse
