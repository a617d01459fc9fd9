#include "sse/scene_error.hpp"

#include <exception>
#include <vector>

namespace sse {

namespace {

void validate(const SpectralLibrary& library, const OrbitalImage& image) {
  if (library.empty()) throw DimensionMismatch("scene error: empty library");
  if (image.pixel_count() < 1) throw DimensionMismatch("scene error: empty image");
  if (image.bands() != library.bands()) {
    throw DimensionMismatch("scene error: image has " + std::to_string(image.bands()) +
                            " bands, library has " + std::to_string(library.bands()));
  }
}

}  // namespace

double scene_reconstruction_error(const SpectralLibrary& library, const OrbitalImage& image,
                                  const SolverOptions& opts) {
  validate(library, image);
  const int n = image.pixel_count();
  const Eigen::MatrixXd& basis = library.matrix();
  std::vector<double> residuals(static_cast<std::size_t>(n), 0.0);
  std::exception_ptr failure = nullptr;

#pragma omp parallel for schedule(static)
  for (int j = 0; j < n; ++j) {
    try {
      residuals[static_cast<std::size_t>(j)] = nnls_solve(basis, image.data.col(j), opts).residual;
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  double total = 0.0;
  for (double r : residuals) total += r;
  return total;
}

double scene_reconstruction_error_serial(const SpectralLibrary& library, const OrbitalImage& image,
                                         const SolverOptions& opts) {
  validate(library, image);
  const Eigen::MatrixXd& basis = library.matrix();
  double total = 0.0;
  for (int j = 0; j < image.pixel_count(); ++j) {
    total += nnls_solve(basis, image.data.col(j), opts).residual;
  }
  return total;
}

}  // namespace sse
