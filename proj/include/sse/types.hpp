#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "sse/errors.hpp"

namespace sse {

/// A d-band reflectance vector, dimensionless and nominally within [0, 1].
using Spectrum = Eigen::VectorXd;

/// Non-negative unmixing coefficients, one per library column.
using AbundanceVector = Eigen::VectorXd;

struct GridCell {
  int row = 0;
  int col = 0;

  friend bool operator==(const GridCell&, const GridCell&) = default;
};

/// Number of eight-connected moves between two cells.
inline int chebyshev(GridCell a, GridCell b) {
  return std::max(std::abs(a.row - b.row), std::abs(a.col - b.col));
}

enum class Provenance : std::uint8_t { InSitu, Remote };

/// Ordered collection of endmember candidate spectra. All columns share one
/// band count; each carries a tag recording whether it was measured on the
/// ground or lifted from the orbital image.
class SpectralLibrary {
 public:
  SpectralLibrary() = default;
  explicit SpectralLibrary(Eigen::Index bands) : mat_(bands, 0) {}

  void append(const Spectrum& s, Provenance origin) {
    if (mat_.size() == 0 && mat_.rows() == 0) {
      mat_.resize(s.size(), 0);
    }
    if (s.size() != mat_.rows()) {
      throw DimensionMismatch("spectrum has " + std::to_string(s.size()) +
                              " bands, library has " + std::to_string(mat_.rows()));
    }
    mat_.conservativeResize(Eigen::NoChange, mat_.cols() + 1);
    mat_.col(mat_.cols() - 1) = s;
    origins_.push_back(origin);
  }

  Eigen::Index bands() const { return mat_.rows(); }
  Eigen::Index size() const { return mat_.cols(); }
  bool empty() const { return mat_.cols() == 0; }
  const Eigen::MatrixXd& matrix() const { return mat_; }
  Spectrum column(Eigen::Index i) const { return mat_.col(i); }
  Provenance provenance(Eigen::Index i) const { return origins_[static_cast<std::size_t>(i)]; }

 private:
  Eigen::MatrixXd mat_;  // bands x columns
  std::vector<Provenance> origins_;
};

}  // namespace sse
