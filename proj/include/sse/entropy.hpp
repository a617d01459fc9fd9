#pragma once

#include "sse/scene.hpp"
#include "sse/types.hpp"

namespace sse {

/// Squared-exponential Gram matrix over the columns of `cols`:
///   k(y_i, y_j) = sigma_f^2 exp(-||y_i - y_j||^2 / (2 l^2)) + noise^2 [i==j].
Eigen::MatrixXd kernel_gram(const Eigen::Ref<const Eigen::MatrixXd>& cols, double sigma_f,
                            double lengthscale, double noise);

/// Differential entropy of a Gaussian with covariance `sigma`:
///   0.5 ln|2 pi e sigma|, via Cholesky. Adds escalating diagonal jitter if
/// the factorisation fails; SingularCovariance when jitter cannot save it.
double gaussian_entropy(const Eigen::Ref<const Eigen::MatrixXd>& sigma);

/// Median pairwise spectral distance over the image's pixels, the default
/// kernel lengthscale. Pixels are stride-subsampled beyond a fixed cap so
/// the cost stays bounded; result is deterministic for a given image.
/// Degenerate (constant) images fall back to 1.
double median_pairwise_distance(const OrbitalImage& image);

/// Entropy evaluator that factors a base set of spectra once and appends
/// candidate columns against the cached factor. Results equal the
/// from-scratch computation to within 1e-8.
class EntropyExtender {
 public:
  EntropyExtender(Eigen::MatrixXd base_cols, double sigma_f, double lengthscale, double noise);

  /// h of the base set alone.
  double base_entropy() const;

  /// h of [base, extra] with extra columns appended.
  double entropy_with(const Eigen::Ref<const Eigen::MatrixXd>& extra_cols) const;

  Eigen::Index base_size() const { return base_.cols(); }

 private:
  Eigen::MatrixXd base_;  // bands x N0
  double sigma_f_;
  double lengthscale_;
  double noise_;
  Eigen::MatrixXd chol_;  // lower Cholesky factor of the base Gram block
  double base_logdiag_;   // sum ln diag(chol_)
};

}  // namespace sse
