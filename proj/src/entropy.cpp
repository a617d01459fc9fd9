#include "sse/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace sse {

namespace {

constexpr double kLn2PiE = 2.8378770664093453;  // ln(2 pi e)
constexpr int kMedianPixelCap = 512;

double kernel_value(const Eigen::Ref<const Eigen::VectorXd>& a,
                    const Eigen::Ref<const Eigen::VectorXd>& b, double sigma_f,
                    double lengthscale) {
  const double d2 = (a - b).squaredNorm();
  return sigma_f * sigma_f * std::exp(-d2 / (2.0 * lengthscale * lengthscale));
}

// Attempts LLT with escalating diagonal jitter; returns false when even the
// largest jitter leaves the matrix indefinite.
bool robust_llt(const Eigen::MatrixXd& sigma, Eigen::LLT<Eigen::MatrixXd>& llt) {
  llt.compute(sigma);
  if (llt.info() == Eigen::Success) return true;
  const double scale = std::max(sigma.diagonal().mean(), 1e-300);
  for (double eps : {1e-12, 1e-10, 1e-8, 1e-6}) {
    Eigen::MatrixXd jittered = sigma;
    jittered.diagonal().array() += eps * scale;
    llt.compute(jittered);
    if (llt.info() == Eigen::Success) return true;
  }
  return false;
}

}  // namespace

Eigen::MatrixXd kernel_gram(const Eigen::Ref<const Eigen::MatrixXd>& cols, double sigma_f,
                            double lengthscale, double noise) {
  const Eigen::Index n = cols.cols();
  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    gram(i, i) = sigma_f * sigma_f + noise * noise;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double k = kernel_value(cols.col(i), cols.col(j), sigma_f, lengthscale);
      gram(i, j) = k;
      gram(j, i) = k;
    }
  }
  return gram;
}

double gaussian_entropy(const Eigen::Ref<const Eigen::MatrixXd>& sigma) {
  const Eigen::Index n = sigma.rows();
  if (n == 0) throw DimensionMismatch("entropy: empty covariance");
  if (sigma.cols() != n) throw DimensionMismatch("entropy: covariance must be square");
  Eigen::LLT<Eigen::MatrixXd> llt;
  if (!robust_llt(sigma, llt)) {
    throw SingularCovariance("entropy: covariance not positive definite after jitter");
  }
  const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  return 0.5 * (static_cast<double>(n) * kLn2PiE + logdet);
}

double median_pairwise_distance(const OrbitalImage& image) {
  const int n = image.pixel_count();
  if (n < 2) return 1.0;
  const int stride = (n + kMedianPixelCap - 1) / kMedianPixelCap;
  std::vector<int> picks;
  for (int j = 0; j < n; j += stride) picks.push_back(j);
  const int m = static_cast<int>(picks.size());
  if (m < 2) return 1.0;

  std::vector<double> dists(static_cast<std::size_t>(m) * (m - 1) / 2);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < m - 1; ++i) {
    // Flat index of the (i, i+1) pair within the upper triangle.
    std::size_t base = static_cast<std::size_t>(i) * m - static_cast<std::size_t>(i) * (i + 1) / 2;
    for (int j = i + 1; j < m; ++j) {
      dists[base + static_cast<std::size_t>(j - i - 1)] =
          (image.data.col(picks[static_cast<std::size_t>(i)]) -
           image.data.col(picks[static_cast<std::size_t>(j)]))
              .norm();
    }
  }
  auto mid = dists.begin() + static_cast<std::ptrdiff_t>(dists.size() / 2);
  std::nth_element(dists.begin(), mid, dists.end());
  const double med = *mid;
  return med > 1e-12 ? med : 1.0;
}

EntropyExtender::EntropyExtender(Eigen::MatrixXd base_cols, double sigma_f, double lengthscale,
                                 double noise)
    : base_(std::move(base_cols)), sigma_f_(sigma_f), lengthscale_(lengthscale), noise_(noise) {
  if (base_.cols() == 0) throw DimensionMismatch("entropy: empty base set");
  Eigen::MatrixXd gram = kernel_gram(base_, sigma_f_, lengthscale_, noise_);
  Eigen::LLT<Eigen::MatrixXd> llt;
  if (!robust_llt(gram, llt)) {
    throw SingularCovariance("entropy: base covariance not positive definite after jitter");
  }
  chol_ = llt.matrixL();
  base_logdiag_ = chol_.diagonal().array().log().sum();
}

double EntropyExtender::base_entropy() const {
  return 0.5 * static_cast<double>(base_.cols()) * kLn2PiE + base_logdiag_;
}

double EntropyExtender::entropy_with(const Eigen::Ref<const Eigen::MatrixXd>& extra_cols) const {
  const Eigen::Index m = extra_cols.cols();
  if (m == 0) return base_entropy();
  const Eigen::Index n0 = base_.cols();

  // Cross block and extension block of the full Gram matrix.
  Eigen::MatrixXd cross(n0, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < n0; ++i) {
      cross(i, j) = kernel_value(base_.col(i), extra_cols.col(j), sigma_f_, lengthscale_);
    }
  }
  Eigen::MatrixXd tail = kernel_gram(extra_cols, sigma_f_, lengthscale_, noise_);

  // Schur complement factorisation of the appended block.
  Eigen::MatrixXd b = chol_.triangularView<Eigen::Lower>().solve(cross);
  Eigen::MatrixXd schur = tail - b.transpose() * b;
  Eigen::LLT<Eigen::MatrixXd> llt(schur);
  if (llt.info() != Eigen::Success) {
    // Rare: fall back to a from-scratch factorisation with jitter.
    Eigen::MatrixXd all(base_.rows(), n0 + m);
    all.leftCols(n0) = base_;
    all.rightCols(m) = extra_cols;
    return gaussian_entropy(kernel_gram(all, sigma_f_, lengthscale_, noise_));
  }
  const double logdiag = Eigen::MatrixXd(llt.matrixL()).diagonal().array().log().sum();
  return 0.5 * static_cast<double>(n0 + m) * kLn2PiE + base_logdiag_ + logdiag;
}

}  // namespace sse
