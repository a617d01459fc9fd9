#include "oracles.hpp"

#include <cmath>
#include <numbers>

namespace oracles {

namespace {

// Evaluates ||A a - b|| over the axis grids in `axes` with an odometer walk.
double scan_grid(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                 const std::vector<std::vector<double>>& axes, Eigen::VectorXd& best_point) {
  const int k = static_cast<int>(axes.size());
  std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
  Eigen::VectorXd point(k);
  double best = std::numeric_limits<double>::infinity();
  for (;;) {
    for (int i = 0; i < k; ++i) point(i) = axes[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]];
    const double r = (a * point - b).norm();
    if (r < best) {
      best = r;
      best_point = point;
    }
    int carry = 0;
    while (carry < k) {
      if (++idx[static_cast<std::size_t>(carry)] < axes[static_cast<std::size_t>(carry)].size()) break;
      idx[static_cast<std::size_t>(carry)] = 0;
      ++carry;
    }
    if (carry == k) break;
  }
  return best;
}

std::vector<double> axis_points(double lo, double hi, double step) {
  std::vector<double> pts;
  for (double v = lo; v <= hi + step * 0.5; v += step) pts.push_back(std::min(v, hi));
  return pts;
}

}  // namespace

double grid_nnls_residual(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double lo, double hi,
                          double final_step) {
  const int k = static_cast<int>(a.cols());
  Eigen::VectorXd center = Eigen::VectorXd::Constant(k, (lo + hi) / 2.0);
  double window = (hi - lo) / 2.0;
  double step = (hi - lo) / 40.0;
  double best = std::numeric_limits<double>::infinity();
  for (;;) {
    std::vector<std::vector<double>> axes;
    for (int i = 0; i < k; ++i) {
      axes.push_back(axis_points(std::max(lo, center(i) - window), std::min(hi, center(i) + window),
                                 step));
    }
    Eigen::VectorXd best_point = center;
    best = scan_grid(a, b, axes, best_point);
    center = best_point;
    if (step <= final_step) break;
    window = 2.0 * step;
    step = std::max(final_step, step / 10.0);
  }
  return best;
}

double exhaustive_grid_nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double lo,
                            double hi, double step) {
  std::vector<std::vector<double>> axes;
  for (Eigen::Index i = 0; i < a.cols(); ++i) axes.push_back(axis_points(lo, hi, step));
  Eigen::VectorXd unused(a.cols());
  return scan_grid(a, b, axes, unused);
}

double entropy_from_determinant(const Eigen::MatrixXd& sigma) {
  const double n = static_cast<double>(sigma.rows());
  const double two_pi_e = 2.0 * std::numbers::pi * std::numbers::e;
  return 0.5 * std::log(std::pow(two_pi_e, n) * sigma.determinant());
}

}  // namespace oracles
