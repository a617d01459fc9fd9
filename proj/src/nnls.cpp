#include "sse/nnls.hpp"

#include <limits>
#include <vector>

namespace sse {

namespace {

// Unconstrained least squares restricted to the passive columns.
Eigen::VectorXd solve_passive(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                              const std::vector<int>& passive) {
  Eigen::MatrixXd ap(a.rows(), static_cast<Eigen::Index>(passive.size()));
  for (std::size_t k = 0; k < passive.size(); ++k) {
    ap.col(static_cast<Eigen::Index>(k)) = a.col(passive[k]);
  }
  return ap.colPivHouseholderQr().solve(b);
}

}  // namespace

UnmixResult nnls_solve(const Eigen::Ref<const Eigen::MatrixXd>& basis,
                       const Eigen::Ref<const Eigen::VectorXd>& pixel,
                       const SolverOptions& opts) {
  const Eigen::Index n = basis.cols();
  if (n == 0) throw DimensionMismatch("nnls: empty library");
  if (pixel.size() != basis.rows()) {
    throw DimensionMismatch("nnls: pixel has " + std::to_string(pixel.size()) +
                            " bands, library has " + std::to_string(basis.rows()));
  }
  if (!(opts.tolerance > 0.0)) throw ConfigInvalid("nnls: tolerance must be > 0");
  if (!basis.allFinite() || !pixel.allFinite()) throw NonFinite("nnls: non-finite input");

  Eigen::MatrixXd a = basis;
  Eigen::VectorXd b = pixel;
  if (opts.sum_to_one) {
    a.conservativeResize(a.rows() + 1, Eigen::NoChange);
    a.row(a.rows() - 1).setConstant(opts.asc_weight);
    b.conservativeResize(b.size() + 1);
    b(b.size() - 1) = opts.asc_weight;
  }

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<int> passive;
  std::vector<char> in_passive(static_cast<std::size_t>(n), 0);
  Eigen::VectorXd w = a.transpose() * b;  // negative gradient at x = 0

  const int max_outer = opts.max_iterations > 0 ? opts.max_iterations : 3 * static_cast<int>(n);
  int outer = 0;

  while (static_cast<Eigen::Index>(passive.size()) < n) {
    // Entering column: largest dual among free columns, lowest index on ties.
    int enter = -1;
    double best = opts.tolerance;
    for (int i = 0; i < n; ++i) {
      if (!in_passive[static_cast<std::size_t>(i)] && w(i) > best) {
        best = w(i);
        enter = i;
      }
    }
    if (enter < 0) break;  // dual feasible: done

    if (++outer > max_outer) {
      throw IterationLimit("nnls: exceeded " + std::to_string(max_outer) + " iterations");
    }

    in_passive[static_cast<std::size_t>(enter)] = 1;
    passive.push_back(enter);

    for (;;) {
      Eigen::VectorXd z = solve_passive(a, b, passive);
      double zmin = std::numeric_limits<double>::infinity();
      for (Eigen::Index k = 0; k < z.size(); ++k) zmin = std::min(zmin, z(k));
      if (zmin > 0.0) {
        x.setZero();
        for (std::size_t k = 0; k < passive.size(); ++k) x(passive[k]) = z(static_cast<Eigen::Index>(k));
        break;
      }
      // Step toward z until the first passive coefficient hits zero.
      double alpha = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < passive.size(); ++k) {
        const double zk = z(static_cast<Eigen::Index>(k));
        if (zk <= 0.0) {
          const double xk = x(passive[k]);
          alpha = std::min(alpha, xk / (xk - zk));
        }
      }
      for (std::size_t k = 0; k < passive.size(); ++k) {
        const int i = passive[k];
        x(i) += alpha * (z(static_cast<Eigen::Index>(k)) - x(i));
      }
      // Demote everything that reached zero.
      std::vector<int> still;
      still.reserve(passive.size());
      for (std::size_t k = 0; k < passive.size(); ++k) {
        const int i = passive[k];
        if (z(static_cast<Eigen::Index>(k)) <= 0.0 && x(i) <= 1e-14) {
          x(i) = 0.0;
          in_passive[static_cast<std::size_t>(i)] = 0;
        } else {
          still.push_back(i);
        }
      }
      passive = std::move(still);
      if (passive.empty()) break;
    }
    w = a.transpose() * (b - a * x);
  }

  UnmixResult out;
  out.abundances = x.cwiseMax(0.0);
  out.residual = (basis * out.abundances - pixel).norm();
  return out;
}

UnmixResult nnls_solve(const SpectralLibrary& library, const Spectrum& pixel,
                       const SolverOptions& opts) {
  if (library.empty()) throw DimensionMismatch("nnls: empty library");
  return nnls_solve(library.matrix(), pixel, opts);
}

Spectrum reconstruct(const SpectralLibrary& library, const AbundanceVector& abundances) {
  if (abundances.size() != library.size()) {
    throw DimensionMismatch("reconstruct: " + std::to_string(abundances.size()) +
                            " abundances for " + std::to_string(library.size()) + " columns");
  }
  if (library.empty()) return Spectrum::Zero(library.bands());
  return library.matrix() * abundances;
}

}  // namespace sse
