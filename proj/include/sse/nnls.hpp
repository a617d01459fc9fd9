#pragma once

#include "sse/types.hpp"

namespace sse {

struct SolverOptions {
  double tolerance = 1e-8;  // KKT dual feasibility threshold
  bool sum_to_one = false;  // opt-in abundance sum constraint
  double asc_weight = 10.0; // augmented-row weight when sum_to_one is on
  int max_iterations = 0;   // 0 -> 3 * library size
};

struct UnmixResult {
  AbundanceVector abundances;
  double residual = 0.0;  // ||Y a - x||_2 against the unaugmented system
};

/// Active-set (Lawson-Hanson) non-negative least squares:
///   argmin_a ||Y a - x||_2  s.t.  a >= 0.
///
/// With opts.sum_to_one the system is augmented by a weighted all-ones row so
/// that sum(a) is pulled toward 1; the reported residual always refers to the
/// original data fit. Ties in the entering-column choice go to the lowest
/// column index, so duplicate columns are fine.
UnmixResult nnls_solve(const SpectralLibrary& library, const Spectrum& pixel,
                       const SolverOptions& opts = {});

/// Same solver on a raw matrix; columns of `basis` are the candidates.
UnmixResult nnls_solve(const Eigen::Ref<const Eigen::MatrixXd>& basis,
                       const Eigen::Ref<const Eigen::VectorXd>& pixel,
                       const SolverOptions& opts = {});

/// Linear mixture sum_i a_i y_i.
Spectrum reconstruct(const SpectralLibrary& library, const AbundanceVector& abundances);

}  // namespace sse
