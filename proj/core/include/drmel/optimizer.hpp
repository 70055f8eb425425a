#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "drmel/data.hpp"

namespace drmel {

// Rounding resolution of one l_n evaluation, which sums n terms. Near the
// optimum the line search accepts a full Newton step that shrinks the
// gradient while l_n moves by less than this, so accepted values never drop
// by more than it.
inline double evaluation_noise(double value, std::size_t n) {
  return 1e-12 * (1.0 + (value < 0 ? -value : value) + static_cast<double>(n));
}

struct FitOptions {
  int max_iter = 200;
  // Convergence when ||grad||_inf <= grad_tol * n.
  double grad_tol = 1e-8;
  // Line search gives up once the step is shorter than this (relative).
  double step_tol = 1e-10;
  // First ridge tried on a near-singular Newton system; escalated x10.
  double ridge = 1e-10;
  std::optional<ParamBlock> warm_start;

  void validate() const;
};

struct DrmFit {
  ParamBlock theta_hat;
  double loglik = 0.0;
  bool converged = false;
  int iterations = 0;
  double grad_norm = 0.0;
  // Accepted objective values, starting at the initial point.
  std::vector<double> trace;
  std::shared_ptr<const MultiSampleData> data;

  const MultiSampleData& data_ref() const { return *data; }
};

// Damped Newton ascent on the dual log-EL. Returns converged = false when
// max_iter is exhausted; throws FitError when the curvature is singular
// (collinear basis rows) or ridge escalation cannot repair it.
DrmFit fit_mele(std::shared_ptr<const MultiSampleData> data, const FitOptions& opts = {});

}  // namespace drmel
