#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "drmel/optimizer.hpp"
#include "drmel/step_cdf.hpp"

namespace drmel {

// Fitted baseline point masses p_kj = 1 / (n h(x_kj; theta_hat)), in pooled
// observation order.
struct FittedProbabilities {
  Eigen::VectorXd p_hat;
};

// All estimators below refuse (ConfigError) an unconverged fit.
FittedProbabilities fitted_probabilities(const DrmFit& fit);

// F_r(x) = n_r^{-1} sum_{k,j} h_r(x_kj; theta_hat) I(x_kj <= x), supported on
// every pooled observation. No renormalization is applied.
StepCdf cdf_estimate(const DrmFit& fit, std::size_t r);

// cdf_estimate for r = 0..m, sharing one pass over the data.
std::vector<StepCdf> cdf_estimates(const DrmFit& fit);

// Pooled empirical CDF of all n observations.
StepCdf pooled_ecdf(const MultiSampleData& data);

}  // namespace drmel
