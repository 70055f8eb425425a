#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Core>

#include "drmel/data.hpp"

namespace drmel {

// log h(x; theta) where h = sum_k rho_k exp(theta_k' q(x)), theta_0 = 0,
// evaluated as a log-sum-exp with the largest exponent factored out.
double log_mixture_weight(const ParamBlock& theta, std::span<const double> rho,
                          const Eigen::Ref<const Eigen::VectorXd>& qx);

// h_r(x; theta) = rho_r exp(theta_r' q(x)) / h(x; theta), r in 0..m.
double group_weight(const ParamBlock& theta, std::span<const double> rho,
                    const Eigen::Ref<const Eigen::VectorXd>& qx, std::size_t r);

// Per-observation mixture quantities at theta.
struct MixtureTerms {
  Eigen::VectorXd log_h;  // n
  RowMatrix weights;      // n x (m+1); row i holds h_0..h_m at x_i, sums to 1
  // n x (m+1); h_k(x_i) / n_k, the mass F_k puts on x_i. Column 0 is the
  // fitted p_i = 1 / (n h(x_i)). Exactly 1/n at theta = 0.
  RowMatrix masses;
};

MixtureTerms mixture_terms(const ParamBlock& theta, const MultiSampleData& data);

// Dual log empirical likelihood
//   l_n(theta) = -sum_{k,j} log h(x_kj; theta) + sum_{k,j} theta_k' q(x_kj).
double dual_logel(const ParamBlock& theta, const MultiSampleData& data);

// Stacked in block order r = 1..m; block r is sum_{k,j} (delta_kr - h_r) q.
Eigen::VectorXd dual_logel_gradient(const ParamBlock& theta, const MultiSampleData& data);

// True second derivative of l_n (negative semidefinite). Block (r,s) is
//   -sum_{k,j} q q' (delta_rs h_r - h_r h_s).
Eigen::MatrixXd dual_logel_hessian(const ParamBlock& theta, const MultiSampleData& data);

enum class Derivatives { None, Gradient, Hessian };

struct LikelihoodEval {
  double value = 0.0;
  Eigen::VectorXd gradient;  // empty unless requested
  Eigen::MatrixXd hessian;   // empty unless requested
};

// Value and derivatives from one pass over the data.
LikelihoodEval evaluate_dual_logel(const ParamBlock& theta, const MultiSampleData& data,
                                   Derivatives level);

// -sum q q' (delta_rs h_r - h_r h_s) from precomputed weights.
Eigen::MatrixXd hessian_from_weights(const RowMatrix& q, const RowMatrix& weights);

}  // namespace drmel
