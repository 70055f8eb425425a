#include "drmel/estimators.hpp"

#include <cmath>

#include "drmel/error.hpp"
#include "drmel/likelihood.hpp"

namespace drmel {

namespace {

void require_converged(const DrmFit& fit) {
  if (!fit.converged) throw ConfigError("estimator requires a converged fit");
}

StepCdf weighted_cdf(const MultiSampleData& data, const RowMatrix& masses_of, std::size_t r) {
  const auto& order = data.sorted_order();
  std::vector<double> values(order.size()), masses(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    values[i] = data.values()[order[i]];
    masses[i] = masses_of(static_cast<Eigen::Index>(order[i]), static_cast<Eigen::Index>(r));
  }
  return StepCdf::from_sorted_atoms(values, masses);
}

}  // namespace

FittedProbabilities fitted_probabilities(const DrmFit& fit) {
  require_converged(fit);
  const auto& data = fit.data_ref();
  MixtureTerms terms = mixture_terms(fit.theta_hat, data);
  FittedProbabilities out;
  out.p_hat = terms.masses.col(0);
  return out;
}

StepCdf cdf_estimate(const DrmFit& fit, std::size_t r) {
  require_converged(fit);
  const auto& data = fit.data_ref();
  if (r >= data.num_groups()) throw ConfigError("group index out of range");
  MixtureTerms terms = mixture_terms(fit.theta_hat, data);
  return weighted_cdf(data, terms.masses, r);
}

std::vector<StepCdf> cdf_estimates(const DrmFit& fit) {
  require_converged(fit);
  const auto& data = fit.data_ref();
  MixtureTerms terms = mixture_terms(fit.theta_hat, data);
  std::vector<StepCdf> out;
  out.reserve(data.num_groups());
  for (std::size_t r = 0; r < data.num_groups(); ++r) out.push_back(weighted_cdf(data, terms.masses, r));
  return out;
}

StepCdf pooled_ecdf(const MultiSampleData& data) {
  const auto& order = data.sorted_order();
  const double w = 1.0 / static_cast<double>(data.n());
  std::vector<double> values(order.size()), masses(order.size(), w);
  for (std::size_t i = 0; i < order.size(); ++i) values[i] = data.values()[order[i]];
  return StepCdf::from_sorted_atoms(values, masses);
}

}  // namespace drmel
