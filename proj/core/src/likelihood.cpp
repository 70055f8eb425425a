#include "drmel/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "drmel/error.hpp"

namespace drmel {

namespace {

void check_shapes(const ParamBlock& theta, std::size_t groups, std::size_t d) {
  if (theta.m() + 1 != groups || theta.d() != d) {
    std::ostringstream os;
    os << "parameter block is " << theta.m() << "x" << theta.d() << ", expected "
       << groups - 1 << "x" << d;
    throw ConfigError(os.str());
  }
}

// Fills exps[k] = exp(e_k - max) for e_k = log rho_k + eta_k and returns
// log sum_k exp(e_k).
double log_sum_exp(std::span<const double> log_rho, std::span<const double> eta,
                   std::span<double> exps) {
  const auto groups = log_rho.size();
  double top = log_rho[0];
  exps[0] = log_rho[0];
  for (std::size_t k = 1; k < groups; ++k) {
    exps[k] = log_rho[k] + eta[k - 1];
    top = std::max(top, exps[k]);
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < groups; ++k) {
    exps[k] = std::exp(exps[k] - top);
    sum += exps[k];
  }
  return top + std::log(sum);
}

[[noreturn]] void non_finite(const ParamBlock& theta, double x) {
  std::ostringstream os;
  os << "non-finite exponent evaluating mixture weight at x=" << x << " with theta=[";
  auto flat = theta.flat();
  for (Eigen::Index i = 0; i < flat.size(); ++i) os << (i ? ", " : "") << flat(i);
  os << "]";
  throw EvaluationError(os.str());
}

}  // namespace

double log_mixture_weight(const ParamBlock& theta, std::span<const double> rho,
                          const Eigen::Ref<const Eigen::VectorXd>& qx) {
  check_shapes(theta, rho.size(), static_cast<std::size_t>(qx.size()));
  const auto groups = rho.size();
  std::vector<double> log_rho(groups), eta(groups - 1), exps(groups);
  for (std::size_t k = 0; k < groups; ++k) log_rho[k] = std::log(rho[k]);
  Eigen::VectorXd e = theta.matrix() * qx;
  for (std::size_t k = 0; k + 1 < groups; ++k) eta[k] = e(static_cast<Eigen::Index>(k));
  double lse = log_sum_exp(log_rho, eta, exps);
  if (!std::isfinite(lse)) non_finite(theta, qx.size() > 1 ? qx(1) : qx(0));
  return lse;
}

double group_weight(const ParamBlock& theta, std::span<const double> rho,
                    const Eigen::Ref<const Eigen::VectorXd>& qx, std::size_t r) {
  if (r >= rho.size()) throw ConfigError("group index out of range");
  double lse = log_mixture_weight(theta, rho, qx);
  double e = std::log(rho[r]);
  if (r > 0) e += theta.matrix().row(static_cast<Eigen::Index>(r - 1)).dot(qx);
  return std::exp(e - lse);
}

MixtureTerms mixture_terms(const ParamBlock& theta, const MultiSampleData& data) {
  check_shapes(theta, data.num_groups(), data.d());
  const auto n = static_cast<Eigen::Index>(data.n());
  const auto groups = static_cast<Eigen::Index>(data.num_groups());

  // Exponents theta_k' q(x_i), column 0 for the baseline. Weighting by the
  // integer sizes n_k and dividing by n keeps l_n(0) = 0 exact.
  Eigen::ArrayXXd e(n, groups);
  e.col(0).setZero();
  e.rightCols(groups - 1) = (data.Q() * theta.matrix().transpose()).array();

  const Eigen::ArrayXd top = e.rowwise().maxCoeff();
  e.colwise() -= top;
  e = e.exp();
  Eigen::ArrayXd sum = Eigen::ArrayXd::Zero(n);
  for (Eigen::Index k = 0; k < groups; ++k) {
    sum += static_cast<double>(data.group_size(static_cast<std::size_t>(k))) * e.col(k);
  }

  MixtureTerms out;
  out.log_h = top + (sum / static_cast<double>(n)).log();
  if (!out.log_h.allFinite()) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!std::isfinite(out.log_h(i))) non_finite(theta, data.values()[static_cast<std::size_t>(i)]);
    }
  }
  out.masses = (e.colwise() / sum).matrix();
  out.weights.resize(n, groups);
  for (Eigen::Index k = 0; k < groups; ++k) {
    out.weights.col(k) = static_cast<double>(data.group_size(static_cast<std::size_t>(k))) * out.masses.col(k);
  }
  return out;
}

double dual_logel(const ParamBlock& theta, const MultiSampleData& data) {
  return evaluate_dual_logel(theta, data, Derivatives::None).value;
}

Eigen::VectorXd dual_logel_gradient(const ParamBlock& theta, const MultiSampleData& data) {
  return evaluate_dual_logel(theta, data, Derivatives::Gradient).gradient;
}

Eigen::MatrixXd dual_logel_hessian(const ParamBlock& theta, const MultiSampleData& data) {
  return evaluate_dual_logel(theta, data, Derivatives::Hessian).hessian;
}

Eigen::MatrixXd hessian_from_weights(const RowMatrix& q, const RowMatrix& weights) {
  // -H = blockdiag(Q' diag(h_r) Q) - G'G with G = [diag(h_1) Q, ..., diag(h_m) Q].
  const auto n = q.rows();
  const auto d = q.cols();
  const auto m = weights.cols() - 1;
  Eigen::MatrixXd g(n, m * d);
  for (Eigen::Index r = 0; r < m; ++r) {
    g.middleCols(r * d, d) = (q.array().colwise() * weights.col(r + 1).array()).matrix();
  }
  Eigen::MatrixXd hess(m * d, m * d);
  hess.noalias() = g.transpose() * g;
  for (Eigen::Index r = 0; r < m; ++r) {
    hess.block(r * d, r * d, d, d).noalias() -= q.transpose() * g.middleCols(r * d, d);
  }
  // Mirror the lower triangle so the result is exactly symmetric.
  for (Eigen::Index c = 0; c < m * d; ++c) {
    for (Eigen::Index r = 0; r < c; ++r) hess(r, c) = hess(c, r);
  }
  return hess;
}

LikelihoodEval evaluate_dual_logel(const ParamBlock& theta, const MultiSampleData& data,
                                   Derivatives level) {
  MixtureTerms terms = mixture_terms(theta, data);
  const auto m = static_cast<Eigen::Index>(data.m());
  const auto d = static_cast<Eigen::Index>(data.d());
  const auto& sums = data.group_q_sums();

  LikelihoodEval out;
  double linear = 0.0;
  for (Eigen::Index r = 0; r < m; ++r) linear += theta.matrix().row(r).dot(sums.row(r + 1));
  out.value = linear - terms.log_h.sum();
  if (!std::isfinite(out.value)) throw EvaluationError("dual log-EL is not finite");

  if (level == Derivatives::None) return out;

  // Block r: sum_j q(x_rj) - sum_i h_r(x_i) q(x_i).
  const Eigen::MatrixXd weighted = data.Q().transpose() * terms.weights.rightCols(m);  // d x m
  out.gradient.resize(m * d);
  for (Eigen::Index r = 0; r < m; ++r) {
    out.gradient.segment(r * d, d) = sums.row(r + 1).transpose() - weighted.col(r);
  }

  if (level == Derivatives::Hessian) out.hessian = hessian_from_weights(data.Q(), terms.weights);
  return out;
}

}  // namespace drmel
