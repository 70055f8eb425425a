#include "drmel/asymptotics.hpp"

#include <algorithm>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "drmel/csv_writer.hpp"
#include "drmel/error.hpp"
#include "drmel/estimators.hpp"
#include "drmel/likelihood.hpp"

namespace drmel {

namespace {

void require_converged(const DrmFit& fit) {
  if (!fit.converged) throw ConfigError("plug-in covariance requires a converged fit");
}

Eigen::LLT<Eigen::MatrixXd> factor_W(const Eigen::MatrixXd& w) {
  Eigen::LLT<Eigen::MatrixXd> llt(w);
  if (llt.info() != Eigen::Success) throw FitError("W_hat is not positive definite");
  return llt;
}

}  // namespace

Eigen::MatrixXd estimate_W(const DrmFit& fit) {
  require_converged(fit);
  const auto& data = fit.data_ref();
  MixtureTerms terms = mixture_terms(fit.theta_hat, data);
  Eigen::MatrixXd w = -hessian_from_weights(data.Q(), terms.weights) / static_cast<double>(data.n());
  factor_W(w);
  return w;
}

Eigen::MatrixXd build_S(std::span<const double> rho, std::size_t d) {
  if (rho.size() < 2 || d < 1) throw ConfigError("build_S needs m >= 1 and d >= 1");
  const auto m = rho.size() - 1;
  const auto p = static_cast<Eigen::Index>(m * d);
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(p, p);
  for (std::size_t r = 1; r <= m; ++r) {
    for (std::size_t c = 1; c <= m; ++c) {
      double v = 1.0 / rho[0];
      if (r == c) v += 1.0 / rho[r];
      s(static_cast<Eigen::Index>((r - 1) * d), static_cast<Eigen::Index>((c - 1) * d)) = v;
    }
  }
  return s;
}

CovarianceEstimates param_covariance(const DrmFit& fit) {
  CovarianceEstimates out;
  out.W_hat = estimate_W(fit);
  out.S = build_S(fit.data_ref().rho(), fit.data_ref().d());
  auto llt = factor_W(out.W_hat);
  const auto p = out.W_hat.rows();
  Eigen::MatrixXd w_inv = llt.solve(Eigen::MatrixXd::Identity(p, p));
  w_inv = 0.5 * (w_inv + w_inv.transpose()).eval();
  out.param_cov = w_inv - out.S;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(out.param_cov, Eigen::EigenvaluesOnly);
  out.indefinite = eig.eigenvalues().minCoeff() < 0.0;
  return out;
}

CdfCovariance::CdfCovariance(const DrmFit& fit, std::size_t r)
    : r_(r), cdf_(cdf_estimate(fit, r)) {
  const auto& data = fit.data_ref();
  if (r >= data.num_groups()) throw ConfigError("group index out of range");
  rho_r_ = data.rho()[r];
  w_llt_ = factor_W(estimate_W(fit));

  const auto n = data.n();
  const auto m = data.m();
  const auto d = static_cast<Eigen::Index>(data.d());
  const double inv_n = 1.0 / static_cast<double>(n);
  MixtureTerms terms = mixture_terms(fit.theta_hat, data);
  const auto& order = data.sorted_order();

  sorted_values_.resize(n);
  a_cum_.assign(n + 1, 0.0);
  b_cum_.setZero(static_cast<Eigen::Index>(m) * d, static_cast<Eigen::Index>(n + 1));
  const auto rr = static_cast<Eigen::Index>(r);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = static_cast<Eigen::Index>(order[i]);
    const auto col = static_cast<Eigen::Index>(i);
    sorted_values_[i] = data.values()[order[i]];
    const double hr = terms.weights(row, rr);
    a_cum_[i + 1] = a_cum_[i] + (hr - hr * hr) * inv_n;
    b_cum_.col(col + 1) = b_cum_.col(col);
    for (std::size_t s = 1; s <= m; ++s) {
      const double hs = terms.weights(row, static_cast<Eigen::Index>(s));
      const double w = (s == r ? hr : 0.0) - hr * hs;
      b_cum_.block(static_cast<Eigen::Index>(s - 1) * d, col + 1, d, 1) +=
          (w * inv_n) * data.Q().row(row).transpose();
    }
  }
}

std::size_t CdfCovariance::count_le(double x) const {
  return static_cast<std::size_t>(std::upper_bound(sorted_values_.begin(), sorted_values_.end(), x) -
                                  sorted_values_.begin());
}

double CdfCovariance::sigma(double x, double y) const {
  return (cdf_(std::min(x, y)) - cdf_(x) * cdf_(y)) / rho_r_;
}

double CdfCovariance::a(double x) const { return a_cum_[count_le(x)]; }

Eigen::VectorXd CdfCovariance::B(double x) const {
  return b_cum_.col(static_cast<Eigen::Index>(count_le(x)));
}

double CdfCovariance::operator()(double x, double y) const {
  const Eigen::VectorXd bx = B(x);
  const Eigen::VectorXd by = B(y);
  // Symmetrize the quadratic form so omega(x,y) == omega(y,x) bitwise.
  const double quad = 0.5 * (bx.dot(w_llt_.solve(by)) + by.dot(w_llt_.solve(bx)));
  return sigma(x, y) - (a(std::min(x, y)) - quad) / (rho_r_ * rho_r_);
}

void CdfCovariance::write_grid_csv(std::ostream& os, std::span<const double> xs) const {
  os << "x,y,omega\n";
  for (double x : xs) {
    for (double y : xs) {
      os << format_double(x) << ',' << format_double(y) << ',' << format_double((*this)(x, y)) << '\n';
    }
  }
}

double cdf_covariance(const DrmFit& fit, std::size_t r, double x, double y) {
  return CdfCovariance(fit, r)(x, y);
}

}  // namespace drmel
