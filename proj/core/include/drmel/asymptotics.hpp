#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "drmel/optimizer.hpp"
#include "drmel/step_cdf.hpp"

namespace drmel {

// Plug-in curvature W_hat = n^{-1} sum q q' (delta_rs h_r - h_r h_s) at
// theta_hat, i.e. -(1/n) times the dual log-EL Hessian. Throws FitError if
// the result is not positive definite.
Eigen::MatrixXd estimate_W(const DrmFit& fit);

// S_rs = (delta_rs / rho_r + 1 / rho_0) e1 e1', r,s = 1..m, as an md x md
// matrix (only the first coordinate of each block is nonzero).
Eigen::MatrixXd build_S(std::span<const double> rho, std::size_t d);

struct CovarianceEstimates {
  Eigen::MatrixXd W_hat;
  Eigen::MatrixXd S;
  Eigen::MatrixXd param_cov;  // W_hat^{-1} - S
  // param_cov has a negative eigenvalue; reported, never projected away.
  bool indefinite = false;
};

// Asymptotic covariance of sqrt(n)(theta_hat - theta).
CovarianceEstimates param_covariance(const DrmFit& fit);

// Plug-in covariance kernel of sqrt(n)(F_r - F_r) at theta_hat:
//   omega_r(x,y) = sigma_r(x,y) - rho_r^{-2} { a_r(x^y) - B_r(x)' W^{-1} B_r(y) }
// with every integral against dF-bar replaced by the pooled sample average.
class CdfCovariance {
 public:
  CdfCovariance(const DrmFit& fit, std::size_t r);

  double operator()(double x, double y) const;

  double sigma(double x, double y) const;
  double a(double x) const;
  Eigen::VectorXd B(double x) const;

  const StepCdf& cdf() const { return cdf_; }
  std::size_t group() const { return r_; }

  // CSV with header "x,y,omega" over the product grid xs x xs.
  void write_grid_csv(std::ostream& os, std::span<const double> xs) const;

 private:
  // Number of pooled sorted observations <= x.
  std::size_t count_le(double x) const;

  std::size_t r_;
  double rho_r_;
  StepCdf cdf_;
  std::vector<double> sorted_values_;
  std::vector<double> a_cum_;   // prefix sums, length n+1
  Eigen::MatrixXd b_cum_;       // md x (n+1) prefix sums
  Eigen::LLT<Eigen::MatrixXd> w_llt_;
};

double cdf_covariance(const DrmFit& fit, std::size_t r, double x, double y);

}  // namespace drmel
