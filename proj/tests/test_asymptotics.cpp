#include <cmath>
#include <memory>
#include <sstream>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "drmel/asymptotics.hpp"
#include "drmel/error.hpp"
#include "drmel/estimators.hpp"
#include "drmel/likelihood.hpp"
#include "drmel/optimizer.hpp"
#include "drmel/rng.hpp"
#include "drmel/scenario.hpp"

using namespace drmel;

namespace {

std::shared_ptr<const MultiSampleData> share(MultiSampleData d) {
  return std::make_shared<const MultiSampleData>(std::move(d));
}

DrmFit identical_fit() {
  const std::vector<double> pts{2.5, 0.5, 1.5, 1.75, 3.0, 4.25, 0.75, 2.0, 5.5, 3.5};
  return fit_mele(share(MultiSampleData::build({pts, pts}, BasisSpec::parse("const,x"))));
}

}  // namespace

TEST(BuildS, TwoGroupsHalfHalf) {
  const std::vector<double> rho{0.5, 0.5};
  const auto s = build_S(rho, 2);
  Eigen::Matrix2d expect;
  expect << 4, 0, 0, 0;
  EXPECT_EQ(s, expect);
}

TEST(BuildS, ThreeGroupsThirds) {
  const std::vector<double> rho{1.0 / 3, 1.0 / 3, 1.0 / 3};
  const auto s = build_S(rho, 1);
  EXPECT_NEAR(s(0, 0), 6.0, 1e-14);
  EXPECT_NEAR(s(0, 1), 3.0, 1e-14);
  EXPECT_NEAR(s(1, 0), 3.0, 1e-14);
  EXPECT_NEAR(s(1, 1), 6.0, 1e-14);
}

TEST(BuildS, SymmetricWithSparsePattern) {
  const std::vector<double> rho{0.1, 0.2, 0.3, 0.4};
  const auto s = build_S(rho, 3);
  EXPECT_EQ(s, s.transpose());
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    for (Eigen::Index j = 0; j < s.cols(); ++j) {
      if (i % 3 != 0 || j % 3 != 0) {
        EXPECT_EQ(s(i, j), 0.0);
      } else {
        const double expect = 1.0 / rho[0] + (i == j ? 1.0 / rho[static_cast<std::size_t>(i / 3 + 1)] : 0.0);
        EXPECT_DOUBLE_EQ(s(i, j), expect);
      }
    }
  }
}

TEST(EstimateW, ClosedFormAtZero) {
  const auto fit = identical_fit();
  ASSERT_TRUE(fit.converged);
  const auto w = estimate_W(fit);
  Eigen::Matrix2d qq = Eigen::Matrix2d::Zero();
  for (double x : fit.data_ref().values()) {
    Eigen::Vector2d q(1.0, x);
    qq += q * q.transpose();
  }
  qq *= 0.25 / 20.0;
  EXPECT_LT((w - qq).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(EstimateW, EqualsNegativeScaledHessian) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto fit = fit_mele(share(generate(ScenarioSpec::gamma1(), seed)));
    ASSERT_TRUE(fit.converged);
    const auto w = estimate_W(fit);
    const auto h = dual_logel_hessian(fit.theta_hat, fit.data_ref());
    EXPECT_LE((w + h / static_cast<double>(fit.data_ref().n())).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE((w - w.transpose()).cwiseAbs().maxCoeff(), 1e-10);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(w);
    EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0);
  }
}

TEST(EstimateW, StabilizesWithSampleSize) {
  // E||W1 - W2||_F^2 scales as 1/n, so doubling n halves it.
  const auto base = ScenarioSpec::gamma1();
  double sq[2] = {0.0, 0.0};
  const int seeds = 20;
  for (int scale = 1; scale <= 2; ++scale) {
    const auto spec = base.scaled(static_cast<double>(scale));
    for (int i = 0; i < seeds; ++i) {
      const auto fa = fit_mele(share(generate(spec, derive_seed(77, {static_cast<std::uint64_t>(i), 0, static_cast<std::uint64_t>(scale)}))));
      const auto fb = fit_mele(share(generate(spec, derive_seed(77, {static_cast<std::uint64_t>(i), 1, static_cast<std::uint64_t>(scale)}))));
      ASSERT_TRUE(fa.converged && fb.converged);
      sq[scale - 1] += (estimate_W(fa) - estimate_W(fb)).squaredNorm() / seeds;
    }
  }
  const double ratio = sq[1] / sq[0];
  EXPECT_GT(ratio, 0.3) << ratio;
  EXPECT_LT(ratio, 0.7) << ratio;
}

TEST(ParamCovariance, AddingSRecoversWInverse) {
  const auto fit = fit_mele(share(generate(ScenarioSpec::normal2(), 4)));
  ASSERT_TRUE(fit.converged);
  const auto cov = param_covariance(fit);
  const Eigen::MatrixXd w_inv = cov.W_hat.inverse();
  const Eigen::MatrixXd back = cov.param_cov + cov.S;
  for (Eigen::Index i = 0; i < back.rows(); ++i) {
    for (Eigen::Index j = 0; j < back.cols(); ++j) {
      EXPECT_NEAR(back(i, j), w_inv(i, j), 1e-9 * (1.0 + std::abs(w_inv(i, j))));
    }
  }
  EXPECT_EQ(cov.param_cov, cov.param_cov.transpose());
}

TEST(ParamCovariance, IdenticalGroupsMonteCarlo) {
  // m = 1, both groups N(0,1), q = (1, x), theta = 0. Compare the sampling
  // variance of sqrt(n) theta_hat with the plug-in averaged over the fits.
  const BasisSpec basis = BasisSpec::parse("const,x");
  const int reps = 400;
  const std::size_t nk = 200;
  std::vector<double> t0, t1;
  Eigen::MatrixXd plug = Eigen::MatrixXd::Zero(2, 2);
  for (int i = 0; i < reps; ++i) {
    RngStream rng(derive_seed(5150, {static_cast<std::uint64_t>(i)}));
    std::vector<double> a(nk), b(nk);
    for (auto& x : a) x = rng.normal();
    for (auto& x : b) x = rng.normal();
    const auto fit = fit_mele(share(MultiSampleData::build({a, b}, basis)));
    ASSERT_TRUE(fit.converged);
    const double rn = std::sqrt(static_cast<double>(2 * nk));
    t0.push_back(rn * fit.theta_hat(1, 0));
    t1.push_back(rn * fit.theta_hat(1, 1));
    plug += param_covariance(fit).param_cov / reps;
  }
  auto var = [](const std::vector<double>& v) {
    double mean = 0.0, ss = 0.0;
    for (double x : v) mean += x / static_cast<double>(v.size());
    for (double x : v) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(v.size() - 1);
  };
  // At theta = 0 with unit-variance draws, W = 1/4 diag(1, 1) and the (1,1)
  // entry of W^{-1} - S is 4 - 4 = 0; the x coordinate carries 4.
  EXPECT_NEAR(plug(1, 1), 4.0, 0.25 * 4.0);
  EXPECT_NEAR(var(t1), plug(1, 1), 0.25 * plug(1, 1));
  EXPECT_LT(std::abs(plug(0, 0)), 0.5);
  EXPECT_LT(var(t0), 0.5);
}

TEST(CdfCovariance, SymmetricAndNonnegativeOnDiagonal) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto fit = fit_mele(share(generate(ScenarioSpec::normal2(), seed)));
    ASSERT_TRUE(fit.converged);
    for (std::size_t r : {std::size_t{0}, std::size_t{3}, std::size_t{6}}) {
      const CdfCovariance omega(fit, r);
      for (double x = 5.0; x <= 22.0; x += 0.5) {
        EXPECT_GE(omega(x, x), -1e-8) << "r=" << r << " x=" << x;
        for (double y = 5.0; y <= 22.0; y += 1.25) EXPECT_EQ(omega(x, y), omega(y, x));
      }
    }
  }
}

TEST(CdfCovariance, ConstantBeyondSupportMaximum) {
  const auto fit = fit_mele(share(generate(ScenarioSpec::gamma1(), 8)));
  ASSERT_TRUE(fit.converged);
  const CdfCovariance omega(fit, 2);
  const double top = omega.cdf().support().back();
  const double x = omega.cdf().quantile(0.3);
  double prev = omega(x, top);
  for (double y = top; y < top + 10.0; y += 0.5) {
    const double v = omega(x, y);
    EXPECT_LE(v, prev);
    prev = v;
  }
  EXPECT_NEAR(omega(top + 1, top + 1), 0.0, 1e-8);
}

TEST(CdfCovariance, ClosedFormAtZero) {
  // theta = 0, rho = (1/2, 1/2): h_r = 1/2, so a_r = F_n / 4,
  // B_1 = +1/4 * mean q 1{t <= x}, B_0 = -1/4 * mean q 1{t <= x},
  // W = 1/4 * mean q q', sigma_r = 2 (F_n(x^y) - F_n(x) F_n(y)).
  const auto fit = identical_fit();
  ASSERT_TRUE(fit.converged);
  const auto& vals = fit.data_ref().values();
  const double n = 20.0;
  Eigen::Matrix2d w = Eigen::Matrix2d::Zero();
  for (double t : vals) {
    Eigen::Vector2d q(1.0, t);
    w += 0.25 * q * q.transpose() / n;
  }
  auto fn = [&](double x) {
    double c = 0;
    for (double t : vals) c += t <= x ? 1.0 : 0.0;
    return c / n;
  };
  auto bvec = [&](double x, double sign) {
    Eigen::Vector2d b = Eigen::Vector2d::Zero();
    for (double t : vals) {
      if (t <= x) b += sign * 0.25 * Eigen::Vector2d(1.0, t) / n;
    }
    return b;
  };
  for (std::size_t r = 0; r < 2; ++r) {
    const CdfCovariance omega(fit, r);
    const double sign = r == 1 ? 1.0 : -1.0;
    for (double x : {0.5, 1.6, 2.0, 3.2, 5.5}) {
      EXPECT_NEAR(omega.a(x), fn(x) / 4.0, 1e-14);
      EXPECT_LT((omega.B(x) - bvec(x, sign)).cwiseAbs().maxCoeff(), 1e-14);
      for (double y : {0.75, 2.5, 4.0}) {
        const double sig = 2.0 * (fn(std::min(x, y)) - fn(x) * fn(y));
        const double quad = bvec(x, sign).dot(w.inverse() * bvec(y, sign));
        const double expect = sig - 4.0 * (fn(std::min(x, y)) / 4.0 - quad);
        EXPECT_NEAR(omega(x, y), expect, 1e-12);
        EXPECT_NEAR(omega.sigma(x, y), sig, 1e-14);
      }
    }
  }
}

TEST(CdfCovariance, MonteCarloScenarioTwo) {
  // Sampling variance of sqrt(n)(F_r(x) - F_r(x)) at x = Q_0(0.5) against
  // the plug-in omega_r(x, x), averaged over the same fits.
  const auto spec = ScenarioSpec::normal2();
  const double x = spec.groups[0].quantile(0.5);
  const int reps = 500;
  const std::vector<std::size_t> groups{0, 3, 6};
  std::vector<std::vector<double>> dev(groups.size());
  std::vector<double> plug(groups.size(), 0.0);
  for (int i = 0; i < reps; ++i) {
    const auto fit = fit_mele(share(generate(spec, derive_seed(4242, {static_cast<std::uint64_t>(i)}))));
    ASSERT_TRUE(fit.converged);
    const double rn = std::sqrt(static_cast<double>(fit.data_ref().n()));
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const CdfCovariance omega(fit, groups[g]);
      dev[g].push_back(rn * (omega.cdf()(x) - spec.groups[groups[g]].cdf(x)));
      plug[g] += omega(x, x) / reps;
    }
  }
  for (std::size_t g = 0; g < groups.size(); ++g) {
    double mean = 0.0, ss = 0.0;
    for (double v : dev[g]) mean += v / reps;
    for (double v : dev[g]) ss += (v - mean) * (v - mean);
    const double var = ss / (reps - 1);
    EXPECT_NEAR(var, plug[g], 0.25 * plug[g]) << "group " << groups[g];
  }
}

TEST(CdfCovariance, GridCsv) {
  const auto fit = identical_fit();
  const CdfCovariance omega(fit, 1);
  std::ostringstream os;
  const std::vector<double> xs{1.0, 2.0};
  omega.write_grid_csv(os, xs);
  const std::string s = os.str();
  EXPECT_EQ(s.substr(0, 11), "x,y,omega\n1");
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 5);
}

TEST(Asymptotics, RefuseUnconvergedFit) {
  FitOptions opts;
  opts.max_iter = 1;
  const auto fit = fit_mele(share(generate(ScenarioSpec::gamma1(), 3)), opts);
  ASSERT_FALSE(fit.converged);
  EXPECT_THROW(estimate_W(fit), ConfigError);
  EXPECT_THROW(param_covariance(fit), ConfigError);
}
