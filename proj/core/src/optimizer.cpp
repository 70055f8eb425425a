#include "drmel/optimizer.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "drmel/error.hpp"
#include "drmel/likelihood.hpp"

namespace drmel {

namespace {

constexpr double kArmijo = 1e-4;
// Smallest/largest eigenvalue ratio of the Jacobi-scaled curvature below
// which the problem is treated as rank deficient.
constexpr double kSingularRatio = 1e-12;
constexpr double kMaxRidge = 1e-2;

double inf_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

struct ScaledCurvature {
  Eigen::MatrixXd matrix;  // D (-H) D with unit diagonal
  Eigen::VectorXd scale;   // D
};

// Jacobi-scales -H and rejects rank-deficient curvature.
ScaledCurvature scaled_curvature(const Eigen::MatrixXd& hessian) {
  const Eigen::Index p = hessian.rows();
  Eigen::MatrixXd curv = -hessian;
  ScaledCurvature out;
  out.scale.resize(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    if (!(curv(i, i) > 0.0) || !std::isfinite(curv(i, i))) {
      throw FitError("curvature has a non-positive diagonal entry; basis rows are degenerate");
    }
    out.scale(i) = 1.0 / std::sqrt(curv(i, i));
  }
  out.matrix = out.scale.asDiagonal() * curv * out.scale.asDiagonal();
  out.matrix = 0.5 * (out.matrix + out.matrix.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(out.matrix, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > kSingularRatio * hi)) {
    std::ostringstream os;
    os << "singular curvature (eigenvalue ratio " << lo / hi
       << "); basis rows are collinear";
    throw FitError(os.str());
  }
  return out;
}

// Newton direction for maximizing: solves (-H) dir = g on the scaled
// system, adding a ridge if the Cholesky factorization fails.
Eigen::VectorXd newton_direction(const Eigen::MatrixXd& hessian, const Eigen::VectorXd& grad,
                                 double ridge0) {
  const Eigen::Index p = grad.size();
  const ScaledCurvature curv = scaled_curvature(hessian);
  const Eigen::VectorXd rhs = curv.scale.asDiagonal() * grad;
  Eigen::LLT<Eigen::MatrixXd> llt(curv.matrix);
  double ridge = ridge0;
  while (llt.info() != Eigen::Success) {
    if (ridge > kMaxRidge) throw FitError("Newton system stayed singular after ridge escalation");
    llt.compute(curv.matrix + ridge * Eigen::MatrixXd::Identity(p, p));
    ridge *= 10.0;
  }
  return curv.scale.asDiagonal() * llt.solve(rhs);
}

}  // namespace

void FitOptions::validate() const {
  if (max_iter < 1) throw ConfigError("max_iter must be >= 1");
  if (!(grad_tol > 0.0) || !(step_tol > 0.0) || !(ridge > 0.0)) {
    throw ConfigError("tolerances and ridge must be positive");
  }
  if (warm_start && !warm_start->all_finite()) throw ConfigError("warm start is not finite");
}

DrmFit fit_mele(std::shared_ptr<const MultiSampleData> data, const FitOptions& opts) {
  opts.validate();
  const auto& d = *data;
  const double n = static_cast<double>(d.n());

  DrmFit fit;
  fit.data = data;
  ParamBlock theta = opts.warm_start ? *opts.warm_start : ParamBlock::zeros(d.m(), d.d());
  if (theta.m() != d.m() || theta.d() != d.d()) throw ConfigError("warm start has wrong shape");

  LikelihoodEval cur = evaluate_dual_logel(theta, d, Derivatives::Hessian);
  fit.trace.push_back(cur.value);
  scaled_curvature(cur.hessian);

  int iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    if (inf_norm(cur.gradient) <= opts.grad_tol * n) break;

    const Eigen::VectorXd dir = newton_direction(cur.hessian, cur.gradient, opts.ridge);
    const double slope = cur.gradient.dot(dir);
    const Eigen::VectorXd base = theta.flat();
    const double dir_norm = inf_norm(dir);
    const double tiny = opts.step_tol * (1.0 + inf_norm(base));
    const double noise = evaluation_noise(cur.value, d.n());

    double t = 1.0;
    bool accepted = false;
    ParamBlock candidate;
    LikelihoodEval cand;
    while (t * dir_norm > tiny) {
      candidate = ParamBlock::from_flat(d.m(), d.d(), base + t * dir);
      bool finite = true;
      try {
        cand = evaluate_dual_logel(candidate, d, Derivatives::Gradient);
      } catch (const EvaluationError&) {
        finite = false;
      }
      if (finite && cand.value >= cur.value + kArmijo * t * slope) {
        accepted = true;
        break;
      }
      if (finite && t == 1.0 && slope <= noise) {
        // The predicted gain is below the rounding level of l_n, so the
        // Armijo test cannot discriminate; take the full Newton step if it
        // shrinks the gradient without a visible loss.
        if (inf_norm(cand.gradient) < inf_norm(cur.gradient) && cand.value >= cur.value - noise) {
          accepted = true;
          break;
        }
      }
      t *= 0.5;
    }
    if (!accepted) break;  // stagnated at floating-point resolution

    theta = std::move(candidate);
    cur = std::move(cand);
    fit.trace.push_back(cur.value);
    if (inf_norm(cur.gradient) > opts.grad_tol * n) cur.hessian = dual_logel_hessian(theta, d);
  }

  fit.grad_norm = inf_norm(cur.gradient);
  fit.converged = fit.grad_norm <= opts.grad_tol * n;
  fit.iterations = iter;
  fit.loglik = cur.value;
  fit.theta_hat = std::move(theta);
  return fit;
}

}  // namespace drmel
