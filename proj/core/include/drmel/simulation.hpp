#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "drmel/bootstrap.hpp"
#include "drmel/scenario.hpp"

namespace drmel {

struct CoverageTarget {
  FunctionalSpec functional = FunctionalSpec::theta(1, 1);
  double truth = 0.0;
  std::string row;     // table row label, e.g. "theta_r1", "Q(p=0.5)"
  std::string column;  // table column label, e.g. "F1"
};

// theta_{rs} for r = 1..m, s = 1..d.
std::vector<CoverageTarget> theta_targets(const ScenarioSpec& spec);
// F_r(x) at x = Q_0(p) (true baseline quantile), r = 0..m.
std::vector<CoverageTarget> cdf_targets(const ScenarioSpec& spec, const std::vector<double>& levels);
// Q_r(p), r = 0..m.
std::vector<CoverageTarget> quantile_targets(const ScenarioSpec& spec, const std::vector<double>& levels);
// gamma(F_r, F_s) for r < s.
std::vector<CoverageTarget> dominance_targets(const ScenarioSpec& spec);
CoverageTarget make_target(const ScenarioSpec& spec, const FunctionalSpec& functional);

struct CoverageOptions {
  std::size_t runs = 300;
  std::size_t B = 399;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  FitOptions fit;
  // Test hook: replaces each run's CI before it is checked against the truth.
  std::function<ConfidenceInterval(const ConfidenceInterval& ci, double xi_hat)> ci_override;
};

struct TargetCoverage {
  CoverageTarget target;
  std::size_t covered = 0;
  std::size_t runs = 0;
  double coverage = 0.0;
  double mc_se = 0.0;  // sqrt(c (1 - c) / runs)
};

struct CoverageReport {
  std::string scenario;
  std::size_t N_runs = 0;
  std::size_t B = 0;
  double nominal = 0.95;
  std::uint64_t seed = 0;
  std::size_t failed_runs = 0;
  std::size_t failed_replicates = 0;
  std::vector<std::string> failures;
  std::vector<TargetCoverage> targets;

  nlohmann::ordered_json to_json() const;
  // Table layout: one row per row label, one column per group label.
  void write_csv(std::ostream& os) const;
};

// Run i generates data from derive_seed(seed, {i, 0}), fits, bootstraps with
// seed derive_seed(seed, {i, 1}), and checks every target's percentile CI.
CoverageReport coverage_experiment(const ScenarioSpec& spec, const std::vector<CoverageTarget>& targets,
                                   const CoverageOptions& opts);

}  // namespace drmel
