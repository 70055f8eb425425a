#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "drmel/functional.hpp"
#include "drmel/optimizer.hpp"
#include "drmel/rng.hpp"

namespace drmel {

struct ConfidenceInterval {
  double alpha = 0.05;
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double v) const { return lower <= v && v <= upper; }
};

struct BootstrapSummary {
  FunctionalSpec functional = FunctionalSpec::theta(1, 1);
  double xi_hat = 0.0;
  // Successful replicates only, in replicate-index order.
  std::vector<double> replicates;
  std::size_t B_requested = 0;
  std::size_t B_failed = 0;
  std::uint64_t seed = 0;
  std::vector<ConfidenceInterval> ci;
  // Set when more than 5% of replicates failed.
  bool reliability_warning = false;
};

struct FailedReplicate {
  std::size_t index = 0;
  std::string reason;
};

struct BootstrapOptions {
  std::size_t B = 999;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::vector<double> alphas{0.05};
  // warm_start is overwritten with the original theta_hat.
  FitOptions fit;
};

struct BootstrapResult {
  std::vector<BootstrapSummary> summaries;  // one per requested functional
  std::vector<std::size_t> replicate_ids;   // successful replicate indices
  std::vector<FailedReplicate> failures;    // sorted by index
};

// Per-group resampling with replacement: n_k draws from group k. Group sizes
// and rho are preserved; basis rows are gathered rather than re-evaluated.
MultiSampleData resample(const MultiSampleData& data, RngStream& rng);

// Replicate b draws from RngStream::substream(seed, {b}), so the output is
// independent of worker count and scheduling. Failed refits are logged and
// dropped; more than half failing raises BootstrapError.
BootstrapResult bootstrap_run(const DrmFit& fit, const std::vector<FunctionalSpec>& functionals,
                              const BootstrapOptions& opts);

// [xi_hat - q_{1-alpha/2}, xi_hat - q_{alpha/2}] where q are order statistics
// of the differences xi* - xi_hat: q_{alpha/2} is the k-th smallest and
// q_{1-alpha/2} the k-th largest, k = ceil(alpha/2 * B_eff).
ConfidenceInterval percentile_ci(const BootstrapSummary& summary, double alpha);

// One row per successful replicate, one column per functional.
void write_replicates_csv(std::ostream& os, const BootstrapResult& result);

}  // namespace drmel
