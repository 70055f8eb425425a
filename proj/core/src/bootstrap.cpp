#include "drmel/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>

#include "drmel/csv_writer.hpp"
#include "drmel/error.hpp"
#include "drmel/parallel.hpp"

namespace drmel {

namespace {

constexpr double kWarnFailureFraction = 0.05;
constexpr double kMaxFailureFraction = 0.5;

struct ReplicateOutcome {
  std::optional<std::vector<double>> values;
  std::string failure;
};

}  // namespace

MultiSampleData resample(const MultiSampleData& data, RngStream& rng) {
  std::vector<std::vector<std::size_t>> rows(data.num_groups());
  for (std::size_t k = 0; k < data.num_groups(); ++k) {
    const auto nk = data.group_size(k);
    rows[k].resize(nk);
    for (auto& j : rows[k]) j = rng.index(nk);
  }
  return data.gather(rows);
}

BootstrapResult bootstrap_run(const DrmFit& fit, const std::vector<FunctionalSpec>& functionals,
                              const BootstrapOptions& opts) {
  if (!fit.converged) throw ConfigError("bootstrap requires a converged fit");
  if (opts.B < 1) throw ConfigError("bootstrap needs B >= 1");
  const auto& data = fit.data_ref();
  for (const auto& f : functionals) f.validate(data.m(), data.d());
  for (double a : opts.alphas) {
    if (!(a > 0.0 && a < 1.0)) throw ConfigError("alpha must be in (0,1)");
  }

  FitOptions refit = opts.fit;
  refit.warm_start = fit.theta_hat;

  std::vector<ReplicateOutcome> outcomes(opts.B);
  parallel_for(opts.B, opts.workers, [&](std::size_t b) {
    RngStream rng = RngStream::substream(opts.seed, {b});
    auto boot = std::make_shared<const MultiSampleData>(resample(data, rng));
    try {
      DrmFit rep = fit_mele(boot, refit);
      if (!rep.converged) {
        outcomes[b].failure = "did not converge in " + std::to_string(rep.iterations) + " iterations";
        return;
      }
      FunctionalEvaluator eval(rep);
      std::vector<double> values;
      values.reserve(functionals.size());
      for (const auto& f : functionals) values.push_back(eval(f));
      outcomes[b].values = std::move(values);
    } catch (const Error& e) {
      outcomes[b].failure = e.what();
    }
  });

  BootstrapResult result;
  FunctionalEvaluator original(fit);
  result.summaries.resize(functionals.size());
  for (std::size_t f = 0; f < functionals.size(); ++f) {
    auto& s = result.summaries[f];
    s.functional = functionals[f];
    s.xi_hat = original(functionals[f]);
    s.B_requested = opts.B;
    s.seed = opts.seed;
  }
  for (std::size_t b = 0; b < opts.B; ++b) {
    if (!outcomes[b].values) {
      result.failures.push_back({b, outcomes[b].failure});
      continue;
    }
    result.replicate_ids.push_back(b);
    for (std::size_t f = 0; f < functionals.size(); ++f) {
      result.summaries[f].replicates.push_back((*outcomes[b].values)[f]);
    }
  }

  const double fail_frac = static_cast<double>(result.failures.size()) / static_cast<double>(opts.B);
  if (fail_frac > kMaxFailureFraction) {
    std::ostringstream os;
    os << result.failures.size() << " of " << opts.B
       << " bootstrap refits failed; first failure: " << result.failures.front().reason;
    throw BootstrapError(os.str());
  }
  for (auto& s : result.summaries) {
    s.B_failed = result.failures.size();
    s.reliability_warning = fail_frac > kWarnFailureFraction;
    if (s.replicates.size() >= 2) {
      for (double a : opts.alphas) s.ci.push_back(percentile_ci(s, a));
    }
  }
  return result;
}

ConfidenceInterval percentile_ci(const BootstrapSummary& summary, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must be in (0,1)");
  const auto b_eff = summary.replicates.size();
  if (b_eff < 2) throw BootstrapError("percentile CI needs at least two successful replicates");

  std::vector<double> diffs(b_eff);
  for (std::size_t i = 0; i < b_eff; ++i) diffs[i] = summary.replicates[i] - summary.xi_hat;
  std::sort(diffs.begin(), diffs.end());

  // The 1e-9 slack keeps exact products such as 0.025 * 1000 from rounding up.
  const double tail = 0.5 * alpha * static_cast<double>(b_eff);
  auto k = static_cast<std::size_t>(std::ceil(tail - 1e-9));
  k = std::clamp<std::size_t>(k, 1, b_eff);
  const double q_lo = diffs[k - 1];
  const double q_hi = diffs[b_eff - k];

  ConfidenceInterval ci;
  ci.alpha = alpha;
  ci.lower = summary.xi_hat - q_hi;
  ci.upper = summary.xi_hat - q_lo;
  return ci;
}

void write_replicates_csv(std::ostream& os, const BootstrapResult& result) {
  std::vector<std::string> header{"replicate"};
  for (const auto& s : result.summaries) header.push_back(s.functional.to_string());
  write_csv_row(os, header);
  for (std::size_t i = 0; i < result.replicate_ids.size(); ++i) {
    std::vector<std::string> row{std::to_string(result.replicate_ids[i])};
    for (const auto& s : result.summaries) row.push_back(format_double(s.replicates[i]));
    write_csv_row(os, row);
  }
}

}  // namespace drmel
