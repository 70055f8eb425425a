#include "drmel/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "drmel/csv_writer.hpp"
#include "drmel/error.hpp"
#include "drmel/parallel.hpp"

namespace drmel {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string group_label(std::size_t r) { return "F" + std::to_string(r); }

std::string level_label(double p) {
  std::ostringstream os;
  os << p;
  return os.str();
}

struct RunOutcome {
  bool ok = false;
  std::string failure;
  std::vector<char> covered;
  std::size_t failed_replicates = 0;
};

}  // namespace

CoverageTarget make_target(const ScenarioSpec& spec, const FunctionalSpec& functional) {
  CoverageTarget t;
  t.functional = functional;
  t.truth = true_value(spec, functional);
  std::visit(overloaded{
                 [&](const ThetaComponent& c) {
                   t.row = "theta_r" + std::to_string(c.s);
                   t.column = group_label(c.r);
                 },
                 [&](const CdfAt& c) {
                   t.row = "F(x=" + format_double(c.x) + ")";
                   t.column = group_label(c.r);
                 },
                 [&](const QuantileAt& c) {
                   t.row = "Q(p=" + level_label(c.p) + ")";
                   t.column = group_label(c.r);
                 },
                 [&](const DominanceOf& c) {
                   t.row = "gamma(" + group_label(c.r) + ",.)";
                   t.column = group_label(c.s);
                 },
             },
             functional.kind());
  return t;
}

std::vector<CoverageTarget> theta_targets(const ScenarioSpec& spec) {
  std::vector<CoverageTarget> out;
  for (std::size_t s = 1; s <= spec.basis.dim(); ++s) {
    for (std::size_t r = 1; r <= spec.m(); ++r) out.push_back(make_target(spec, FunctionalSpec::theta(r, s)));
  }
  return out;
}

std::vector<CoverageTarget> cdf_targets(const ScenarioSpec& spec, const std::vector<double>& levels) {
  std::vector<CoverageTarget> out;
  for (double p : levels) {
    const double x = spec.groups[0].quantile(p);
    for (std::size_t r = 0; r <= spec.m(); ++r) {
      auto t = make_target(spec, FunctionalSpec::cdf(r, x));
      t.row = "x=Q0(" + level_label(p) + ")";
      out.push_back(std::move(t));
    }
  }
  return out;
}

std::vector<CoverageTarget> quantile_targets(const ScenarioSpec& spec, const std::vector<double>& levels) {
  std::vector<CoverageTarget> out;
  for (double p : levels) {
    for (std::size_t r = 0; r <= spec.m(); ++r) out.push_back(make_target(spec, FunctionalSpec::quantile(r, p)));
  }
  return out;
}

std::vector<CoverageTarget> dominance_targets(const ScenarioSpec& spec) {
  std::vector<CoverageTarget> out;
  for (std::size_t r = 0; r <= spec.m(); ++r) {
    for (std::size_t s = r + 1; s <= spec.m(); ++s) out.push_back(make_target(spec, FunctionalSpec::dominance(r, s)));
  }
  return out;
}

CoverageReport coverage_experiment(const ScenarioSpec& spec, const std::vector<CoverageTarget>& targets,
                                   const CoverageOptions& opts) {
  if (opts.runs < 1) throw ConfigError("coverage experiment needs at least one run");
  if (!(opts.alpha > 0.0 && opts.alpha < 1.0)) throw ConfigError("alpha must be in (0,1)");
  std::vector<FunctionalSpec> functionals;
  for (const auto& t : targets) {
    t.functional.validate(spec.m(), spec.basis.dim());
    functionals.push_back(t.functional);
  }

  std::vector<RunOutcome> outcomes(opts.runs);
  parallel_for(opts.runs, opts.workers, [&](std::size_t i) {
    auto& out = outcomes[i];
    try {
      auto data = std::make_shared<const MultiSampleData>(generate(spec, derive_seed(opts.seed, {i, 0})));
      DrmFit fit = fit_mele(data, opts.fit);
      if (!fit.converged) {
        out.failure = "run " + std::to_string(i) + ": fit did not converge";
        return;
      }
      BootstrapOptions bopts;
      bopts.B = opts.B;
      bopts.seed = derive_seed(opts.seed, {i, 1});
      bopts.workers = 1;
      bopts.alphas = {opts.alpha};
      bopts.fit = opts.fit;
      BootstrapResult boot = bootstrap_run(fit, functionals, bopts);
      out.failed_replicates = boot.failures.size();
      out.covered.resize(targets.size());
      for (std::size_t t = 0; t < targets.size(); ++t) {
        const auto& summary = boot.summaries[t];
        if (summary.ci.empty()) throw BootstrapError("fewer than two successful replicates");
        ConfidenceInterval ci = summary.ci.front();
        if (opts.ci_override) ci = opts.ci_override(ci, summary.xi_hat);
        out.covered[t] = ci.contains(targets[t].truth) ? 1 : 0;
      }
      out.ok = true;
    } catch (const Error& e) {
      out.failure = "run " + std::to_string(i) + ": " + e.what();
    }
  });

  CoverageReport report;
  report.scenario = spec.name;
  report.N_runs = opts.runs;
  report.B = opts.B;
  report.nominal = 1.0 - opts.alpha;
  report.seed = opts.seed;
  report.targets.resize(targets.size());
  for (std::size_t t = 0; t < targets.size(); ++t) report.targets[t].target = targets[t];
  for (const auto& out : outcomes) {
    if (!out.ok) {
      ++report.failed_runs;
      report.failures.push_back(out.failure);
      continue;
    }
    report.failed_replicates += out.failed_replicates;
    for (std::size_t t = 0; t < targets.size(); ++t) {
      report.targets[t].runs += 1;
      report.targets[t].covered += static_cast<std::size_t>(out.covered[t]);
    }
  }
  for (auto& tc : report.targets) {
    if (tc.runs == 0) continue;
    tc.coverage = static_cast<double>(tc.covered) / static_cast<double>(tc.runs);
    tc.mc_se = std::sqrt(tc.coverage * (1.0 - tc.coverage) / static_cast<double>(tc.runs));
  }
  return report;
}

nlohmann::ordered_json CoverageReport::to_json() const {
  nlohmann::ordered_json j;
  j["scenario"] = scenario;
  j["N_runs"] = N_runs;
  j["B"] = B;
  j["nominal"] = nominal;
  j["seed"] = seed;
  j["failed_runs"] = failed_runs;
  j["failed_replicates"] = failed_replicates;
  j["failures"] = failures;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& tc : targets) {
    nlohmann::ordered_json t;
    t["functional"] = tc.target.functional.to_string();
    t["row"] = tc.target.row;
    t["column"] = tc.target.column;
    t["truth"] = tc.target.truth;
    t["covered"] = tc.covered;
    t["runs"] = tc.runs;
    t["coverage"] = tc.coverage;
    t["mc_se"] = tc.mc_se;
    arr.push_back(std::move(t));
  }
  j["targets"] = std::move(arr);
  return j;
}

void CoverageReport::write_csv(std::ostream& os) const {
  std::vector<std::string> rows, cols;
  std::map<std::pair<std::string, std::string>, double> cells;
  for (const auto& tc : targets) {
    if (std::find(rows.begin(), rows.end(), tc.target.row) == rows.end()) rows.push_back(tc.target.row);
    if (std::find(cols.begin(), cols.end(), tc.target.column) == cols.end()) cols.push_back(tc.target.column);
    cells[{tc.target.row, tc.target.column}] = tc.coverage;
  }
  std::sort(cols.begin(), cols.end(), [](const std::string& a, const std::string& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  std::vector<std::string> header{"target"};
  header.insert(header.end(), cols.begin(), cols.end());
  write_csv_row(os, header);
  for (const auto& r : rows) {
    std::vector<std::string> line{r};
    for (const auto& c : cols) {
      auto it = cells.find({r, c});
      line.push_back(it == cells.end() ? "" : format_double(it->second));
    }
    write_csv_row(os, line);
  }
}

}  // namespace drmel
