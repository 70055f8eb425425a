#include "drmel_cli/cli.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "drmel/asymptotics.hpp"
#include "drmel/bootstrap.hpp"
#include "drmel/csv_writer.hpp"
#include "drmel/error.hpp"
#include "drmel/estimators.hpp"
#include "drmel/functional.hpp"
#include "drmel/optimizer.hpp"
#include "drmel/parallel.hpp"
#include "drmel/scenario.hpp"
#include "drmel/simulation.hpp"

namespace drmel::cli {

using ojson = nlohmann::ordered_json;

namespace {

bool is_data_command(const std::string& c) {
  return c == "fit" || c == "bootstrap" || c == "cdf" || c == "quantile" || c == "dominance";
}

// Writes to the named file, or to `fallback` when the path is empty.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw IoError("cannot open output file " + path);
      os_ = file_.get();
    }
    path_ = path;
  }
  std::ostream& stream() { return *os_; }
  void close() {
    os_->flush();
    if (!*os_) throw IoError("write failed for " + (path_.empty() ? std::string("stdout") : path_));
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
  std::string path_;
};

void emit_json(const ojson& j, const std::string& path, std::ostream& out) {
  Sink sink(path, out);
  sink.stream() << j.dump(2) << '\n';
  sink.close();
}

ojson matrix_json(const Eigen::MatrixXd& mat) {
  auto rows = ojson::array();
  for (Eigen::Index i = 0; i < mat.rows(); ++i) {
    auto row = ojson::array();
    for (Eigen::Index j = 0; j < mat.cols(); ++j) row.push_back(mat(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

ojson ci_json(const std::vector<ConfidenceInterval>& cis) {
  auto arr = ojson::array();
  for (const auto& ci : cis) {
    arr.push_back(ojson{{"alpha", ci.alpha}, {"lower", ci.lower}, {"upper", ci.upper}});
  }
  return arr;
}

ojson groups_json(const MultiSampleData& data) {
  auto arr = ojson::array();
  for (std::size_t k = 0; k < data.num_groups(); ++k) {
    arr.push_back(ojson{{"group", k},
                        {"label", data.labels()[k]},
                        {"n", data.group_size(k)},
                        {"rho", data.rho()[k]}});
  }
  return arr;
}

unsigned workers_of(const RunConfig& cfg) { return cfg.workers ? cfg.workers : default_workers(); }

DrmFit fit_input(const RunConfig& cfg) {
  const BasisSpec basis = BasisSpec::parse(cfg.basis);
  auto data = std::make_shared<const MultiSampleData>(
      load_csv(cfg.input, cfg.group_col, cfg.value_col, basis, cfg.baseline));
  DrmFit fit = fit_mele(data);
  if (!fit.converged) {
    std::ostringstream os;
    os << "Newton ascent did not converge in " << fit.iterations
       << " iterations (gradient norm " << fit.grad_norm << ")";
    throw FitError(os.str());
  }
  return fit;
}

BootstrapOptions boot_options(const RunConfig& cfg) {
  BootstrapOptions opts;
  opts.B = cfg.B;
  opts.seed = cfg.seed;
  opts.workers = workers_of(cfg);
  opts.alphas = cfg.alphas;
  return opts;
}

ojson summary_json(const BootstrapSummary& s) {
  return ojson{{"functional", s.functional.to_string()},
               {"xi_hat", s.xi_hat},
               {"B_requested", s.B_requested},
               {"B_failed", s.B_failed},
               {"B_effective", s.replicates.size()},
               {"reliability_warning", s.reliability_warning},
               {"ci", ci_json(s.ci)}};
}

ojson failures_json(const BootstrapResult& res) {
  auto arr = ojson::array();
  for (const auto& f : res.failures) arr.push_back(ojson{{"index", f.index}, {"reason", f.reason}});
  return arr;
}

int cmd_fit(const RunConfig& cfg, std::ostream& out) {
  const DrmFit fit = fit_input(cfg);
  const auto& data = fit.data_ref();
  const CovarianceEstimates cov = param_covariance(fit);
  ojson j;
  j["command"] = "fit";
  j["input"] = cfg.input;
  j["basis"] = data.basis().to_json();
  j["n"] = data.n();
  j["groups"] = groups_json(data);
  j["converged"] = fit.converged;
  j["iterations"] = fit.iterations;
  j["grad_norm"] = fit.grad_norm;
  j["loglik"] = fit.loglik;
  j["theta_hat"] = matrix_json(fit.theta_hat.matrix());
  j["param_cov"] = matrix_json(cov.param_cov);
  j["param_cov_indefinite"] = cov.indefinite;
  j["trace"] = fit.trace;
  emit_json(j, cfg.output, out);
  return kOk;
}

int cmd_bootstrap(const RunConfig& cfg, std::ostream& out) {
  if (cfg.functionals.empty()) throw ConfigError("bootstrap needs at least one --functional");
  if (cfg.B < 1) throw ConfigError("bootstrap needs B >= 1");
  const DrmFit fit = fit_input(cfg);
  std::vector<FunctionalSpec> fns;
  for (const auto& text : cfg.functionals) {
    fns.push_back(FunctionalSpec::parse(text));
    fns.back().validate(fit.data_ref().m(), fit.data_ref().d());
  }
  const BootstrapResult res = bootstrap_run(fit, fns, boot_options(cfg));

  ojson j;
  j["command"] = "bootstrap";
  j["input"] = cfg.input;
  j["seed"] = cfg.seed;
  j["B"] = cfg.B;
  j["groups"] = groups_json(fit.data_ref());
  j["theta_hat"] = matrix_json(fit.theta_hat.matrix());
  auto arr = ojson::array();
  for (const auto& s : res.summaries) arr.push_back(summary_json(s));
  j["summaries"] = std::move(arr);
  j["failures"] = failures_json(res);
  emit_json(j, cfg.output, out);

  if (!cfg.replicates.empty()) {
    Sink sink(cfg.replicates, out);
    write_replicates_csv(sink.stream(), res);
    sink.close();
  }
  return kOk;
}

int cmd_cdf(const RunConfig& cfg, std::ostream& out) {
  const DrmFit fit = fit_input(cfg);
  const auto& data = fit.data_ref();
  const std::vector<StepCdf> cdfs = cdf_estimates(fit);
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw IoError("cannot create directory " + cfg.out_dir + ": " + ec.message());

  ojson j;
  j["command"] = "cdf";
  j["input"] = cfg.input;
  auto arr = ojson::array();
  for (std::size_t k = 0; k < cdfs.size(); ++k) {
    const std::string name = "cdf_" + std::to_string(k) + ".csv";
    const std::string path = (std::filesystem::path(cfg.out_dir) / name).string();
    Sink sink(path, out);
    cdfs[k].write_csv(sink.stream());
    sink.close();
    arr.push_back(ojson{{"group", k}, {"label", data.labels()[k]}, {"file", name}, {"atoms", cdfs[k].size()}});
  }
  j["files"] = std::move(arr);
  emit_json(j, cfg.output, out);
  return kOk;
}

// Point estimates of every functional, plus percentile CIs when B > 0.
std::vector<BootstrapSummary> estimate_with_ci(const DrmFit& fit, const std::vector<FunctionalSpec>& fns,
                                               const RunConfig& cfg, ojson& failures) {
  if (cfg.B > 0) {
    BootstrapResult res = bootstrap_run(fit, fns, boot_options(cfg));
    failures = failures_json(res);
    return std::move(res.summaries);
  }
  failures = ojson::array();
  FunctionalEvaluator eval(fit);
  std::vector<BootstrapSummary> out;
  for (const auto& f : fns) {
    BootstrapSummary s;
    s.functional = f;
    s.xi_hat = eval(f);
    s.seed = cfg.seed;
    out.push_back(std::move(s));
  }
  return out;
}

int cmd_quantile(const RunConfig& cfg, std::ostream& out) {
  const DrmFit fit = fit_input(cfg);
  const auto& data = fit.data_ref();
  std::vector<FunctionalSpec> fns;
  for (std::size_t r = 0; r < data.num_groups(); ++r) {
    for (double p : cfg.levels) fns.push_back(FunctionalSpec::quantile(r, p));
  }
  ojson failures;
  const auto sums = estimate_with_ci(fit, fns, cfg, failures);

  ojson j;
  j["command"] = "quantile";
  j["input"] = cfg.input;
  j["seed"] = cfg.seed;
  j["B"] = cfg.B;
  j["levels"] = cfg.levels;
  auto arr = ojson::array();
  for (const auto& s : sums) {
    const auto& q = std::get<QuantileAt>(s.functional.kind());
    arr.push_back(ojson{{"group", q.r},
                        {"label", data.labels()[q.r]},
                        {"p", q.p},
                        {"estimate", s.xi_hat},
                        {"ci", ci_json(s.ci)}});
  }
  j["quantiles"] = std::move(arr);
  j["failures"] = std::move(failures);
  emit_json(j, cfg.output, out);
  return kOk;
}

std::string interval_text(const ConfidenceInterval& ci) {
  return "(" + format_double(ci.lower) + ", " + format_double(ci.upper) + ")";
}

int cmd_dominance(const RunConfig& cfg, std::ostream& out) {
  const DrmFit fit = fit_input(cfg);
  const auto& data = fit.data_ref();
  const std::size_t groups = data.num_groups();
  std::vector<FunctionalSpec> fns;
  for (std::size_t r = 0; r < groups; ++r) {
    for (std::size_t s = 0; s < groups; ++s) {
      if (r != s) fns.push_back(FunctionalSpec::dominance(r, s));
    }
  }
  ojson failures;
  const auto sums = estimate_with_ci(fit, fns, cfg, failures);

  Eigen::MatrixXd est = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(groups), static_cast<Eigen::Index>(groups));
  auto pairs = ojson::array();
  std::vector<std::vector<const BootstrapSummary*>> cell(groups, std::vector<const BootstrapSummary*>(groups));
  for (const auto& s : sums) {
    const auto& dom = std::get<DominanceOf>(s.functional.kind());
    est(static_cast<Eigen::Index>(dom.r), static_cast<Eigen::Index>(dom.s)) = s.xi_hat;
    cell[dom.r][dom.s] = &s;
    pairs.push_back(ojson{{"row", dom.r},
                          {"column", dom.s},
                          {"row_label", data.labels()[dom.r]},
                          {"column_label", data.labels()[dom.s]},
                          {"estimate", s.xi_hat},
                          {"ci", ci_json(s.ci)}});
  }

  ojson j;
  j["command"] = "dominance";
  j["input"] = cfg.input;
  j["seed"] = cfg.seed;
  j["B"] = cfg.B;
  j["labels"] = data.labels();
  j["estimate"] = matrix_json(est);
  j["pairs"] = std::move(pairs);
  j["failures"] = std::move(failures);
  emit_json(j, cfg.output, out);

  if (!cfg.table.empty()) {
    // Upper triangle: rows F = groups 0..m-1, columns G = groups 1..m, an
    // estimate line and one CI line per alpha for each row.
    Sink sink(cfg.table, out);
    std::vector<std::string> header{"population", "statistic"};
    for (std::size_t s = 1; s < groups; ++s) header.push_back(data.labels()[s]);
    write_csv_row(sink.stream(), header);
    for (std::size_t r = 0; r + 1 < groups; ++r) {
      std::vector<std::string> line{data.labels()[r], "estimate"};
      for (std::size_t s = 1; s < groups; ++s) line.push_back(s > r ? format_double(cell[r][s]->xi_hat) : "");
      write_csv_row(sink.stream(), line);
      for (std::size_t a = 0; a < (cfg.B > 0 ? cfg.alphas.size() : 0); ++a) {
        std::vector<std::string> ci_line{data.labels()[r], "ci_" + format_double(1.0 - cfg.alphas[a])};
        for (std::size_t s = 1; s < groups; ++s) ci_line.push_back(s > r ? interval_text(cell[r][s]->ci[a]) : "");
        write_csv_row(sink.stream(), ci_line);
      }
    }
    sink.close();
  }
  return kOk;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  if (cfg.alphas.size() != 1) throw ConfigError("simulate takes exactly one alpha");
  if (cfg.B < 1) throw ConfigError("simulate needs B >= 1");
  if (cfg.n_runs < 1) throw ConfigError("simulate needs n_runs >= 1");
  const ScenarioSpec spec = ScenarioSpec::by_name(cfg.scenario);
  std::vector<CoverageTarget> targets;
  for (const auto& t : cfg.targets) {
    std::vector<CoverageTarget> add;
    if (t == "theta") {
      add = theta_targets(spec);
    } else if (t == "cdf") {
      add = cdf_targets(spec, cfg.levels);
    } else if (t == "quantile") {
      add = quantile_targets(spec, cfg.levels);
    } else if (t == "dominance") {
      add = dominance_targets(spec);
    } else {
      add.push_back(make_target(spec, FunctionalSpec::parse(t)));
    }
    targets.insert(targets.end(), add.begin(), add.end());
  }
  if (targets.empty()) throw ConfigError("simulate needs at least one target");

  CoverageOptions opts;
  opts.runs = cfg.n_runs;
  opts.B = cfg.B;
  opts.alpha = cfg.alphas[0];
  opts.seed = cfg.seed;
  opts.workers = workers_of(cfg);
  const CoverageReport report = coverage_experiment(spec, targets, opts);
  emit_json(report.to_json(), cfg.output, out);
  if (!cfg.table.empty()) {
    Sink sink(cfg.table, out);
    report.write_csv(sink.stream());
    sink.close();
  }
  return kOk;
}

template <class T>
T get_as(const nlohmann::json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config key '" + key + "': " + e.what());
  }
}

}  // namespace

void RunConfig::validate() const {
  if (command.empty()) throw ConfigError("no command given");
  if (is_data_command(command) && input.empty()) throw ConfigError(command + " needs --input");
  for (double a : alphas) {
    if (!(a > 0.0 && a < 1.0)) throw ConfigError("alpha " + format_double(a) + " is outside (0,1)");
  }
  if (alphas.empty()) throw ConfigError("at least one alpha is required");
  for (double p : levels) {
    if (!(p > 0.0 && p < 1.0)) throw ConfigError("level " + format_double(p) + " is outside (0,1)");
  }
  if (group_col == value_col) throw ConfigError("group and value columns must differ");
}

void RunConfig::apply_json(RunConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "command") cfg.command = get_as<std::string>(v, key);
    else if (key == "input") cfg.input = get_as<std::string>(v, key);
    else if (key == "group_col") cfg.group_col = get_as<std::string>(v, key);
    else if (key == "value_col") cfg.value_col = get_as<std::string>(v, key);
    else if (key == "baseline") cfg.baseline = v.is_null() ? std::nullopt : std::optional(get_as<std::string>(v, key));
    else if (key == "basis") cfg.basis = v.is_array() ? v.dump() : get_as<std::string>(v, key);
    else if (key == "functionals") cfg.functionals = get_as<std::vector<std::string>>(v, key);
    else if (key == "B") cfg.B = get_as<std::size_t>(v, key);
    else if (key == "alphas") cfg.alphas = get_as<std::vector<double>>(v, key);
    else if (key == "seed") cfg.seed = get_as<std::uint64_t>(v, key);
    else if (key == "output") cfg.output = get_as<std::string>(v, key);
    else if (key == "replicates") cfg.replicates = get_as<std::string>(v, key);
    else if (key == "table") cfg.table = get_as<std::string>(v, key);
    else if (key == "out_dir") cfg.out_dir = get_as<std::string>(v, key);
    else if (key == "levels") cfg.levels = get_as<std::vector<double>>(v, key);
    else if (key == "workers") cfg.workers = get_as<unsigned>(v, key);
    else if (key == "scenario") cfg.scenario = get_as<std::string>(v, key);
    else if (key == "n_runs") cfg.n_runs = get_as<std::size_t>(v, key);
    else if (key == "targets") cfg.targets = get_as<std::vector<std::string>>(v, key);
    else throw ConfigError("unknown config key '" + key + "'");
  }
}

ojson RunConfig::to_json() const {
  ojson j;
  j["command"] = command;
  j["input"] = input;
  j["group_col"] = group_col;
  j["value_col"] = value_col;
  j["baseline"] = baseline ? ojson(*baseline) : ojson(nullptr);
  j["basis"] = basis;
  j["functionals"] = functionals;
  j["B"] = B;
  j["alphas"] = alphas;
  j["seed"] = seed;
  j["output"] = output;
  j["replicates"] = replicates;
  j["table"] = table;
  j["out_dir"] = out_dir;
  j["levels"] = levels;
  j["workers"] = workers;
  j["scenario"] = scenario;
  j["n_runs"] = n_runs;
  j["targets"] = targets;
  return j;
}

int run_command(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  if (cfg.command == "fit") return cmd_fit(cfg, out);
  if (cfg.command == "bootstrap") return cmd_bootstrap(cfg, out);
  if (cfg.command == "cdf") return cmd_cdf(cfg, out);
  if (cfg.command == "quantile") return cmd_quantile(cfg, out);
  if (cfg.command == "dominance") return cmd_dominance(cfg, out);
  if (cfg.command == "simulate") return cmd_simulate(cfg, out);
  throw ConfigError("unknown command '" + cfg.command + "'");
}

namespace {

void report(std::ostream& err, const char* kind, int code, const std::string& message) {
  ojson j;
  j["error"] = ojson{{"kind", kind}, {"exit_code", code}, {"message", message}};
  err << j.dump() << '\n';
}

// Flags bound to a scratch RunConfig; each applier copies a flag into the
// real config only when it was given, so flags override the config file.
class FlagBinder {
 public:
  template <class T>
  CLI::Option* bind(CLI::App* app, const std::string& name, T RunConfig::*field, const std::string& desc) {
    CLI::Option* opt = app->add_option(name, flags_.*field, desc);
    appliers_.push_back([opt, field, this](RunConfig& c) {
      if (opt->count() > 0) c.*field = flags_.*field;
    });
    return opt;
  }
  CLI::Option* bind_baseline(CLI::App* app) {
    CLI::Option* opt = app->add_option("--baseline", baseline_, "Group label to use as the baseline F0");
    appliers_.push_back([opt, this](RunConfig& c) {
      if (opt->count() > 0) c.baseline = baseline_;
    });
    return opt;
  }
  void apply(RunConfig& c) const {
    for (const auto& f : appliers_) f(c);
  }

 private:
  RunConfig flags_;
  std::string baseline_;
  std::vector<std::function<void(RunConfig&)>> appliers_;
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semiparametric inference for multiple samples under the density ratio model"};
  app.require_subcommand(1);
  app.footer(
      "Environment:\n  DRMEL_WORKERS  default worker count (otherwise hardware concurrency)\n\n"
      "Exit codes: 0 ok, 1 internal, 2 config, 3 data, 4 fit, 5 I/O.\n"
      "Errors are reported on stderr as one JSON object.");

  FlagBinder flags;
  std::string config_path;

  auto data_opts = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file; keys mirror the long flag names");
    flags.bind(sub, "-i,--input", &RunConfig::input, "Long-format CSV with a header row");
    flags.bind(sub, "--group-col", &RunConfig::group_col, "Group label column (default: group)");
    flags.bind(sub, "--value-col", &RunConfig::value_col, "Observation column (default: value)");
    flags.bind_baseline(sub);
    flags.bind(sub, "--basis", &RunConfig::basis,
               "Basis terms, e.g. const,x,log or [\"const\",\"x\",\"x^2\"] (default: const,x)");
    flags.bind(sub, "-o,--output", &RunConfig::output, "JSON output file (default: stdout)");
  };
  auto boot_opts = [&](CLI::App* sub, const std::string& b_desc) {
    flags.bind(sub, "--b", &RunConfig::B, b_desc);
    flags.bind(sub, "--alpha", &RunConfig::alphas, "CI level(s) alpha, repeatable (default: 0.05)");
    flags.bind(sub, "--seed", &RunConfig::seed, "Master seed (default: 0)");
    flags.bind(sub, "--workers", &RunConfig::workers, "Worker threads (default: DRMEL_WORKERS or all cores)");
  };

  auto* fit = app.add_subcommand("fit", "Fit the model; print theta_hat, log-likelihood and covariance as JSON");
  data_opts(fit);

  auto* boot = app.add_subcommand("bootstrap", "Percentile bootstrap CIs for functionals");
  data_opts(boot);
  boot_opts(boot, "Bootstrap replicates (default: 999)");
  flags.bind(boot, "-f,--functional", &RunConfig::functionals,
             "Functional, repeatable: theta:R:S, cdf:R:X, quantile:R:P, dominance:R:S");
  flags.bind(boot, "--replicates", &RunConfig::replicates, "Write replicate values to this CSV");

  auto* cdf = app.add_subcommand("cdf", "Write the fitted CDF of every group as CSV");
  data_opts(cdf);
  flags.bind(cdf, "--out-dir", &RunConfig::out_dir, "Directory for cdf_K.csv files (default: .)");

  auto* quant = app.add_subcommand("quantile", "Quantiles of every group, with bootstrap CIs when --b > 0");
  data_opts(quant);
  boot_opts(quant, "Bootstrap replicates, 0 for point estimates only (default: 999)");
  flags.bind(quant, "--levels", &RunConfig::levels, "Probability levels (default: 0.1 0.5 0.9)");

  auto* dom = app.add_subcommand("dominance", "Pairwise dominance indices with bootstrap CIs");
  data_opts(dom);
  boot_opts(dom, "Bootstrap replicates, 0 for point estimates only (default: 999)");
  flags.bind(dom, "--table", &RunConfig::table, "Also write the upper-triangle table as CSV");

  auto* sim = app.add_subcommand("simulate", "Monte Carlo coverage of percentile bootstrap CIs");
  sim->add_option("--config", config_path, "JSON config file; keys mirror the long flag names");
  flags.bind(sim, "--scenario", &RunConfig::scenario, "gamma1 or normal2 (default: gamma1)");
  flags.bind(sim, "--n-runs", &RunConfig::n_runs, "Monte Carlo runs (default: 300)");
  boot_opts(sim, "Bootstrap replicates per run (default: 999)");
  flags.bind(sim, "--targets", &RunConfig::targets,
             "theta, cdf, quantile, dominance or explicit functionals (default: theta)");
  flags.bind(sim, "--levels", &RunConfig::levels, "Levels p for cdf and quantile targets (default: 0.1 0.5 0.9)");
  flags.bind(sim, "-o,--output", &RunConfig::output, "JSON report file (default: stdout)");
  flags.bind(sim, "--table", &RunConfig::table, "Also write the coverage table as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    report(err, "config", kConfig, e.what());
    return kConfig;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw IoError("cannot open config file " + config_path);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config file " + config_path + ": " + e.what());
      }
      RunConfig::apply_json(cfg, j);
    }
    flags.apply(cfg);
    cfg.command = app.get_subcommands().front()->get_name();
    return run_command(cfg, out);
  } catch (const ConfigError& e) {
    report(err, "config", kConfig, e.what());
    return kConfig;
  } catch (const DataError& e) {
    report(err, "data", kData, e.what());
    return kData;
  } catch (const FitError& e) {
    report(err, "fit", kFit, e.what());
    return kFit;
  } catch (const BootstrapError& e) {
    report(err, "fit", kFit, e.what());
    return kFit;
  } catch (const EvaluationError& e) {
    report(err, "fit", kFit, e.what());
    return kFit;
  } catch (const IoError& e) {
    report(err, "io", kIo, e.what());
    return kIo;
  } catch (const std::exception& e) {
    report(err, "internal", kInternal, e.what());
    return kInternal;
  }
}

}  // namespace drmel::cli
