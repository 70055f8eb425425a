#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "drmel/basis.hpp"
#include "drmel/data.hpp"

namespace drmel::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kConfig = 2,
  kData = 3,
  kFit = 4,
  kIo = 5,
};

struct RunConfig {
  std::string command;
  std::string input;
  std::string group_col = "group";
  std::string value_col = "value";
  std::optional<std::string> baseline;
  std::string basis = "const,x";
  std::vector<std::string> functionals;
  std::size_t B = 999;
  std::vector<double> alphas{0.05};
  std::uint64_t seed = 0;
  std::string output;        // JSON (or CSV for cdf) destination; empty = stdout
  std::string replicates;    // bootstrap replicate CSV
  std::string table;         // CSV table for dominance / simulate
  std::string out_dir = "."; // cdf CSVs
  std::vector<double> levels{0.1, 0.5, 0.9};
  unsigned workers = 0;      // 0 = DRMEL_WORKERS or hardware concurrency

  // simulate
  std::string scenario = "gamma1";
  std::size_t n_runs = 300;
  std::vector<std::string> targets{"theta"};

  // Throws ConfigError on a bad alpha, level or missing input.
  void validate() const;

  // Keys are the field names above; unknown keys are rejected.
  static void apply_json(RunConfig& cfg, const nlohmann::json& j);
  nlohmann::ordered_json to_json() const;
};

// Reads a long-format CSV with a header row. Groups are ordered by first
// appearance unless `baseline` names the label that becomes group 0.
MultiSampleData load_csv(const std::string& path, const std::string& group_col,
                         const std::string& value_col, const BasisSpec& basis,
                         const std::optional<std::string>& baseline = std::nullopt);

// Executes one parsed command. Artifacts go to files named in the config or
// to `out`; returns an ExitCode.
int run_command(const RunConfig& cfg, std::ostream& out);

// Full command line entry point: parsing, dispatch and structured error
// reporting on `err` as a single JSON object.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace drmel::cli
