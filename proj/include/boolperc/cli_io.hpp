#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "boolperc/experiments.hpp"

namespace boolperc {

/// Flat description of one CLI run. Every field has a key in the
/// `key = value` config format; lists are comma separated.
struct ExperimentConfig {
  std::string command;
  std::vector<double> lambdas;
  std::vector<double> n_values;
  std::int64_t samples = 1000;
  std::uint64_t master_seed = 0;
  bool seed_set = false;  ///< false: a seed is generated and echoed
  double margin = kDefaultMargin;
  double pitch = 0.0;  ///< 0 selects min(0.05, n / 400)
  int threads = 0;     ///< 0 selects the hardware thread count
  std::string output_path;  ///< empty writes CSV to stdout
  bool append = false;
  std::string pi4_method = "pivotal";      ///< pivotal | annulus | both
  std::string conditioning = "rejection";  ///< the only supported mode
  std::string which = "vacant";            ///< width kind: occupied | vacant
  std::string orientation = "horizontal";
  std::string kind = "occupied";           ///< crossing kind for cross-prob
  double a = 0.2;
  double delta = 0.25;
  double d_lambda = 0.01;
  double n_max = 256.0;
  double lambda_c = kLambdaCReference;
  double alpha = 0.0;  ///< 0: estimate alpha_n from pivotal pi_4
  std::vector<double> c_grid;
  std::int64_t target_accepted = 0;

  bool operator==(const ExperimentConfig&) const = default;
};

/// The normative CSV header, in column order.
inline constexpr std::string_view kCsvHeader =
    "experiment,lambda,n,quantity,value,stderr,n_samples,seed,params_json";

inline constexpr std::string_view kVersion = "0.1.0";

/// Shortest round-trip decimal for doubles ("%.17g"; inf, -inf, nan).
std::string format_double(double v);
double parse_double(std::string_view text);
std::vector<double> parse_list(std::string_view text);

/// `key = value` lines; '#' starts a comment. Unknown keys are errors.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& config);
/// Apply one `key`, `value` pair (same spelling as the config file).
void set_config_value(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Throws ParameterError on the first invalid field.
void validate(const ExperimentConfig& config);

/// One CSV row (no trailing newline); params_json is quoted CSV-style.
std::string csv_row(const EstimateRecord& record);
void write_csv(std::ostream& out, std::span<const EstimateRecord> records, bool header = true);

struct RunOutcome {
  int status = 0;  ///< 0 ok, 1 failed check, 2 usage error, 3 I/O error
  std::vector<EstimateRecord> records;
};

/**
 * Execute `config.command` and write its records (CSV) to the output path
 * or `out`, plus a `<output>.manifest.json` sidecar when writing to a file.
 * Diagnostics go to `err`.
 */
RunOutcome run(ExperimentConfig config, std::ostream& out, std::ostream& err);

/// Names of all subcommands.
std::span<const std::string_view> command_names();

}  // namespace boolperc
