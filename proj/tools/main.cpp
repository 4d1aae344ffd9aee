#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "boolperc/cli_io.hpp"
#include "boolperc/errors.hpp"

namespace {

struct Option {
  const char* flag;
  const char* key;
  const char* help;
};

constexpr Option kOptions[] = {
    {"--lambda", "lambda", "intensity or comma separated intensity grid"},
    {"--n", "n", "comma separated box half-sides"},
    {"--samples", "samples", "samples (or maximal draws for conditioned widths)"},
    {"--seed", "seed", "master seed (generated and echoed when absent)"},
    {"--margin", "margin", "padding of the sampling window"},
    {"--pitch", "pitch", "grid pitch (0: min(0.05, n/400); arms default 0.1)"},
    {"--threads", "threads", "worker threads, 0 for all cores"},
    {"--output", "output", "CSV output path (stdout when absent)"},
    {"--pi4-method", "pi4_method", "pivotal | annulus | both"},
    {"--conditioning", "conditioning", "conditioning mode (rejection)"},
    {"--which", "which", "width kind: occupied | vacant"},
    {"--orientation", "orientation", "horizontal | vertical"},
    {"--kind", "kind", "crossing kind: occupied | vacant"},
    {"--a", "a", "width parameter of the coupling check"},
    {"--delta", "delta", "tolerance of the characteristic length"},
    {"--d-lambda", "d_lambda", "finite-difference step of the Russo check"},
    {"--n-max", "n_max", "largest scale of the characteristic length sweep"},
    {"--lambda-c", "lambda_c", "critical intensity estimate"},
    {"--alpha", "alpha", "window size alpha_n (0: estimate)"},
    {"--c-grid", "c_grid", "comma separated window multipliers"},
    {"--target", "target_accepted", "stop width sampling after this many accepted draws"},
};

const std::map<std::string, std::string> kDescriptions = {
    {"sample", "dump the centers of one sample as x,y CSV"},
    {"cross-prob", "crossing probability of [-n, n]^2"},
    {"width-dist", "conditional width quantiles"},
    {"pi4", "four-arm probability"},
    {"alpha", "four-arm probability and critical window alpha_n"},
    {"lambda-c", "critical intensity from crossing-curve intersection"},
    {"char-length", "characteristic length sweep"},
    {"window-check", "near-critical window check"},
    {"coupling-check", "vacant width against rescaled crossing identity"},
    {"verify", "duality, bottleneck, coupling, Russo and FKG checks"},
    {"bench", "sample + crossing throughput"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Poisson Boolean percolation: crossings, widths and critical quantities"};
  app.require_subcommand(1);

  std::map<std::string, std::string> values;
  std::string config_path;
  bool append = false;
  for (const auto name : boolperc::command_names()) {
    const std::string command(name);
    CLI::App* sub = app.add_subcommand(command, kDescriptions.at(command));
    sub->add_option("--config", config_path, "key = value config file; flags override it");
    sub->add_flag("--append", append, "append rows to an existing CSV");
    for (const Option& o : kOptions) sub->add_option(o.flag, values[o.key], o.help);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  boolperc::ExperimentConfig config;
  try {
    if (!config_path.empty()) config = boolperc::load_config(config_path);
    config.command = app.get_subcommands().front()->get_name();
    CLI::App* sub = app.get_subcommands().front();
    for (const Option& o : kOptions) {
      if (sub->count(o.flag) > 0) boolperc::set_config_value(config, o.key, values[o.key]);
    }
    if (append) config.append = true;
  } catch (const std::exception& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  }
  return boolperc::run(config, std::cout, std::cerr).status;
}
