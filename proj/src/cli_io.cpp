#include "boolperc/cli_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "boolperc/arms.hpp"
#include "boolperc/crossing.hpp"
#include "boolperc/errors.hpp"
#include "boolperc/parallel.hpp"
#include "boolperc/sampler.hpp"
#include "boolperc/widths.hpp"

namespace boolperc {
namespace {

constexpr std::array<std::string_view, 11> kCommands = {
    "sample", "cross-prob", "width-dist", "pi4", "alpha", "lambda-c",
    "char-length", "window-check", "coupling-check", "verify", "bench"};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

template <typename Int>
Int parse_integer(std::string_view text) {
  text = trim(text);
  Int value{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw ParameterError("not an integer: '" + std::string(text) + "'");
  }
  return value;
}

bool parse_bool(std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ParameterError("not a boolean: '" + std::string(text) + "'");
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void require_one_of(const std::string& value, std::initializer_list<std::string_view> options,
                    const char* field) {
  if (std::find(options.begin(), options.end(), value) == options.end()) {
    throw ParameterError(std::string("invalid ") + field + ": '" + value + "'");
  }
}

Orientation orientation_of(const ExperimentConfig& c) {
  return c.orientation == "vertical" ? Orientation::vertical : Orientation::horizontal;
}

std::vector<double> lambdas_or(const ExperimentConfig& c, double fallback) {
  return c.lambdas.empty() ? std::vector<double>{fallback} : c.lambdas;
}

std::vector<double> scales_or(const ExperimentConfig& c, double fallback) {
  return c.n_values.empty() ? std::vector<double>{fallback} : c.n_values;
}

EstimateRecord make_record(const std::string& experiment, double lambda, double n, const std::string& quantity,
                           double value, double se, std::int64_t count, std::uint64_t seed,
                           nlohmann::json params = nlohmann::json::object()) {
  EstimateRecord r;
  r.experiment = experiment;
  r.lambda = lambda;
  r.n = n;
  r.quantity = quantity;
  r.value = value;
  r.std_error = se;
  r.n_samples = count;
  r.seed = seed;
  r.params = std::move(params);
  return r;
}

Pi4Method pi4_method_of(const std::string& name) {
  return name == "annulus" ? Pi4Method::annulus : Pi4Method::pivotal;
}

const char* pi4_name(Pi4Method m) { return m == Pi4Method::annulus ? "annulus" : "pivotal"; }

double arm_pitch(const ExperimentConfig& c) { return c.pitch > 0.0 ? c.pitch : 0.1; }

EstimateRecord pi4_record(const ExperimentConfig& c, double lambda, double n, Pi4Method m, const Pi4Estimate& e) {
  nlohmann::json params = {{"method", pi4_name(m)}, {"margin", kArmMargin}};
  if (m == Pi4Method::annulus) params["pitch"] = arm_pitch(c);
  return make_record("pi4", lambda, n, "pi4", e.value, e.std_error, e.n_samples, c.master_seed, params);
}

struct Checked {
  std::vector<EstimateRecord> records;
  bool failed = false;
};

Checked run_verify(const ExperimentConfig& c) {
  Checked out;
  const double lambda = lambdas_or(c, 0.36).front();
  const double n = scales_or(c, 16.0).front();
  const Rect box = Rect::square(n);
  const std::uint64_t seed = c.master_seed;
  const auto add = [&](const std::string& suite, const std::string& quantity, double value, double se,
                       std::int64_t count, bool pass) {
    out.records.push_back(make_record("verify", lambda, n, quantity, value, se, count, seed,
                                      {{"suite", suite}, {"pass", pass}}));
    out.failed = out.failed || !pass;
  };

  const auto xor_flags = parallel_map<std::uint8_t>(c.samples, c.threads, [&](std::int64_t i) -> std::uint8_t {
    const PointSample s = sample_padded(box, c.margin, lambda, sample_seed(derive_seed(seed, 11), static_cast<std::uint64_t>(i)));
    const bool occ = occupied_crossing(s, {box, Orientation::horizontal, 1.0});
    const bool vac = vacant_crossing(s, box, Orientation::vertical);
    return occ != vac;
  });
  const auto duality_bad = std::count(xor_flags.begin(), xor_flags.end(), std::uint8_t{0});
  add("duality", "violations", static_cast<double>(duality_bad), 0.0, c.samples, duality_bad == 0);

  const auto flips = parallel_map<std::uint8_t>(c.samples, c.threads, [&](std::int64_t i) -> std::uint8_t {
    const PointSample s = sample_padded(box, c.margin, lambda, sample_seed(derive_seed(seed, 12), static_cast<std::uint64_t>(i)));
    const BottleneckResult b = bottleneck_radius(s, box, Orientation::horizontal);
    if (std::isinf(b.r_star) || b.r_star * (1.0 + 1e-9) > s.margin_around(box)) return true;
    return occupied_crossing(s, {box, Orientation::horizontal, b.r_star * (1.0 + 1e-9)}) &&
           !occupied_crossing(s, {box, Orientation::horizontal, b.r_star * (1.0 - 1e-9)});
  });
  const auto flip_bad = std::count(flips.begin(), flips.end(), std::uint8_t{0});
  add("bottleneck", "violations", static_cast<double>(flip_bad), 0.0, c.samples, flip_bad == 0);

  const TwoSampleCheck coupling = coupling_identity_check(lambda, c.a, n, c.samples, derive_seed(seed, 13), c.threads);
  add("coupling", "z", coupling.z, 0.0, c.samples, coupling.z < 3.0);

  const RussoResult russo = russo_check(lambda, n, c.d_lambda, c.samples, derive_seed(seed, 14), c.threads);
  add("russo", "z", russo.z, 0.0, c.samples, russo.z < 3.0);

  const FkgResult fkg = fkg_check(lambda, n, c.samples, derive_seed(seed, 15), c.threads);
  add("fkg", "z", fkg.z, fkg.std_error, c.samples, fkg.z > -3.0);

  for (Pi4Method m : {Pi4Method::pivotal, Pi4Method::annulus}) {
    const Pi4Estimate e = estimate_pi4(c.lambda_c, n, c.samples, m, derive_seed(seed, 16), c.threads, arm_pitch(c));
    out.records.push_back(pi4_record(c, c.lambda_c, n, m, e));
  }
  return out;
}

Checked run_bench(const ExperimentConfig& c) {
  const double lambda = lambdas_or(c, 0.36).front();
  const double n = scales_or(c, 256.0).front();
  const Rect box = Rect::square(n);
  std::vector<double> ms;
  std::int64_t crossings = 0;
  const auto start = std::chrono::steady_clock::now();
  for (std::int64_t i = 0; i < c.samples; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    const PointSample s = sample_padded(box, c.margin, lambda, sample_seed(c.master_seed, static_cast<std::uint64_t>(i)));
    crossings += occupied_crossing(s, {box, Orientation::horizontal, 1.0});
    ms.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Checked out;
  const nlohmann::json params = {{"margin", c.margin}, {"crossings", crossings}, {"threads", 1}};
  out.records.push_back(make_record("bench", lambda, n, "samples_per_second", static_cast<double>(c.samples) / total,
                                    0.0, c.samples, c.master_seed, params));
  out.records.push_back(make_record("bench", lambda, n, "median_ms", quantile(ms, 0.5), 0.0, c.samples,
                                    c.master_seed, params));
  return out;
}

Checked dispatch(const ExperimentConfig& c) {
  Checked out;
  auto& records = out.records;
  const std::uint64_t seed = c.master_seed;
  if (c.command == "cross-prob") {
    const CrossingKind kind = c.kind == "vacant" ? CrossingKind::vacant : CrossingKind::occupied;
    for (double lambda : lambdas_or(c, 0.36)) {
      for (double n : scales_or(c, 16.0)) {
        records.push_back(crossing_probability(lambda, Rect::square(n), orientation_of(c), c.samples, seed,
                                               c.threads, kind, c.margin));
      }
    }
  } else if (c.command == "width-dist") {
    WidthOptions options;
    options.pitch = c.pitch;
    options.margin = c.margin;
    options.target_accepted = c.target_accepted;
    options.threads = c.threads;
    const WidthKind which = c.which == "occupied" ? WidthKind::occupied : WidthKind::vacant;
    for (double lambda : lambdas_or(c, 0.36)) {
      for (double n : scales_or(c, 16.0)) {
        auto sweep = width_distribution(lambda, n, which, c.samples, seed, options);
        records.insert(records.end(), sweep.records.begin(), sweep.records.end());
      }
    }
  } else if (c.command == "pi4" || c.command == "alpha") {
    std::vector<Pi4Method> methods{pi4_method_of(c.pi4_method)};
    if (c.pi4_method == "both") methods = {Pi4Method::pivotal, Pi4Method::annulus};
    for (double lambda : lambdas_or(c, c.lambda_c)) {
      for (double n : scales_or(c, 16.0)) {
        for (Pi4Method m : methods) {
          const Pi4Estimate e = estimate_pi4(lambda, n, c.samples, m, seed, c.threads, arm_pitch(c));
          records.push_back(pi4_record(c, lambda, n, m, e));
          if (c.command == "alpha") {
            const AlphaEstimate a = alpha_n(e, n);
            records.push_back(make_record("alpha", lambda, n, "alpha_n", a.value, a.std_error, e.n_samples, seed,
                                          {{"method", pi4_name(m)}}));
          }
        }
      }
    }
  } else if (c.command == "lambda-c") {
    const auto scales = c.n_values.empty() ? std::vector<double>{32.0, 64.0} : c.n_values;
    records.push_back(estimate_lambda_c(scales, c.samples, seed, c.threads).record);
  } else if (c.command == "char-length") {
    for (double lambda : lambdas_or(c, 0.5)) {
      records.push_back(characteristic_length(lambda, c.delta, c.n_max, c.samples, seed, c.lambda_c, c.threads));
    }
  } else if (c.command == "window-check") {
    const std::vector<double> grid = c.c_grid.empty()
                                         ? std::vector<double>{0, 0.1, 0.2, 0.3, 0.5, 0.75, 1, 1.5, 2, 3, 5, 10, 20, 50}
                                         : c.c_grid;
    for (double n : scales_or(c, 32.0)) {
      double alpha = c.alpha;
      if (!(alpha > 0.0)) {
        const Pi4Estimate e = estimate_pi4(c.lambda_c, n, c.samples, Pi4Method::pivotal, derive_seed(seed, 7), c.threads);
        const AlphaEstimate a = alpha_n(e, n);
        alpha = a.value;
        records.push_back(make_record("window-check", c.lambda_c, n, "alpha_n", a.value, a.std_error, e.n_samples,
                                      seed, {{"method", "pivotal"}}));
      }
      const WindowResult w = near_critical_window_check(n, grid, c.samples, seed, c.lambda_c, alpha, c.threads);
      records.insert(records.end(), w.sweep.records.begin(), w.sweep.records.end());
    }
  } else if (c.command == "coupling-check") {
    for (double lambda : lambdas_or(c, 0.36)) {
      for (double n : scales_or(c, 32.0)) {
        const TwoSampleCheck t = coupling_identity_check(lambda, c.a, n, c.samples, seed, c.threads);
        const nlohmann::json params = {{"a", c.a}};
        records.push_back(make_record("coupling-check", lambda, n, "p_vacant_width_le_2a", t.first.value,
                                      t.first.std_error, c.samples, seed, params));
        records.push_back(make_record("coupling-check", lambda, n, "p_cross_rescaled", t.second.value,
                                      t.second.std_error, c.samples, seed, params));
        records.push_back(make_record("coupling-check", lambda, n, "z", t.z, 0.0, c.samples, seed, params));
        out.failed = out.failed || !(t.z < 3.0);
      }
    }
  } else if (c.command == "verify") {
    return run_verify(c);
  } else if (c.command == "bench") {
    return run_bench(c);
  }
  return out;
}

void write_sample(const ExperimentConfig& c, std::ostream& os) {
  const double lambda = lambdas_or(c, 0.36).front();
  const double n = scales_or(c, 8.0).front();
  const PointSample s = sample_padded(Rect::square(n), c.margin, lambda, c.master_seed);
  os << "x,y\n";
  for (const Point& p : s.centers) os << format_double(p.x()) << ',' << format_double(p.y()) << '\n';
}

nlohmann::json config_json(const ExperimentConfig& c) {
  nlohmann::json j = nlohmann::json::object();
  std::istringstream lines(serialize_config(c));
  std::string line;
  while (std::getline(lines, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    j[std::string(trim(std::string_view(line).substr(0, eq)))] = std::string(trim(std::string_view(line).substr(eq + 1)));
  }
  return j;
}

}  // namespace

std::span<const std::string_view> command_names() { return kCommands; }

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view text) {
  text = trim(text);
  if (text == "inf" || text == "+inf") return kInfinity;
  if (text == "-inf") return -kInfinity;
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty()) {
    throw ParameterError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  text = trim(text);
  if (text.empty()) return out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(parse_double(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

void set_config_value(ExperimentConfig& c, std::string_view key, std::string_view value) {
  const std::string v(trim(value));
  if (key == "command") c.command = v;
  else if (key == "lambda" || key == "lambda_grid") c.lambdas = parse_list(v);
  else if (key == "n") c.n_values = parse_list(v);
  else if (key == "samples") c.samples = parse_integer<std::int64_t>(v);
  else if (key == "seed") { c.master_seed = parse_integer<std::uint64_t>(v); c.seed_set = true; }
  else if (key == "margin") c.margin = parse_double(v);
  else if (key == "pitch") c.pitch = parse_double(v);
  else if (key == "threads") c.threads = parse_integer<int>(v);
  else if (key == "output") c.output_path = v;
  else if (key == "append") c.append = parse_bool(v);
  else if (key == "pi4_method") c.pi4_method = v;
  else if (key == "conditioning") c.conditioning = v;
  else if (key == "which") c.which = v;
  else if (key == "orientation") c.orientation = v;
  else if (key == "kind") c.kind = v;
  else if (key == "a") c.a = parse_double(v);
  else if (key == "delta") c.delta = parse_double(v);
  else if (key == "d_lambda") c.d_lambda = parse_double(v);
  else if (key == "n_max") c.n_max = parse_double(v);
  else if (key == "lambda_c") c.lambda_c = parse_double(v);
  else if (key == "alpha") c.alpha = parse_double(v);
  else if (key == "c_grid") c.c_grid = parse_list(v);
  else if (key == "target_accepted") c.target_accepted = parse_integer<std::int64_t>(v);
  else throw ParameterError("unknown config key '" + std::string(key) + "'");
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig c;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParameterError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    set_config_value(c, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "command = " << c.command << '\n';
  os << "lambda = " << join(c.lambdas) << '\n';
  os << "n = " << join(c.n_values) << '\n';
  os << "samples = " << c.samples << '\n';
  if (c.seed_set) os << "seed = " << c.master_seed << '\n';
  os << "margin = " << format_double(c.margin) << '\n';
  os << "pitch = " << format_double(c.pitch) << '\n';
  os << "threads = " << c.threads << '\n';
  os << "output = " << c.output_path << '\n';
  os << "append = " << (c.append ? "true" : "false") << '\n';
  os << "pi4_method = " << c.pi4_method << '\n';
  os << "conditioning = " << c.conditioning << '\n';
  os << "which = " << c.which << '\n';
  os << "orientation = " << c.orientation << '\n';
  os << "kind = " << c.kind << '\n';
  os << "a = " << format_double(c.a) << '\n';
  os << "delta = " << format_double(c.delta) << '\n';
  os << "d_lambda = " << format_double(c.d_lambda) << '\n';
  os << "n_max = " << format_double(c.n_max) << '\n';
  os << "lambda_c = " << format_double(c.lambda_c) << '\n';
  os << "alpha = " << format_double(c.alpha) << '\n';
  os << "c_grid = " << join(c.c_grid) << '\n';
  os << "target_accepted = " << c.target_accepted << '\n';
  return os.str();
}

void validate(const ExperimentConfig& c) {
  if (std::find(kCommands.begin(), kCommands.end(), c.command) == kCommands.end()) {
    throw ParameterError("unknown command '" + c.command + "'");
  }
  for (double l : c.lambdas) {
    if (!std::isfinite(l) || l < 0.0) throw ParameterError("lambda must be finite and >= 0");
  }
  for (double n : c.n_values) {
    if (!std::isfinite(n) || n <= 0.0) throw ParameterError("n must be finite and positive");
  }
  if (c.samples < 1) throw ParameterError("samples must be >= 1");
  if (!std::isfinite(c.margin) || c.margin <= 0.0) throw ParameterError("margin must be positive");
  if (!std::isfinite(c.pitch) || c.pitch < 0.0) throw ParameterError("pitch must be >= 0");
  if (c.threads < 0) throw ParameterError("threads must be >= 0");
  if (c.target_accepted < 0) throw ParameterError("target_accepted must be >= 0");
  if (!(c.a >= 0.0) || !std::isfinite(c.a)) throw ParameterError("a must be >= 0");
  if (!(c.delta > 0.0 && c.delta < 1.0)) throw ParameterError("delta must lie in (0, 1)");
  if (!(c.d_lambda > 0.0)) throw ParameterError("d_lambda must be positive");
  if (!(c.n_max >= 1.0)) throw ParameterError("n_max must be >= 1");
  if (!(c.lambda_c > 0.0)) throw ParameterError("lambda_c must be positive");
  if (!(c.alpha >= 0.0)) throw ParameterError("alpha must be >= 0");
  require_one_of(c.pi4_method, {"pivotal", "annulus", "both"}, "pi4_method");
  require_one_of(c.conditioning, {"rejection"}, "conditioning");
  require_one_of(c.which, {"occupied", "vacant"}, "which");
  require_one_of(c.orientation, {"horizontal", "vertical"}, "orientation");
  require_one_of(c.kind, {"occupied", "vacant"}, "kind");
  if (c.command == "lambda-c" && !c.n_values.empty() && c.n_values.size() < 2) {
    throw ParameterError("lambda-c needs at least two scales");
  }
}

std::string csv_row(const EstimateRecord& r) {
  std::string row;
  row += r.experiment;
  row += ',' + format_double(r.lambda);
  row += ',' + format_double(r.n);
  row += ',' + r.quantity;
  row += ',' + format_double(r.value);
  row += ',' + format_double(r.std_error);
  row += ',' + std::to_string(r.n_samples);
  row += ',' + std::to_string(r.seed);
  row += ',' + csv_quote(r.params.dump());
  return row;
}

void write_csv(std::ostream& out, std::span<const EstimateRecord> records, bool header) {
  if (header) out << kCsvHeader << '\n';
  for (const auto& r : records) out << csv_row(r) << '\n';
}

RunOutcome run(ExperimentConfig config, std::ostream& out, std::ostream& err) {
  RunOutcome outcome;
  if (!config.seed_set) {
    std::random_device device;
    config.master_seed = (static_cast<std::uint64_t>(device()) << 32) ^ device();
    config.seed_set = true;
  }
  try {
    validate(config);
  } catch (const ParameterError& e) {
    err << "usage error: " << e.what() << '\n';
    outcome.status = 2;
    return outcome;
  }

  const auto start = std::chrono::steady_clock::now();
  std::ostringstream body;
  bool failed = false;
  try {
    if (config.command == "sample") {
      write_sample(config, body);
    } else {
      Checked result = dispatch(config);
      failed = result.failed;
      outcome.records = std::move(result.records);
    }
  } catch (const ParameterError& e) {
    err << "parameter error: " << e.what() << '\n';
    outcome.status = 2;
    return outcome;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    outcome.status = 1;
    return outcome;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (config.output_path.empty()) {
    if (config.command == "sample") {
      out << body.str();
    } else {
      write_csv(out, outcome.records);
    }
  } else {
    bool header = true;
    if (config.append) {
      std::ifstream existing(config.output_path, std::ios::binary | std::ios::ate);
      header = !existing || existing.tellg() <= 0;
    }
    std::ofstream file(config.output_path, config.append ? std::ios::app : std::ios::trunc);
    if (!file) {
      err << "I/O error: cannot open " << config.output_path << '\n';
      outcome.status = 3;
      return outcome;
    }
    if (config.command == "sample") {
      file << body.str();
    } else {
      write_csv(file, outcome.records, header);
    }
    std::ofstream manifest(config.output_path + ".manifest.json", std::ios::trunc);
    if (!file || !manifest) {
      err << "I/O error: cannot write " << config.output_path << '\n';
      outcome.status = 3;
      return outcome;
    }
    const nlohmann::json m = {{"config", config_json(config)},
                              {"version", std::string(kVersion)},
                              {"wall_time_seconds", wall},
                              {"records", outcome.records.size()}};
    manifest << m.dump(2) << '\n';
  }
  if (failed) {
    err << "one or more checks failed\n";
    outcome.status = 1;
  }
  return outcome;
}

}  // namespace boolperc
