#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "boolperc/cli_io.hpp"
#include "boolperc/errors.hpp"

using namespace boolperc;
namespace fs = std::filesystem;

namespace {

ExperimentConfig make(const std::string& command) {
  ExperimentConfig c;
  c.command = command;
  c.master_seed = 7;
  c.seed_set = true;
  c.threads = 1;
  return c;
}

std::string run_to_string(const ExperimentConfig& c, int* status = nullptr) {
  std::ostringstream out;
  std::ostringstream err;
  const RunOutcome o = run(c, out, err);
  if (status) *status = o.status;
  return out.str();
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "boolperc_cli_tests";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  fs::remove(p);
  fs::remove(p.string() + ".manifest.json");
  return p;
}

int cli(const std::string& args) {
  const std::string command = std::string(BOOLPERC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int raw = std::system(command.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

}  // namespace

TEST_SUITE("cli_io") {
  TEST_CASE("number formatting round trips") {
    for (double v : {0.0, 0.1, 1.0 / 3.0, 1e-300, 12345.678, -2.5}) CHECK(parse_double(format_double(v)) == v);
    CHECK(format_double(kInfinity) == "inf");
    CHECK(format_double(-kInfinity) == "-inf");
    CHECK(format_double(std::nan("")) == "nan");
    CHECK(std::isinf(parse_double("inf")));
    CHECK_THROWS_AS(parse_double("1.5x"), ParameterError);
    CHECK(parse_list(" 16, 32 ,64") == std::vector<double>{16, 32, 64});
    CHECK(parse_list("").empty());
  }

  TEST_CASE("config round trips through text") {
    ExperimentConfig c = make("width-dist");
    c.lambdas = {0.28, 1.0 / 3.0};
    c.n_values = {16, 32};
    c.samples = 12345;
    c.master_seed = 18446744073709551615ull;
    c.margin = 5.5;
    c.pitch = 0.025;
    c.threads = 3;
    c.output_path = "/tmp/out.csv";
    c.append = true;
    c.pi4_method = "both";
    c.which = "occupied";
    c.orientation = "vertical";
    c.kind = "vacant";
    c.a = 0.2;
    c.delta = 0.1;
    c.d_lambda = 0.005;
    c.n_max = 128;
    c.lambda_c = 0.3591;
    c.alpha = 0.3;
    c.c_grid = {0, 0.5, 2};
    c.target_accepted = 40;
    CHECK(parse_config(serialize_config(c)) == c);
    const ExperimentConfig d = make("pi4");
    CHECK(parse_config(serialize_config(d)) == d);
  }

  TEST_CASE("config syntax") {
    const ExperimentConfig c = parse_config("# comment\ncommand = cross-prob\nlambda_grid = 0.3,0.4  # grid\n\nn=8\n");
    CHECK(c.command == "cross-prob");
    CHECK(c.lambdas == std::vector<double>{0.3, 0.4});
    CHECK(c.n_values == std::vector<double>{8});
    CHECK_FALSE(c.seed_set);
    CHECK_THROWS_AS(parse_config("colour = red\n"), ParameterError);
    CHECK_THROWS_AS(parse_config("samples\n"), ParameterError);
    CHECK_THROWS_AS(parse_config("samples = many\n"), ParameterError);
  }

  TEST_CASE("csv header and quoting") {
    CHECK(kCsvHeader == "experiment,lambda,n,quantity,value,stderr,n_samples,seed,params_json");
    EstimateRecord r;
    r.experiment = "cross-prob";
    r.lambda = 0.36;
    r.n = 16;
    r.quantity = "p_cross";
    r.value = 0.5;
    r.std_error = 0.05;
    r.n_samples = 100;
    r.seed = 9;
    r.params = {{"note", "a,\"b\""}};
    CHECK(csv_row(r) == R"(cross-prob,0.35999999999999999,16,p_cross,0.5,0.050000000000000003,100,9,"{""note"":""a,\""b\""""}")");
    std::ostringstream os;
    write_csv(os, std::span<const EstimateRecord>(&r, 1));
    CHECK(os.str().rfind(std::string(kCsvHeader) + "\n", 0) == 0);
  }

  TEST_CASE("zero intensity crossing probability") {
    ExperimentConfig c = make("cross-prob");
    c.lambdas = {0.0};
    c.n_values = {16};
    c.samples = 100;
    std::ostringstream out;
    std::ostringstream err;
    const RunOutcome o = run(c, out, err);
    CHECK(o.status == 0);
    REQUIRE(o.records.size() == 1);
    CHECK(o.records[0].value == 0.0);
    CHECK(o.records[0].seed == 7);
  }

  TEST_CASE("width-dist reruns are byte identical and thread independent") {
    ExperimentConfig c = make("width-dist");
    c.lambdas = {0.36};
    c.n_values = {8, 12};
    c.samples = 200;
    const fs::path first = scratch("w1.csv");
    const fs::path second = scratch("w2.csv");
    c.output_path = first.string();
    int status = -1;
    run_to_string(c, &status);
    CHECK(status == 0);
    c.output_path = second.string();
    c.threads = 3;
    run_to_string(c, &status);
    CHECK(status == 0);
    const std::string a = read_file(first);
    CHECK(a.size() > kCsvHeader.size());
    CHECK(a == read_file(second));
    const auto manifest = nlohmann::json::parse(read_file(first.string() + ".manifest.json"));
    CHECK(manifest["version"] == std::string(kVersion));
    CHECK(manifest["config"]["seed"] == "7");
    CHECK(manifest.contains("wall_time_seconds"));
  }

  TEST_CASE("append writes the header once") {
    ExperimentConfig c = make("cross-prob");
    c.lambdas = {0.3};
    c.n_values = {4};
    c.samples = 20;
    const fs::path p = scratch("append.csv");
    c.output_path = p.string();
    c.append = true;
    run_to_string(c);
    run_to_string(c);
    const std::string text = read_file(p);
    std::size_t headers = 0;
    for (std::size_t at = text.find("experiment,"); at != std::string::npos; at = text.find("experiment,", at + 1)) ++headers;
    CHECK(headers == 1);
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);
  }

  TEST_CASE("missing seed is generated and recorded") {
    ExperimentConfig c = make("cross-prob");
    c.seed_set = false;
    c.lambdas = {0.3};
    c.n_values = {4};
    c.samples = 10;
    std::ostringstream out;
    std::ostringstream err;
    const RunOutcome o = run(c, out, err);
    REQUIRE(o.records.size() == 1);
    CHECK(out.str().find("," + std::to_string(o.records[0].seed) + ",") != std::string::npos);
  }

  TEST_CASE("sample command emits centers") {
    ExperimentConfig c = make("sample");
    c.lambdas = {0.36};
    c.n_values = {8};
    const std::string text = run_to_string(c);
    CHECK(text.rfind("x,y\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') > 50);
  }

  TEST_CASE("usage errors") {
    int status = 0;
    run_to_string(make("teleport"), &status);
    CHECK(status == 2);
    ExperimentConfig bad = make("cross-prob");
    bad.samples = 0;
    run_to_string(bad, &status);
    CHECK(status == 2);
    bad = make("width-dist");
    bad.which = "sideways";
    run_to_string(bad, &status);
    CHECK(status == 2);
    ExperimentConfig unwritable = make("cross-prob");
    unwritable.lambdas = {0.3};
    unwritable.n_values = {4};
    unwritable.samples = 5;
    unwritable.output_path = "/nonexistent-dir/out.csv";
    run_to_string(unwritable, &status);
    CHECK(status == 3);
  }

  TEST_CASE("command line entry point") {
    CHECK(cli("teleport") == 2);
    CHECK(cli("cross-prob --samples nope") == 2);
    CHECK(cli("cross-prob --lambda 0 --n 8 --samples 10 --seed 1") == 0);

    const fs::path cfg = scratch("run.cfg");
    const fs::path out = scratch("cfg.csv");
    std::ofstream(cfg) << "lambda = 0.3\nn = 4\nsamples = 10\nseed = 3\n";
    CHECK(cli("cross-prob --config " + cfg.string() + " --samples 25 --output " + out.string()) == 0);
    const std::string text = read_file(out);
    CHECK(text.find(",25,3,") != std::string::npos);
  }
}
