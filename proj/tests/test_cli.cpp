#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

using namespace fastids;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "fastids");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("fastids_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config parsing") {
  std::istringstream in(
      "# comment\n"
      "dataset = two_spiral\n"
      "resolution = 64\n"
      "partitions = 6, 6   # trailing\n"
      "sigma = 4\n"
      "alpha1 = 0.3\n"
      "backend = classic, fast\n"
      "runs = 20\n"
      "input_min = -6.5\n"
      "input_max = 6.5\n"
      "\n");
  const auto c = cli::parse_run_config(in, "test");
  CHECK(c.dataset == "two_spiral");
  CHECK(c.alm.resolution.rsn_x == 64);
  CHECK(c.alm.resolution.rsn_y == 64);
  CHECK(c.alm.partitions == std::vector<int>{6, 6});
  CHECK(c.alm.fast.sigma == 4.0);
  CHECK(c.alm.kernel.sigma == 4.0);
  CHECK(c.alm.fast.alpha1 == 0.3);
  CHECK(c.backends == std::vector<Backend>{Backend::kClassic, Backend::kFast});
  CHECK(c.runs == 20);
  REQUIRE(c.input_domain.has_value());
  CHECK(c.input_domain->min == -6.5);
}

TEST_CASE("config errors") {
  std::istringstream unknown("colour = blue\n");
  CHECK_THROWS_AS(cli::parse_run_config(unknown, "t"), ConfigError);
  std::istringstream garbage("runs = many\n");
  CHECK_THROWS_AS(cli::parse_run_config(garbage, "t"), ConfigError);
  std::istringstream half("input_min = 0\n");
  CHECK_THROWS_AS(cli::parse_run_config(half, "t"), ConfigError);
  std::istringstream noeq("runs 3\n");
  CHECK_THROWS_AS(cli::parse_run_config(noeq, "t"), ConfigError);
}

TEST_CASE("train, eval and dump") {
  const auto dir = fresh("train");
  const auto cfg = dir / "f2.cfg";
  std::ofstream(cfg) << "dataset = f2\ntrain_size = 300\npartitions = 2, 2\nresolution = 64\nsigma = 3\n";
  const auto model_a = dir / "a";
  const auto model_b = dir / "b";
  auto r = invoke({"train", "--config", cfg.string(), "--seed", "5", "--out", model_a.string()});
  REQUIRE(r.code == 0);
  r = invoke({"train", "--config", cfg.string(), "--seed", "5", "--out", model_b.string()});
  REQUIRE(r.code == 0);
  int planes = 0;
  for (const auto& e : fs::directory_iterator(model_a)) {
    if (e.path().extension() != ".csv") continue;
    ++planes;
    CHECK(slurp(e.path()) == slurp(model_b / e.path().filename()));
  }
  CHECK(planes == 4);
  CHECK(slurp(model_a / "model.json") == slurp(model_b / "model.json"));

  r = invoke({"eval", "--model", model_a.string(), "--dataset", "f2", "--size", "200"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"fvu\"") != std::string::npos);

  r = invoke({"dump-plane", "--model", model_a.string(), "--input", "2", "--cell", "1", "--fuzzy"});
  CHECK(r.code == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 5);

  r = invoke({"dump-plane", "--model", model_a.string(), "--input", "3", "--cell", "1"});
  CHECK(r.code == cli::kInputError);
  r = invoke({"eval", "--model", model_a.string(), "--dataset", (dir / "missing.csv").string()});
  CHECK(r.code == cli::kInputError);
  CHECK(r.err.find("missing.csv") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("eval rejects a dimension mismatch") {
  const auto dir = fresh("dims");
  const auto cfg = dir / "c.cfg";
  std::ofstream(cfg) << "dataset = f1\ntrain_size = 100\nresolution = 32\n";
  REQUIRE(invoke({"train", "--config", cfg.string(), "--seed", "1", "--out", (dir / "m").string()}).code == 0);
  std::ofstream(dir / "one.csv") << "x1,y\n1,2\n3,4\n";
  const auto r = invoke({"eval", "--model", (dir / "m").string(), "--dataset", (dir / "one.csv").string()});
  CHECK(r.code == cli::kInputError);
  fs::remove_all(dir);
}

TEST_CASE("bench writes a report") {
  const auto dir = fresh("bench");
  const auto cfg = dir / "b.cfg";
  std::ofstream(cfg) << "dataset = f2\ntrain_size = 200\ntest_size = 100\nruns = 2\n"
                        "backend = classic, fast\nresolution = 32\nsigma = 2\n";
  const auto r = invoke({"bench", "--config", cfg.string(), "--seed", "3", "--out", (dir / "r").string(), "--serial"});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "r" / "summary.json"));
  const auto csv = slurp(dir / "r" / "report.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  CHECK(r.out.find("speedup") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("exit codes for bad invocations") {
  CHECK(invoke({}).code == cli::kInputError);
  CHECK(invoke({"train"}).code == cli::kInputError);
  CHECK(invoke({"train", "--config", "/nonexistent/x.cfg"}).code == cli::kInputError);
  CHECK(invoke({"frobnicate"}).code == cli::kInputError);
  CHECK(invoke({"--help"}).code == cli::kOk);
}

}
