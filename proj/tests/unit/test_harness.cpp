#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "parsio/harness.hpp"

using namespace parsio;

namespace {

const char* kZeroSweep = R"({
  "experiment": "norm-sweep", "kernel": "zero_ambient",
  "grid": {"h": 0.0625, "counts": [16, 64]},
  "surface": {"M": [0.5, 1]}, "epsilon": [0.25, 0.125],
  "power": {"iterations": 50}
})";

}  // namespace

TEST_CASE("config rejections") {
  CHECK_THROWS_AS(parse_config(R"({"grid": {"h": 0.125, "dt": 0.02}})", "gamma"), ConfigError);
  CHECK_NOTHROW(parse_config(R"({"grid": {"h": 0.125, "dt": 0.015625}})", "gamma"));
  CHECK_THROWS_AS(parse_config(R"({"epsilon": [0.5], "colour": 1})", "t1"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"grid": {"H": 0.1}})", "t1"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"experiment": "spectrum"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"experiment": "cdm"})", "gamma"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"kernels": ["K9"]})", "kernel-check"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"probes": "many"})", "kernel-check"), ConfigError);
  CHECK_THROWS_AS(parse_config("{", "kernel-check"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"delta": [0.25]})", "gamma"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"epsilon": []})", "norm-sweep"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"harmonics": {"k_max": 8}})", "harmonics"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
  CHECK(experiment_names().size() == 8);
}

TEST_CASE("zero kernel sweep") {
  const auto c = parse_config(kZeroSweep);
  const auto r = run(c);
  CHECK(r.passed());
  int norms = 0;
  for (const auto& ck : r.checks) {
    if (ck.name.rfind("norm", 0) == 0 && ck.relation == "info") {
      CHECK(ck.value == 0.0);
      ++norms;
    }
  }
  CHECK(norms > 0);
}

TEST_CASE("kernel-check run, determinism and threads") {
  const auto c = parse_config(R"({"kernels": ["K1"], "order": 1, "probes": 60})", "kernel-check");
  const auto r1 = run(c);
  CHECK(r1.passed());
  REQUIRE(r1.find("cz[kernel=K1,N=1]") != nullptr);
  CHECK(r1.find("cz[kernel=K1,N=1]")->pass);
  CHECK(report_json(run(c)) == report_json(r1));

  auto c4 = c;
  c4.threads = 4;
  const auto r4 = run(c4);
  REQUIRE(r4.checks.size() == r1.checks.size());
  for (std::size_t i = 0; i < r1.checks.size(); ++i) {
    CHECK(r4.checks[i].name == r1.checks[i].name);
    CHECK(r4.checks[i].value == r1.checks[i].value);
  }

  const auto dir = std::filesystem::temp_directory_path() / "parsio_harness_test";
  std::filesystem::remove_all(dir);
  const auto rz = run(parse_config(kZeroSweep), dir.string());
  write_report(rz, dir.string());
  std::ifstream in(dir / "report.json");
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == report_json(rz));
  CHECK(std::filesystem::exists(dir / "timing.json"));
  bool csv = false;
  for (const auto& e : std::filesystem::directory_iterator(dir)) csv |= e.path().extension() == ".csv";
  CHECK(csv);
  std::filesystem::remove_all(dir);
}

TEST_CASE("shipped configs equal the defaults") {
  const char* dir = std::getenv("PARSIO_CONFIG_DIR");
  if (!dir) {
    MESSAGE("PARSIO_CONFIG_DIR not set; skipped");
    return;
  }
  for (const auto& name : experiment_names()) {
    CAPTURE(name);
    const auto shipped = load_config(std::string(dir) + "/" + name + ".json", name);
    CHECK(config_json(shipped) == config_json(parse_config("{}", name)));
  }
}
