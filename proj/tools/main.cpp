#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "parsio/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"parsio: parabolic singular integral experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", PARSIO_VERSION);

  std::string config_path, out_dir = "out";
  std::uint64_t seed = 0;
  int threads = 0;
  for (const auto& name : parsio::experiment_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "RNG seed (overrides the config)");
    sub->add_option("--threads", threads, "worker threads (overrides the config)")
        ->check(CLI::PositiveNumber);
  }
  CLI11_PARSE(app, argc, argv);
  const std::string experiment = app.get_subcommands().front()->get_name();
  auto* sub = app.get_subcommands().front();

  try {
    parsio::ExperimentConfig cfg = config_path.empty()
                                       ? parsio::parse_config("{}", experiment)
                                       : parsio::load_config(config_path, experiment);
    if (sub->count("--seed")) cfg.seed = seed;
    if (sub->count("--threads")) cfg.threads = threads;
    parsio::validate(cfg);
    const auto report = parsio::run(cfg, out_dir);
    parsio::write_report(report, out_dir);
    int failed = 0;
    for (const auto& c : report.checks) {
      if (c.relation == "info") continue;
      std::printf("%-4s %s  %.6g %s %.6g\n", c.pass ? "ok" : "FAIL", c.name.c_str(), c.value,
                  c.relation.c_str(), c.threshold);
      failed += c.pass ? 0 : 1;
    }
    std::printf("%s: %d check(s) failed; report in %s/report.json\n", experiment.c_str(), failed,
                out_dir.c_str());
    return report.passed() ? 0 : 1;
  } catch (const parsio::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
