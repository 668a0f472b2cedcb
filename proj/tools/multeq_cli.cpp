// Command-line front end: runs a configured experiment and writes
// <out>/report.json and <out>/table.csv.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "multeq/experiment.hpp"

namespace ex = multeq::experiment;

int main(int argc, char** argv) {
  CLI::App app{"Exact experiments on multiplicative energy, lattices and structured sets"};
  app.require_subcommand(1, 1);

  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  int jobs = 1;
  bool no_cache = false;
  for (const auto& name : ex::commands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory (default: config output.dir, else ./out)");
    sub->add_option("--seed", seed, "seed overriding the config");
    sub->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--no-cache", no_cache, "ignore and do not update the result cache");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  CLI::App* sub = app.get_subcommand(command);

  try {
    ex::ExperimentConfig cfg = ex::load_config(config_path);
    if (!cfg.command.empty() && cfg.command != command)
      throw ex::ConfigError("config is for '" + cfg.command + "', not '" + command + "'");
    cfg.command = command;
    if (sub->count("--seed")) cfg.seed = seed;
    if (sub->count("--out")) cfg.out_dir = out_dir;
    cfg.jobs = jobs;
    cfg.use_cache = !no_cache;

    std::filesystem::path out(cfg.out_dir);
    ex::ResultCache cache;
    if (cfg.use_cache) cache = ex::ResultCache(cfg.cache_file ? std::filesystem::path(*cfg.cache_file) : out / "cache.jsonl");

    ex::RunResult rr = ex::run(cfg, cache);
    ex::write_outputs(rr, out);
    std::cerr << command << ": " << rr.rows.size() << " point(s), " << rr.cache_hits << " cached, "
              << (rr.exit_code == 0 ? "all checks passed" : "CHECKS FAILED") << "\n";
    for (const auto& f : rr.failures) std::cerr << "  " << f << "\n";
    return rr.exit_code;
  } catch (const ex::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const multeq::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
