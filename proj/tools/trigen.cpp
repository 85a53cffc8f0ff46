// trigen: run generator-set certification batches and inspect their reports.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "trigen/pipeline.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& out_path, unsigned jobs, const std::string& cache) {
  const trigen::JobConfig cfg = trigen::load_config(config_path);
  trigen::RunOptions opt;
  opt.jobs = jobs;
  if (!cache.empty()) opt.cache_dir = cache;
  const trigen::RunOutcome res = trigen::run(cfg, opt);
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw trigen::ConfigError("cannot write '" + out_path + "'");
  out << res.report;
  out.close();
  std::cerr << "trigen: " << res.jobs << " job(s) written to " << out_path << " (cache " << res.cache_hits << " hit, "
            << res.cache_misses << " miss)\n";
  if (res.exit_code == trigen::kExitResource) std::cerr << "trigen: at least one job hit a resource cap\n";
  return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explicit three-generator sets for arithmetic groups, certified exactly"};
  app.require_subcommand(1);
  app.set_version_flag("--version", TRIGEN_VERSION);

  std::string config_path, out_path, cache_dir, report_path, field_name;
  unsigned jobs = 1;

  auto* run = app.add_subcommand("run", "Run every job in a config and write a JSON report");
  run->add_option("config", config_path, "Config JSON")->required();
  run->add_option("--out,-o", out_path, "Report path")->required();
  run->add_option("--jobs,-j", jobs, "Worker threads")->check(CLI::PositiveNumber);
  run->add_option("--cache", cache_dir, std::string("Cache directory (overrides ") + trigen::kCacheEnv + ")");

  auto* explain = app.add_subcommand("explain", "Print the verdict table of a report");
  explain->add_option("report", report_path, "Report JSON")->required();

  auto* info = app.add_subcommand("field-info", "Print invariants and theta certificate of a field");
  info->add_option("config", config_path, "Config JSON")->required();
  info->add_option("--field", field_name, "Field name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : trigen::kExitUsage;
  }

  try {
    if (*run) return cmd_run(config_path, out_path, jobs, cache_dir);
    if (*explain) {
      std::cout << trigen::explain(trigen::read_file(report_path));
      return trigen::kExitOk;
    }
    if (*info) {
      std::cout << trigen::field_info(trigen::load_config(config_path), field_name);
      return trigen::kExitOk;
    }
  } catch (const trigen::ConfigError& e) {
    std::cerr << "trigen: " << e.what() << "\n";
    return trigen::kExitUsage;
  } catch (const trigen::CapExceeded& e) {
    std::cerr << "trigen: resource cap: " << e.what() << "\n";
    return trigen::kExitResource;
  } catch (const std::exception& e) {
    std::cerr << "trigen: " << e.what() << "\n";
    return 1;
  }
  return trigen::kExitOk;
}
