// Monte-Carlo experiment runner for the resilient federated subspace
// estimators and the Byz-AltGDmin solver.
//
//   bench_cli run <config-file> [--out DIR] [--no-timing]
//   bench_cli suite <name> --scale <paper|desk> [--runs N] [--out DIR] [--no-timing]
//   bench_cli report <record.json> --format <csv|json> [--out FILE]

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "byzfed/bench.hpp"

namespace fs = std::filesystem;

namespace {

void print_summary(const byzfed::ExperimentRecord& record) {
  const auto& c = record.config;
  std::printf("%-6s %-20s %-16s n=%-5d r=%-3d L=%-3d L_byz=%-2d  max %.4f  mean %.4f  %.3fs\n",
              c.experiment.c_str(), c.estimator.c_str(), c.attack.c_str(), c.n, c.r, c.L,
              c.L_byz, record.max_sdf, record.mean_sdf, record.mean_time_s);
}

std::string stem_of(const std::string& path) {
  const fs::path p(path);
  return p.stem().string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Byzantine-resilient federated subspace estimation benchmarks"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", suite_name, scale = "desk";
  std::string record_path, report_format = "csv", report_out;
  int runs_override = 0;
  bool no_timing = false;

  CLI::App* run_cmd = app.add_subcommand("run", "Run one experiment from a config file");
  run_cmd->add_option("config", config_path, "key = value experiment file")->required();
  run_cmd->add_option("--out", out_dir, "output directory");
  run_cmd->add_flag("--no-timing", no_timing, "record zero wall times (byte-stable output)");

  CLI::App* suite_cmd = app.add_subcommand("suite", "Run a named reproduction suite");
  suite_cmd->add_option("name", suite_name, "exp1 | exp2 | mom1 | lrcs_fig")->required();
  suite_cmd->add_option("--scale", scale, "paper | desk")->required();
  suite_cmd->add_option("--runs", runs_override, "override Monte-Carlo run count");
  suite_cmd->add_option("--out", out_dir, "output directory");
  suite_cmd->add_flag("--no-timing", no_timing, "record zero wall times (byte-stable output)");

  CLI::App* report_cmd = app.add_subcommand("report", "Re-emit a persisted record");
  report_cmd->add_option("record", record_path, "record JSON produced by run/suite")->required();
  report_cmd->add_option("--format", report_format, "csv | json");
  report_cmd->add_option("--out", report_out, "output file (default derived from input)");

  CLI11_PARSE(app, argc, argv);

  try {
    fs::create_directories(out_dir);
    if (*run_cmd) {
      byzfed::ExperimentConfig cfg = byzfed::load_config_file(config_path);
      if (no_timing) cfg.timing = false;
      const byzfed::ExperimentRecord record = byzfed::run_experiment(cfg);
      print_summary(record);
      const std::string base = (fs::path(out_dir) / stem_of(config_path)).string();
      byzfed::emit_csv({record}, base + ".csv");
      byzfed::emit_json({record}, base + ".json");
      std::printf("wrote %s.csv and %s.json\n", base.c_str(), base.c_str());
    } else if (*suite_cmd) {
      std::vector<byzfed::ExperimentConfig> configs = byzfed::table_suite(suite_name, scale);
      std::vector<byzfed::ExperimentRecord> records;
      records.reserve(configs.size());
      for (auto& cfg : configs) {
        if (runs_override > 0) cfg.runs = runs_override;
        if (no_timing) cfg.timing = false;
        records.push_back(byzfed::run_experiment(cfg));
        print_summary(records.back());
      }
      const std::string base =
          (fs::path(out_dir) / (suite_name + "_" + scale)).string();
      byzfed::emit_csv(records, base + ".csv");
      byzfed::emit_json(records, base + ".json");
      std::printf("wrote %s.csv and %s.json\n", base.c_str(), base.c_str());
    } else if (*report_cmd) {
      const std::vector<byzfed::ExperimentRecord> records =
          byzfed::load_records_json(record_path);
      std::string out = report_out;
      if (out.empty())
        out = (fs::path(record_path).parent_path() / (stem_of(record_path) + "_report." + report_format))
                  .string();
      if (report_format == "csv")
        byzfed::emit_csv(records, out);
      else if (report_format == "json")
        byzfed::emit_json(records, out);
      else
        throw byzfed::ConfigError("unknown report format: " + report_format);
      std::printf("wrote %s\n", out.c_str());
    }
  } catch (const byzfed::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const byzfed::UnknownSuiteError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const byzfed::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
