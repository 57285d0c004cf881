#pragma once

#include <string>

#include "byzfed/attacks.hpp"
#include "byzfed/lrcs.hpp"
#include "byzfed/pca.hpp"

namespace byzfed {

/// One Monte-Carlo experiment. Key names match the CSV columns; the extra
/// lrcs knobs (m, T_gd, eps_exit, rev_multiplier) and the pca spectrum are
/// config-file keys too.
struct ExperimentConfig {
  std::string experiment = "pca";  // pca | lrcs
  std::string estimator = "subsmed";
  std::string attack = "none";
  int n = 0;
  int r = 0;
  long q = 0;
  int L = 1;
  int L_byz = 0;
  int L_tilde = 1;
  int T_pow = 10;
  int T_gm = 10;
  int runs = 100;
  std::uint64_t seed = 1;

  std::string spectrum = "low_rank_15";  // pca
  int m = 0;                             // lrcs measurements per column
  int T_gd = 0;                          // lrcs GD iterations
  double eps_exit = 0.0;                 // lrcs early exit on Error
  double rev_multiplier = 10.0;          // lrcs reverse-gradient C
  bool timing = true;                    // false zeroes recorded wall times

  void validate() const;
};

/// pca estimators: baseline | subsmed | respowmeth | subsmom | svdrescov
/// lrcs estimators: subsmed_init | subsmom_init | byz_altgdmin_median |
///                  byz_altgdmin_mom | altgdmin_baseline

struct RunResult {
  double sdf = 0.0;     // SD_F(U*, estimate); final value for lrcs runs
  double sd2 = 0.0;     // spectral subspace distance of the same estimate
  double time_s = 0.0;  // wall time of the estimator call only
  std::vector<double> trace;  // lrcs: Error = SD_F/sqrt(r) per iteration
};

struct ExperimentRecord {
  ExperimentConfig config;
  std::vector<RunResult> per_run;
  double max_sdf = 0.0;
  double mean_sdf = 0.0;
  double mean_sd2 = 0.0;  // carried in the JSON record only; the CSV schema is fixed
  double mean_time_s = 0.0;
};

/// Runs the Monte-Carlo sweep. Run i uses a seed derived from (config.seed, i);
/// ground truth is drawn once from config.seed, outside the loop. Per-run
/// failures are recorded (sdf = NaN) without aborting the sweep. The
/// BYZFED_THREADS environment variable caps worker parallelism.
ExperimentRecord run_experiment(const ExperimentConfig& cfg);

/// Executes one run of the experiment; exposed so tests can pin individual
/// runs. run_index selects the per-run seed stream.
RunResult run_single(const ExperimentConfig& cfg, int run_index);

std::string csv_header();
std::string to_csv_row(const ExperimentRecord& record);
void emit_csv(const std::vector<ExperimentRecord>& records, const std::string& path);
void emit_json(const std::vector<ExperimentRecord>& records, const std::string& path);
std::vector<ExperimentRecord> load_records_json(const std::string& path);

/// Parses the key = value experiment file format (one experiment per file,
/// '#' comments). Unknown keys are errors.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

/// Named reproduction grids. paper scale keeps the tables' parameters with
/// runs reduced to 100; desk scale shrinks n and r for quick runs.
std::vector<ExperimentConfig> table_suite(const std::string& name, const std::string& scale);

}  // namespace byzfed
