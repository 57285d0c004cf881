#include "byzfed/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "byzfed/rng.hpp"

namespace byzfed {

namespace {

constexpr std::uint64_t kRunTag = 0x52554Eull;  // "RUN"

bool is_pca_estimator(const std::string& e) {
  return e == "baseline" || e == "subsmed" || e == "respowmeth" || e == "subsmom" ||
         e == "svdrescov";
}

bool is_lrcs_estimator(const std::string& e) {
  return e == "subsmed_init" || e == "subsmom_init" || e == "byz_altgdmin_median" ||
         e == "byz_altgdmin_mom" || e == "altgdmin_baseline";
}

// Byzantine ids spread round-robin across minibatches (worst-case placement an
// omniscient adversary would pick): the j-th corrupted node is the
// (j / L~ + 1)-th member of batch (j mod L~).
std::vector<int> spread_byzantine_ids(int L, int L_byz, int L_tilde) {
  const int rho = L / L_tilde;
  std::vector<int> ids;
  ids.reserve(L_byz);
  for (int j = 0; j < L_byz; ++j) {
    const int theta = j % L_tilde;
    const int ell = j / L_tilde + 1;
    ids.push_back(theta * rho + ell);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

FederationConfig make_federation(const ExperimentConfig& cfg, std::uint64_t run_seed) {
  FederationConfig fed;
  fed.num_nodes = cfg.L;
  fed.minibatches = cfg.L_tilde;
  fed.byzantine_ids = spread_byzantine_ids(cfg.L, cfg.L_byz, cfg.L_tilde);
  fed.seed = run_seed;
  fed.validate();
  return fed;
}

BasisMatrix run_timer(const std::function<BasisMatrix()>& body, bool timing,
                      double& elapsed_s) {
  const auto start = std::chrono::steady_clock::now();
  BasisMatrix value = body();
  const auto stop = std::chrono::steady_clock::now();
  elapsed_s = timing ? std::chrono::duration<double>(stop - start).count() : 0.0;
  return value;
}

// ---------------------------------------------------------------------------
// PCA runs

RunResult run_pca_single(const ExperimentConfig& cfg, const PcaModel& model, int run_index) {
  const std::uint64_t run_seed = derive_seed(cfg.seed, kRunTag, run_index);
  const PcaShards shards = sample_shards(model, cfg.q, cfg.L, run_seed);
  const Eigen::Index q_tilde = shards.columns_per_shard();
  const FederationConfig fed = make_federation(cfg, run_seed);
  const AttackKind kind = attack_kind_from_string(cfg.attack);
  const BasisMatrix u_star = model.top_r();

  std::vector<NodeOperator> ops;
  ops.reserve(cfg.L);
  for (const auto& d : shards.shards)
    ops.push_back([&d, q_tilde](const Matrix& u) -> Matrix {
      return d * (d.transpose() * u) / static_cast<double>(q_tilde);
    });

  EstimatorConfig est;
  est.rank = cfg.r;
  est.t_pow = cfg.T_pow;
  est.t_gm = cfg.T_gm;

  // Attack scale: payload-matched sqrt(r) for the basis round of subsmed, the
  // filter threshold 1.1 sigma_1 sqrt(r) wherever payloads are Phi_l U.
  AttackParams params;
  params.rev_multiplier = cfg.rev_multiplier;
  double omega_scale = std::sqrt(static_cast<double>(cfg.r));
  if (cfg.estimator == "respowmeth" || cfg.estimator == "subsmom") {
    const double sigma1 = estimate_sigma1(shards, 30, run_seed);
    omega_scale = 1.1 * sigma1 * std::sqrt(static_cast<double>(cfg.r));
  }
  params.omega = omega_scale;
  const Eigen::Index payload_cols = cfg.estimator == "svdrescov" ? cfg.n : cfg.r;
  params.c_attack = attack_entry_scale(omega_scale, cfg.n, payload_cols);
  // subsmom aggregates per-batch sums, so the colluding nodes steer whole
  // batch aggregates; elsewhere payloads are consumed individually.
  const Adversary adversary =
      cfg.L_byz == 0 ? no_adversary()
      : cfg.estimator == "subsmom"
          ? make_batch_steering_adversary(kind, params, cfg.L, cfg.L_tilde)
          : make_matrix_adversary(kind, params);

  RunResult result;
  const BasisMatrix estimate = run_timer(
      [&]() -> BasisMatrix {
        if (cfg.estimator == "baseline") {
          return federated_power_method_baseline(ops, cfg.n, est, run_seed).basis;
        }
        if (cfg.estimator == "subsmed") {
          PowerMethodConfig pm;
          pm.rank = cfg.r;
          pm.iterations = cfg.T_pow;
          pm.seed = u_rand_stream(run_seed);
          const CenterState state{Matrix(), 0};
          const HonestCompute honest = [&](int id) -> PayloadContent {
            return topr_left_singular(shards.shards[id - 1], pm).columns();
          };
          const auto transcript = run_round(fed, state, honest, adversary);
          std::vector<Matrix> bases;
          bases.reserve(transcript.size());
          for (const auto& p : transcript) bases.push_back(std::get<Matrix>(p.content));
          return subspace_median(bases, est, run_seed).basis;
        }
        if (cfg.estimator == "respowmeth") {
          est.omega = params.omega;  // 1.1 sigma_1 sqrt(r)
          return res_pow_meth(ops, cfg.n, est, fed, adversary, run_seed).basis;
        }
        if (cfg.estimator == "subsmom") {
          return subspace_mom(ops, cfg.n, est, fed, adversary, run_seed).basis;
        }
        if (cfg.estimator == "svdrescov") {
          const CenterState state{Matrix(), 0};
          const HonestCompute honest = [&](int id) -> PayloadContent {
            return node_covariance(shards.shards[id - 1]);
          };
          const auto transcript = run_round(fed, state, honest, adversary);
          std::vector<Matrix> covs;
          covs.reserve(transcript.size());
          for (const auto& p : transcript) covs.push_back(std::get<Matrix>(p.content));
          return svd_res_cov_est(covs, est, run_seed).basis;
        }
        throw ConfigError("unknown pca estimator: " + cfg.estimator);
      },
      cfg.timing, result.time_s);
  result.sdf = sd_f(u_star, estimate);
  result.sd2 = sd_2(u_star, estimate);
  return result;
}

// ---------------------------------------------------------------------------
// LRCS runs

RunResult run_lrcs_single(const ExperimentConfig& cfg, const LrcsGroundTruth& truth,
                          int run_index) {
  const std::uint64_t run_seed = derive_seed(cfg.seed, kRunTag, run_index);
  const LrcsInstance instance = sample_lrcs_measurements(truth, cfg.m, cfg.L, run_seed);
  const FederationConfig fed = make_federation(cfg, run_seed);
  const AttackKind kind = attack_kind_from_string(cfg.attack);
  const BasisMatrix u_star{truth.u_star};
  const double sqrt_r = std::sqrt(static_cast<double>(cfg.r));

  AttackParams params;
  params.rev_multiplier = cfg.rev_multiplier;
  params.omega = sqrt_r;
  params.c_attack = 1e3;  // corrupted scalar; immaterial under the 50% median breakdown
  const Adversary scalar_adv =
      cfg.L_byz == 0 ? no_adversary() : make_scalar_adversary(params);
  const Adversary matrix_adv =
      cfg.L_byz == 0 ? no_adversary() : make_matrix_adversary(kind, params);

  InitConfig init;
  init.t_pow = cfg.T_pow;
  init.t_gm = cfg.T_gm;
  init.minibatches = cfg.L_tilde;

  GdConfig gd;
  gd.iterations = cfg.T_gd;
  gd.t_gm = cfg.T_gm;
  gd.minibatches = cfg.L_tilde;
  gd.eps_exit = cfg.eps_exit;

  RunResult result;
  const BasisMatrix estimate = run_timer(
      [&]() -> BasisMatrix {
        if (cfg.estimator == "subsmed_init") {
          return spectral_init_median(instance, init, fed, scalar_adv, matrix_adv, run_seed)
              .estimate.basis;
        }
        if (cfg.estimator == "subsmom_init") {
          return spectral_init_mom(instance, init, fed, scalar_adv, matrix_adv, run_seed)
              .estimate.basis;
        }
        if (cfg.estimator == "byz_altgdmin_median" || cfg.estimator == "byz_altgdmin_mom" ||
            cfg.estimator == "altgdmin_baseline") {
          InitMode mode = InitMode::MoM;
          if (cfg.estimator == "byz_altgdmin_median") mode = InitMode::Median;
          AltGdMinResult out = byz_altgdmin(instance, init, gd, fed, scalar_adv, matrix_adv,
                                            mode, run_seed);
          result.trace = std::move(out.error_trace);
          return out.state.u;
        }
        throw ConfigError("unknown lrcs estimator: " + cfg.estimator);
      },
      cfg.timing, result.time_s);
  (void)sqrt_r;
  result.sdf = sd_f(u_star, estimate);
  result.sd2 = sd_2(u_star, estimate);
  return result;
}

int worker_count(int runs) {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("BYZFED_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) n = parsed;
  }
  return std::max(1, std::min(n, runs));
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (experiment != "pca" && experiment != "lrcs")
    throw ConfigError("experiment must be pca or lrcs");
  if (experiment == "pca" && !is_pca_estimator(estimator))
    throw ConfigError("unknown pca estimator: " + estimator);
  if (experiment == "lrcs" && !is_lrcs_estimator(estimator))
    throw ConfigError("unknown lrcs estimator: " + estimator);
  attack_kind_from_string(attack);  // throws on unknown names
  if (n < 2 || r < 1 || r >= n) throw ConfigError("need n >= 2 and 1 <= r < n");
  if (q < 1) throw ConfigError("q must be positive");
  if (L < 1) throw ConfigError("L must be >= 1");
  if (experiment == "pca" && q % L != 0) throw ConfigError("L must divide q");
  if (L_byz < 0 || 2 * L_byz >= L) throw ConfigError("need L_byz < L/2");
  if (L_tilde < 1 || L % L_tilde != 0) throw ConfigError("L_tilde must divide L");
  if (T_pow < 1 || T_gm < 1) throw ConfigError("T_pow and T_gm must be >= 1");
  if (runs < 1) throw ConfigError("runs must be >= 1");
  if (experiment == "pca") {
    spectrum_from_name(spectrum, n, r);  // throws on unknown names
    if (q / L < r + 1) throw ConfigError("pca needs q/L >= r + 1");
    if ((estimator == "baseline") && (L_byz != 0 || attack != "none"))
      throw ConfigError("the no-attack baseline cannot be combined with an attack");
    if (estimator == "subsmom" && L_tilde < 2)
      throw ConfigError("subsmom needs L_tilde >= 2");
  } else {
    if (m < 1 || m % L != 0) throw ConfigError("L must divide m");
    if (m / L < r) throw ConfigError("lrcs needs m/L >= r");
    if (estimator == "byz_altgdmin_median" || estimator == "byz_altgdmin_mom" ||
        estimator == "altgdmin_baseline") {
      if (T_gd < 1) throw ConfigError("T_gd must be >= 1 for gd estimators");
    }
    if (estimator == "altgdmin_baseline" && (L_byz != 0 || attack != "none"))
      throw ConfigError("the no-attack baseline cannot be combined with an attack");
    if (attack == "orthogonal" && 2 * r > n)
      throw ConfigError("orthogonal attack needs r <= n - r");
  }
  if (L_byz > 0 && attack == "none")
    throw ConfigError("byzantine nodes present but attack is none");
}

RunResult run_single(const ExperimentConfig& cfg, int run_index) {
  cfg.validate();
  if (cfg.experiment == "pca") {
    const PcaModel model = generate_pca_model(cfg.n, cfg.r, cfg.spectrum, cfg.seed);
    return run_pca_single(cfg, model, run_index);
  }
  const LrcsGroundTruth truth = make_lrcs_ground_truth(cfg.n, cfg.q, cfg.r, cfg.seed);
  return run_lrcs_single(cfg, truth, run_index);
}

ExperimentRecord run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentRecord record;
  record.config = cfg;
  record.per_run.resize(cfg.runs);

  // Ground truth is drawn once, outside the Monte-Carlo loop.
  PcaModel model;
  LrcsGroundTruth truth;
  if (cfg.experiment == "pca")
    model = generate_pca_model(cfg.n, cfg.r, cfg.spectrum, cfg.seed);
  else
    truth = make_lrcs_ground_truth(cfg.n, cfg.q, cfg.r, cfg.seed);

  std::atomic<int> next{0};
  const auto worker = [&]() {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= cfg.runs) break;
      try {
        record.per_run[i] = cfg.experiment == "pca" ? run_pca_single(cfg, model, i)
                                                    : run_lrcs_single(cfg, truth, i);
      } catch (const std::exception& e) {
        std::fprintf(stderr, "run %d failed: %s\n", i, e.what());
        record.per_run[i].sdf = std::numeric_limits<double>::quiet_NaN();
        record.per_run[i].time_s = 0.0;
      }
    }
  };
  const int threads = worker_count(cfg.runs);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  double max_sdf = -std::numeric_limits<double>::infinity();
  double sum_sdf = 0.0, sum_sd2 = 0.0, sum_time = 0.0;
  int valid = 0;
  for (const auto& run : record.per_run) {
    if (!std::isfinite(run.sdf)) continue;
    max_sdf = std::max(max_sdf, run.sdf);
    sum_sdf += run.sdf;
    sum_sd2 += run.sd2;
    sum_time += run.time_s;
    ++valid;
  }
  if (valid == 0) {
    record.max_sdf = record.mean_sdf = record.mean_sd2 =
        std::numeric_limits<double>::quiet_NaN();
    record.mean_time_s = 0.0;
  } else {
    record.max_sdf = max_sdf;
    record.mean_sdf = sum_sdf / valid;
    record.mean_sd2 = sum_sd2 / valid;
    record.mean_time_s = sum_time / valid;
  }
  return record;
}

// ---------------------------------------------------------------------------
// Reporting

std::string csv_header() {
  return "experiment,estimator,attack,n,r,q,L,L_byz,L_tilde,T_pow,T_gm,max_sdf,mean_sdf,"
         "mean_time_s,runs,seed";
}

std::string to_csv_row(const ExperimentRecord& record) {
  const ExperimentConfig& c = record.config;
  std::ostringstream out;
  out << c.experiment << ',' << c.estimator << ',' << c.attack << ',' << c.n << ',' << c.r
      << ',' << c.q << ',' << c.L << ',' << c.L_byz << ',' << c.L_tilde << ',' << c.T_pow
      << ',' << c.T_gm << ',' << format_double(record.max_sdf) << ','
      << format_double(record.mean_sdf) << ',' << format_double(record.mean_time_s) << ','
      << c.runs << ',' << c.seed;
  return out.str();
}

void emit_csv(const std::vector<ExperimentRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("emit_csv: cannot open " + path);
  out << csv_header() << '\n';
  for (const auto& r : records) out << to_csv_row(r) << '\n';
  if (!out) throw IoError("emit_csv: write failed for " + path);
}

namespace {

nlohmann::json config_to_json(const ExperimentConfig& c) {
  return nlohmann::json{{"experiment", c.experiment},
                        {"estimator", c.estimator},
                        {"attack", c.attack},
                        {"n", c.n},
                        {"r", c.r},
                        {"q", c.q},
                        {"L", c.L},
                        {"L_byz", c.L_byz},
                        {"L_tilde", c.L_tilde},
                        {"T_pow", c.T_pow},
                        {"T_gm", c.T_gm},
                        {"runs", c.runs},
                        {"seed", c.seed},
                        {"spectrum", c.spectrum},
                        {"m", c.m},
                        {"T_gd", c.T_gd},
                        {"eps_exit", c.eps_exit},
                        {"rev_multiplier", c.rev_multiplier},
                        {"timing", c.timing}};
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  c.experiment = j.at("experiment").get<std::string>();
  c.estimator = j.at("estimator").get<std::string>();
  c.attack = j.at("attack").get<std::string>();
  c.n = j.at("n").get<int>();
  c.r = j.at("r").get<int>();
  c.q = j.at("q").get<long>();
  c.L = j.at("L").get<int>();
  c.L_byz = j.at("L_byz").get<int>();
  c.L_tilde = j.at("L_tilde").get<int>();
  c.T_pow = j.at("T_pow").get<int>();
  c.T_gm = j.at("T_gm").get<int>();
  c.runs = j.at("runs").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.spectrum = j.at("spectrum").get<std::string>();
  c.m = j.at("m").get<int>();
  c.T_gd = j.at("T_gd").get<int>();
  c.eps_exit = j.at("eps_exit").get<double>();
  c.rev_multiplier = j.at("rev_multiplier").get<double>();
  c.timing = j.at("timing").get<bool>();
  return c;
}

}  // namespace

void emit_json(const std::vector<ExperimentRecord>& records, const std::string& path) {
  nlohmann::json root = nlohmann::json::array();
  for (const auto& record : records) {
    nlohmann::json j;
    j["config"] = config_to_json(record.config);
    j["max_sdf"] = record.max_sdf;
    j["mean_sdf"] = record.mean_sdf;
    j["mean_sd2"] = record.mean_sd2;
    j["mean_time_s"] = record.mean_time_s;
    nlohmann::json sdf = nlohmann::json::array();
    nlohmann::json sd2 = nlohmann::json::array();
    nlohmann::json times = nlohmann::json::array();
    bool any_trace = false;
    for (const auto& run : record.per_run) {
      sdf.push_back(run.sdf);
      sd2.push_back(run.sd2);
      times.push_back(run.time_s);
      any_trace = any_trace || !run.trace.empty();
    }
    j["sdf"] = std::move(sdf);
    j["sd2"] = std::move(sd2);
    j["time_s"] = std::move(times);
    if (any_trace) {
      nlohmann::json traces = nlohmann::json::array();
      for (const auto& run : record.per_run) traces.push_back(run.trace);
      j["traces"] = std::move(traces);
    }
    root.push_back(std::move(j));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("emit_json: cannot open " + path);
  out << root.dump(2) << '\n';
  if (!out) throw IoError("emit_json: write failed for " + path);
}

std::vector<ExperimentRecord> load_records_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("load_records_json: cannot open " + path);
  nlohmann::json root;
  try {
    in >> root;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("load_records_json: " + std::string(e.what()));
  }
  std::vector<ExperimentRecord> records;
  for (const auto& j : root) {
    ExperimentRecord record;
    record.config = config_from_json(j.at("config"));
    record.max_sdf = j.at("max_sdf").get<double>();
    record.mean_sdf = j.at("mean_sdf").get<double>();
    record.mean_sd2 = j.value("mean_sd2", 0.0);
    record.mean_time_s = j.at("mean_time_s").get<double>();
    const auto& sdf = j.at("sdf");
    const auto& times = j.at("time_s");
    record.per_run.resize(sdf.size());
    for (std::size_t i = 0; i < sdf.size(); ++i) {
      record.per_run[i].sdf = sdf[i].get<double>();
      record.per_run[i].time_s = times[i].get<double>();
    }
    if (j.contains("sd2")) {
      const auto& sd2 = j.at("sd2");
      for (std::size_t i = 0; i < sd2.size() && i < record.per_run.size(); ++i)
        record.per_run[i].sd2 = sd2[i].get<double>();
    }
    if (j.contains("traces")) {
      const auto& traces = j.at("traces");
      for (std::size_t i = 0; i < traces.size() && i < record.per_run.size(); ++i)
        record.per_run[i].trace = traces[i].get<std::vector<double>>();
    }
    records.push_back(std::move(record));
  }
  return records;
}

// ---------------------------------------------------------------------------
// Config files

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("expected a boolean, got: " + v);
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "experiment") cfg.experiment = value;
      else if (key == "estimator") cfg.estimator = value;
      else if (key == "attack") cfg.attack = value;
      else if (key == "n") cfg.n = std::stoi(value);
      else if (key == "r") cfg.r = std::stoi(value);
      else if (key == "q") cfg.q = std::stol(value);
      else if (key == "L") cfg.L = std::stoi(value);
      else if (key == "L_byz") cfg.L_byz = std::stoi(value);
      else if (key == "L_tilde") cfg.L_tilde = std::stoi(value);
      else if (key == "T_pow") cfg.T_pow = std::stoi(value);
      else if (key == "T_gm") cfg.T_gm = std::stoi(value);
      else if (key == "runs") cfg.runs = std::stoi(value);
      else if (key == "seed") cfg.seed = std::stoull(value);
      else if (key == "spectrum") cfg.spectrum = value;
      else if (key == "m") cfg.m = std::stoi(value);
      else if (key == "T_gd") cfg.T_gd = std::stoi(value);
      else if (key == "eps_exit") cfg.eps_exit = std::stod(value);
      else if (key == "rev_multiplier") cfg.rev_multiplier = std::stod(value);
      else if (key == "timing") cfg.timing = parse_bool(value);
      else throw ConfigError("unknown config key: " + key);
    } catch (const std::invalid_argument&) {
      throw ConfigError("config line " + std::to_string(line_no) + ": bad value for " + key);
    } catch (const std::out_of_range&) {
      throw ConfigError("config line " + std::to_string(line_no) + ": value out of range");
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("load_config_file: cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

// ---------------------------------------------------------------------------
// Suites

namespace {

struct PcaGrid {
  int n, r;
  long q;
  int L, L_byz, L_tilde, runs;
  std::string spectrum;
};

void push_pca_grid(std::vector<ExperimentConfig>& out, const PcaGrid& g, bool with_mom,
                   std::uint64_t seed) {
  static const char* kAttacks[] = {"alternating", "ones", "orthogonal"};
  std::vector<std::string> estimators = {"subsmed", "respowmeth"};
  if (with_mom) estimators.insert(estimators.begin(), "subsmom");
  for (const auto& est : estimators) {
    for (const char* attack : kAttacks) {
      ExperimentConfig cfg;
      cfg.experiment = "pca";
      cfg.estimator = est;
      cfg.attack = attack;
      cfg.n = g.n;
      cfg.r = g.r;
      cfg.q = g.q;
      cfg.L = g.L;
      cfg.L_byz = g.L_byz;
      cfg.L_tilde = est == "subsmom" ? g.L_tilde : (with_mom ? g.L_tilde : 1);
      cfg.runs = g.runs;
      cfg.seed = seed;
      cfg.spectrum = g.spectrum;
      out.push_back(cfg);
    }
  }
  ExperimentConfig base;
  base.experiment = "pca";
  base.estimator = "baseline";
  base.attack = "none";
  base.n = g.n;
  base.r = g.r;
  base.q = g.q;
  base.L = g.L;
  base.L_byz = 0;
  base.L_tilde = 1;
  base.runs = g.runs;
  base.seed = seed;
  base.spectrum = g.spectrum;
  out.push_back(base);
}

}  // namespace

std::vector<ExperimentConfig> table_suite(const std::string& name, const std::string& scale) {
  const bool paper = scale == "paper";
  if (!paper && scale != "desk")
    throw UnknownSuiteError("unknown scale: " + scale + " (expected paper or desk)");
  std::vector<ExperimentConfig> out;

  if (name == "exp1") {
    for (const std::string spectrum : {"full_rank_15", "low_rank_15"}) {
      PcaGrid g = paper ? PcaGrid{1000, 60, 1800, 3, 1, 1, 100, spectrum}
                        : PcaGrid{200, 10, 60, 3, 1, 1, 50, spectrum};
      push_pca_grid(out, g, false, 11);
    }
    return out;
  }
  if (name == "exp2") {
    const std::vector<PcaGrid> grids =
        paper ? std::vector<PcaGrid>{{1000, 2, 360, 3, 1, 1, 100, "low_rank_15"},
                                     {1000, 2, 720, 6, 2, 1, 100, "low_rank_15"},
                                     {1000, 60, 3600, 6, 2, 1, 100, "low_rank_15"}}
              : std::vector<PcaGrid>{{200, 2, 72, 3, 1, 1, 50, "low_rank_15"},
                                     {200, 2, 144, 6, 2, 1, 50, "low_rank_15"},
                                     {200, 10, 120, 6, 2, 1, 50, "low_rank_15"}};
    for (const auto& g : grids) push_pca_grid(out, g, false, 22);
    return out;
  }
  if (name == "mom1") {
    for (const int l_byz : {2, 4}) {
      PcaGrid g = paper ? PcaGrid{1000, 60, 3600, 18, l_byz, 6, 100, "low_rank_15"}
                        : PcaGrid{200, 10, 216, 18, l_byz, 6, 50, "low_rank_15"};
      push_pca_grid(out, g, true, 33);
    }
    return out;
  }
  if (name == "lrcs_fig") {
    ExperimentConfig base;
    base.experiment = "lrcs";
    base.attack = "reverse_gradient";
    base.seed = 44;
    if (paper) {
      base.n = 600;
      base.q = 600;
      base.r = 4;
      base.m = 198;
      base.L = 18;
      base.L_tilde = 6;
      base.runs = 50;
    } else {
      base.n = 200;
      base.q = 200;
      base.r = 4;
      base.m = 126;
      base.L = 18;
      base.L_tilde = 6;
      base.runs = 20;
    }
    for (const int l_byz : {1, 2}) {
      for (const std::string est : {"subsmed_init", "subsmom_init"}) {
        ExperimentConfig cfg = base;
        cfg.estimator = est;
        cfg.L_byz = l_byz;
        out.push_back(cfg);
      }
      for (const std::string est : {"byz_altgdmin_median", "byz_altgdmin_mom"}) {
        ExperimentConfig cfg = base;
        cfg.estimator = est;
        cfg.L_byz = l_byz;
        cfg.T_gd = paper ? 150 : 80;
        cfg.eps_exit = 1e-4;
        cfg.runs = paper ? 5 : 3;
        out.push_back(cfg);
      }
    }
    ExperimentConfig baseline = base;
    baseline.estimator = "altgdmin_baseline";
    baseline.attack = "none";
    baseline.L_byz = 0;
    baseline.L_tilde = 1;
    baseline.T_gd = paper ? 150 : 80;
    baseline.eps_exit = 1e-4;
    baseline.runs = paper ? 5 : 3;
    out.push_back(baseline);
    return out;
  }
  throw UnknownSuiteError("unknown suite: " + name);
}

}  // namespace byzfed
