#include "fsmppi/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

namespace fsmppi {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(SystemKind kind) {
  switch (kind) {
    case SystemKind::kDoubleIntegrator: return "double_integrator";
    case SystemKind::kLaggedVehicle: return "lagged_vehicle";
  }
  throw std::logic_error("unknown system kind");
}

SystemKind system_kind_from_string(const std::string& name) {
  if (name == "double_integrator") return SystemKind::kDoubleIntegrator;
  if (name == "lagged_vehicle") return SystemKind::kLaggedVehicle;
  throw std::invalid_argument("unknown system: " + name);
}

std::shared_ptr<const System> make_system(SystemKind kind) {
  switch (kind) {
    case SystemKind::kDoubleIntegrator: return std::make_shared<DoubleIntegrator>();
    case SystemKind::kLaggedVehicle: return std::make_shared<LaggedVehicle>();
  }
  throw std::logic_error("unknown system kind");
}

void ExperimentConfig::validate() const {
  controller.validate();
  if (repetitions < 1) {
    throw std::invalid_argument("ExperimentConfig: repetitions must be >= 1");
  }
  if (!(duration_seconds > 0.0)) {
    throw std::invalid_argument("ExperimentConfig: duration_seconds must be positive");
  }
  if (!(psd_window_seconds > 0.0)) {
    throw std::invalid_argument("ExperimentConfig: psd_window_seconds must be positive");
  }
}

namespace {

json sampler_to_json(const SamplerConfig& s) {
  json j;
  j["kind"] = to_string(s.kind);
  j["sigma"] = s.sigma;
  if (!s.gamma.empty()) j["gamma"] = s.gamma;
  if (s.f_min > 0.0) j["f_min"] = s.f_min;
  if (!s.nln_log_sigma.empty()) j["nln_log_sigma"] = s.nln_log_sigma;
  if (s.dt > 0.0) j["dt"] = s.dt;
  return j;
}

SamplerConfig sampler_from_json(const json& j) {
  SamplerConfig s;
  s.kind = sampler_kind_from_string(j.at("kind").get<std::string>());
  s.sigma = j.at("sigma").get<std::vector<double>>();
  if (j.contains("gamma")) s.gamma = j.at("gamma").get<std::vector<double>>();
  if (j.contains("f_min")) s.f_min = j.at("f_min").get<double>();
  if (j.contains("nln_log_sigma")) {
    s.nln_log_sigma = j.at("nln_log_sigma").get<std::vector<double>>();
  }
  if (j.contains("dt")) s.dt = j.at("dt").get<double>();
  return s;
}

std::string num(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

json to_json(const ExperimentConfig& config) {
  json j;
  j["system"] = to_string(config.system);
  j["duration_seconds"] = config.duration_seconds;
  j["repetitions"] = config.repetitions;
  j["seed"] = config.seed;
  j["output_dir"] = config.output_dir;
  j["psd_window_seconds"] = config.psd_window_seconds;
  json c;
  c["num_samples"] = config.controller.num_samples;
  c["num_iterations"] = config.controller.num_iterations;
  c["horizon"] = config.controller.horizon;
  c["dt"] = config.controller.dt;
  c["lambda"] = config.controller.lambda;
  c["alpha"] = config.controller.alpha;
  if (config.controller.u_min.size() > 0) {
    c["u_min"] = std::vector<double>(config.controller.u_min.begin(),
                                     config.controller.u_min.end());
    c["u_max"] = std::vector<double>(config.controller.u_max.begin(),
                                     config.controller.u_max.end());
  }
  c["sampler"] = sampler_to_json(config.controller.sampler);
  j["controller"] = c;
  return j;
}

ExperimentConfig experiment_from_json(const json& j) {
  ExperimentConfig cfg;
  cfg.system = system_kind_from_string(j.at("system").get<std::string>());
  cfg.duration_seconds = j.at("duration_seconds").get<double>();
  cfg.repetitions = j.at("repetitions").get<int>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("psd_window_seconds")) {
    cfg.psd_window_seconds = j.at("psd_window_seconds").get<double>();
  }
  const json& c = j.at("controller");
  cfg.controller.num_samples = c.at("num_samples").get<int>();
  cfg.controller.num_iterations = c.at("num_iterations").get<int>();
  cfg.controller.horizon = c.at("horizon").get<int>();
  cfg.controller.dt = c.at("dt").get<double>();
  cfg.controller.lambda = c.at("lambda").get<double>();
  cfg.controller.alpha = c.at("alpha").get<double>();
  if (c.contains("u_min")) {
    const auto lo = c.at("u_min").get<std::vector<double>>();
    const auto hi = c.at("u_max").get<std::vector<double>>();
    cfg.controller.u_min = Eigen::Map<const Eigen::VectorXd>(lo.data(), lo.size());
    cfg.controller.u_max = Eigen::Map<const Eigen::VectorXd>(hi.data(), hi.size());
  }
  cfg.controller.sampler = sampler_from_json(c.at("sampler"));
  // The smooth samplers share the controller step unless set explicitly.
  const auto kind = cfg.controller.sampler.kind;
  if ((kind == SamplerKind::kSmooth || kind == SamplerKind::kSmoothStar) &&
      cfg.controller.sampler.dt <= 0.0) {
    cfg.controller.sampler.dt = cfg.controller.dt;
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file: " + path);
  }
  json j;
  in >> j;
  return experiment_from_json(j);
}

ExperimentResult execute_experiment(const ExperimentConfig& config, int num_threads) {
  config.validate();
  const auto system = make_system(config.system);
  const int reps = config.repetitions;
  std::vector<std::optional<RunLog>> logs(reps);

  auto worker = [&](int begin, int end) {
    for (int r = begin; r < end; ++r) {
      const std::uint64_t rep_seed = mix_seed(config.seed, static_cast<std::uint64_t>(r));
      try {
        logs[r] = receding_horizon_run(config.controller, system,
                                       system->initial_state(),
                                       config.duration_seconds, rep_seed);
      } catch (const std::exception&) {
        logs[r] = std::nullopt;  // recorded as a failure in the summary
      }
    }
  };

  const int workers = std::max(1, std::min(num_threads, reps));
  if (workers == 1) {
    worker(0, reps);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (reps + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int a = w * chunk;
      const int b = std::min(reps, a + chunk);
      if (a < b) pool.emplace_back(worker, a, b);
    }
    for (auto& th : pool) th.join();
  }

  ExperimentResult result;
  result.sampler_name = to_string(config.controller.sampler.kind);
  std::vector<double> costs;
  std::vector<double> solve_ms;
  for (auto& l : logs) {
    if (!l) {
      ++result.failures;
      continue;
    }
    costs.push_back(accumulated_cost(*l));
    for (double s : l->solve_seconds) solve_ms.push_back(s * 1e3);
    result.logs.push_back(std::move(*l));
  }
  if (result.logs.empty()) {
    throw std::runtime_error("execute_experiment: every repetition failed");
  }
  result.cost = ensemble_stats(std::move(costs));
  result.solve_ms = ensemble_stats(std::move(solve_ms));
  return result;
}

namespace {

void write_runs_csv(const std::string& path, const ExperimentConfig& config,
                    const std::vector<RunLog>& logs) {
  const auto system = make_system(config.system);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "rep,t_seconds";
  for (int i = 0; i < system->state_dim(); ++i) out << ",state_" << i;
  for (int i = 0; i < system->control_dim(); ++i) out << ",control_" << i;
  out << ",step_cost\n";
  for (std::size_t r = 0; r < logs.size(); ++r) {
    const RunLog& log = logs[r];
    for (std::size_t k = 0; k < log.states.size(); ++k) {
      out << r << ',' << num((static_cast<double>(k) + 1.0) * log.dt);
      for (int i = 0; i < log.states[k].size(); ++i) out << ',' << num(log.states[k][i]);
      for (int i = 0; i < log.controls[k].size(); ++i) out << ',' << num(log.controls[k][i]);
      out << ',' << num(log.step_costs[k]) << '\n';
    }
  }
}

void write_control_psd_csv(const std::string& path, const ExperimentConfig& config,
                           const std::vector<RunLog>& logs) {
  const int window = static_cast<int>(std::min(
      std::llround(config.psd_window_seconds / config.controller.dt),
      static_cast<long long>(logs.front().states.size())));
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "rep,dim,frequency_hz,power\n";
  if (window < 4) return;  // window too short for a periodogram
  const int n_u = static_cast<int>(logs.front().controls.front().size());
  for (std::size_t r = 0; r < logs.size(); ++r) {
    for (int d = 0; d < n_u; ++d) {
      std::vector<double> signal(window);
      for (int k = 0; k < window; ++k) signal[k] = logs[r].controls[k][d];
      const Periodogram p = periodogram(signal, config.controller.dt);
      for (std::size_t n = 0; n < p.power.size(); ++n) {
        out << r << ',' << d << ',' << num(p.frequencies[n]) << ','
            << num(p.power[n]) << '\n';
      }
    }
  }
}

void write_summary_csv(const std::string& path, const ExperimentConfig& config,
                       const ExperimentResult& result) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "system,sampler,sigma_0,repetitions,failures,cost_mean,cost_std,"
         "solve_ms_mean,solve_ms_std\n";
  out << to_string(config.system) << ',' << result.sampler_name << ','
      << num(config.controller.sampler.sigma[0]) << ',' << config.repetitions << ','
      << result.failures << ',' << num(result.cost.mean) << ','
      << num(result.cost.stddev) << ',' << num(result.solve_ms.mean) << ','
      << num(result.solve_ms.stddev) << '\n';
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, int num_threads) {
  ExperimentResult result = execute_experiment(config, num_threads);
  fs::create_directories(config.output_dir);
  const fs::path dir(config.output_dir);
  write_runs_csv((dir / "runs.csv").string(), config, result.logs);
  write_control_psd_csv((dir / "control_psd.csv").string(), config, result.logs);
  write_summary_csv((dir / "summary.csv").string(), config, result);
  std::ofstream cfg_out((dir / "config.json").string());
  cfg_out << to_json(config).dump(2) << '\n';
  return result;
}

void apply_axis(ExperimentConfig& config, const std::string& axis, double value) {
  if (axis == "sigma") {
    for (double& s : config.controller.sampler.sigma) s = value;
  } else if (axis == "gamma") {
    if (config.controller.sampler.gamma.empty()) {
      throw std::invalid_argument("apply_axis: gamma sweep needs a colored sampler");
    }
    for (double& g : config.controller.sampler.gamma) g = value;
  } else if (axis == "lambda") {
    config.controller.lambda = value;
  } else if (axis == "alpha") {
    config.controller.alpha = value;
  } else if (axis == "num_samples") {
    config.controller.num_samples = static_cast<int>(value);
  } else if (axis == "num_iterations") {
    config.controller.num_iterations = static_cast<int>(value);
  } else if (axis == "horizon") {
    config.controller.horizon = static_cast<int>(value);
  } else if (axis == "dt") {
    const bool sampler_followed = config.controller.sampler.dt == config.controller.dt;
    config.controller.dt = value;
    if (sampler_followed) config.controller.sampler.dt = value;
  } else if (axis == "duration_seconds") {
    config.duration_seconds = value;
  } else if (axis == "repetitions") {
    config.repetitions = static_cast<int>(value);
  } else if (axis == "f_min") {
    config.controller.sampler.f_min = value;
  } else if (axis == "psd_window_seconds") {
    config.psd_window_seconds = value;
  } else {
    throw std::invalid_argument("apply_axis: unknown axis " + axis);
  }
}

std::vector<ExperimentResult> sweep_experiment(const ExperimentConfig& base,
                                               const std::string& axis,
                                               const std::vector<double>& values,
                                               int num_threads) {
  if (values.empty()) {
    throw std::invalid_argument("sweep_experiment: no axis values");
  }
  fs::create_directories(base.output_dir);
  std::vector<ExperimentResult> results;
  std::ofstream combined((fs::path(base.output_dir) / "sweep_summary.csv").string());
  combined << "axis,value,system,sampler,sigma_0,repetitions,failures,cost_mean,"
              "cost_std,solve_ms_mean,solve_ms_std\n";
  for (double v : values) {
    ExperimentConfig cfg = base;
    apply_axis(cfg, axis, v);
    cfg.output_dir =
        (fs::path(base.output_dir) / fmt::format("{}_{:g}", axis, v)).string();
    ExperimentResult r = run_experiment(cfg, num_threads);
    combined << axis << ',' << num(v) << ',' << to_string(cfg.system) << ','
             << r.sampler_name << ',' << num(cfg.controller.sampler.sigma[0]) << ','
             << cfg.repetitions << ',' << r.failures << ',' << num(r.cost.mean) << ','
             << num(r.cost.stddev) << ',' << num(r.solve_ms.mean) << ','
             << num(r.solve_ms.stddev) << '\n';
    results.push_back(std::move(r));
  }
  return results;
}

void sample_noise_command(const std::vector<ColoredSpec>& specs, int num_samples,
                          std::uint64_t seed, const std::string& out_dir,
                          int num_threads) {
  const NoiseBatch batch = sample_noise_batch(specs, num_samples, seed, num_threads);
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);

  std::ofstream noise((dir / "noise.csv").string());
  if (!noise) throw std::runtime_error("cannot write noise.csv");
  noise << "sample_id,t,dim,value\n";
  for (int m = 0; m < batch.num_samples; ++m) {
    for (int t = 0; t < batch.horizon; ++t) {
      for (int d = 0; d < batch.control_dims; ++d) {
        noise << m << ',' << t << ',' << d << ',' << num(batch.at(m, t, d)) << '\n';
      }
    }
  }

  // Ensemble-mean periodogram per dimension; one step = one second here.
  std::ofstream psd((dir / "noise_psd.csv").string());
  if (!psd) throw std::runtime_error("cannot write noise_psd.csv");
  psd << "dim,frequency_hz,power\n";
  if (batch.horizon >= 4) {
    for (int d = 0; d < batch.control_dims; ++d) {
      std::vector<double> mean_power;
      std::vector<double> freqs;
      for (int m = 0; m < batch.num_samples; ++m) {
        std::vector<double> signal(batch.horizon);
        for (int t = 0; t < batch.horizon; ++t) signal[t] = batch.at(m, t, d);
        const Periodogram p = periodogram(signal, 1.0);
        if (mean_power.empty()) {
          mean_power.assign(p.power.size(), 0.0);
          freqs = p.frequencies;
        }
        for (std::size_t n = 0; n < p.power.size(); ++n) mean_power[n] += p.power[n];
      }
      for (std::size_t n = 0; n < mean_power.size(); ++n) {
        psd << d << ',' << num(freqs[n]) << ','
            << num(mean_power[n] / batch.num_samples) << '\n';
      }
    }
  }
}

std::vector<RunLog> load_run_logs(const std::string& runs_csv, double dt) {
  std::ifstream in(runs_csv);
  if (!in) throw std::runtime_error("cannot open " + runs_csv);
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("empty runs file");
  int n_x = 0;
  int n_u = 0;
  {
    std::stringstream hs(header);
    std::string col;
    while (std::getline(hs, col, ',')) {
      if (col.rfind("state_", 0) == 0) ++n_x;
      if (col.rfind("control_", 0) == 0) ++n_u;
    }
  }
  if (n_x == 0 || n_u == 0) throw std::runtime_error("unrecognized runs.csv header");

  std::vector<RunLog> logs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::string field;
    std::vector<double> fields;
    while (std::getline(ls, field, ',')) fields.push_back(std::stod(field));
    if (static_cast<int>(fields.size()) != 2 + n_x + n_u + 1) {
      throw std::runtime_error("malformed runs.csv row");
    }
    const std::size_t rep = static_cast<std::size_t>(fields[0]);
    while (logs.size() <= rep) {
      logs.emplace_back();
      logs.back().dt = dt;
    }
    RunLog& log = logs[rep];
    Eigen::VectorXd x(n_x);
    for (int i = 0; i < n_x; ++i) x[i] = fields[2 + i];
    Eigen::VectorXd u(n_u);
    for (int i = 0; i < n_u; ++i) u[i] = fields[2 + n_x + i];
    log.states.push_back(x);
    log.controls.push_back(u);
    log.step_costs.push_back(fields[2 + n_x + n_u]);
  }
  if (logs.empty()) throw std::runtime_error("runs.csv contains no rows");
  return logs;
}

void analyze_command(const std::string& runs_csv, double dt, double window_seconds,
                     const std::string& out_dir) {
  const std::vector<RunLog> logs = load_run_logs(runs_csv, dt);
  std::vector<double> costs;
  costs.reserve(logs.size());
  for (const auto& l : logs) costs.push_back(accumulated_cost(l));
  const EnsembleStats stats = ensemble_stats(std::move(costs));

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  std::ofstream summary((dir / "analysis_summary.csv").string());
  summary << "repetitions,cost_mean,cost_std\n";
  summary << stats.count << ',' << num(stats.mean) << ',' << num(stats.stddev) << '\n';

  const int window = static_cast<int>(std::min(
      std::llround(window_seconds / dt), static_cast<long long>(logs.front().states.size())));
  std::ofstream psd((dir / "analysis_psd.csv").string());
  psd << "dim,frequency_hz,power_mean\n";
  if (window >= 4) {
    const int n_u = static_cast<int>(logs.front().controls.front().size());
    for (int d = 0; d < n_u; ++d) {
      std::vector<double> mean_power;
      std::vector<double> freqs;
      for (const auto& log : logs) {
        std::vector<double> signal(window);
        for (int k = 0; k < window; ++k) signal[k] = log.controls[k][d];
        const Periodogram p = periodogram(signal, dt);
        if (mean_power.empty()) {
          mean_power.assign(p.power.size(), 0.0);
          freqs = p.frequencies;
        }
        for (std::size_t n = 0; n < p.power.size(); ++n) mean_power[n] += p.power[n];
      }
      for (std::size_t n = 0; n < mean_power.size(); ++n) {
        psd << d << ',' << num(freqs[n]) << ','
            << num(mean_power[n] / static_cast<double>(logs.size())) << '\n';
      }
    }
  }
}

}  // namespace fsmppi
