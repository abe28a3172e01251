#include "bench.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include <json.hpp>

namespace mz {

namespace {

std::string fmt6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

CellMetrics reduce_cell(DetectorKind method, PredictionMode mode,
                        const std::vector<EpisodeResult>& eps) {
  CellMetrics m;
  m.method = method;
  m.mode = mode;
  m.trials = long(eps.size());
  long epochs = 0, visible = 0, contained = 0, survived_pulses = 0;
  long neutralized_trials = 0;
  double latency_sum = 0.0, kill_time_sum = 0.0;
  for (const EpisodeResult& r : eps) {
    epochs += r.detection_epochs;
    latency_sum += r.latency_sum_s;
    visible += r.mosquito_frames_visible;
    contained += r.mosquito_frames_contained;
    m.fires += r.fires;
    m.lost_track_events += r.lost_track_events;
    m.frames_rendered += r.frames_rendered;
    m.episode_wall_s += r.wall_clock_s;
    for (const FireRecord& f : r.fire_log) survived_pulses += !f.killed;
    neutralized_trials += r.kills() > 0;
    for (const auto& k : r.killed_at)
      if (k) {
        ++m.kills;
        kill_time_sum += *k;
      }
  }
  m.mean_detect_latency_s = epochs > 0 ? latency_sum / double(epochs) : 0.0;
  m.tracking_success_pct =
      visible > 0 ? 100.0 * double(contained) / double(visible) : 0.0;
  // a trial is neutralized when it records at least one kill
  m.neutralization_pct =
      m.trials > 0 ? 100.0 * double(neutralized_trials) / double(m.trials) : 0.0;
  m.survival_after_pulse_pct =
      m.fires > 0 ? 100.0 * double(survived_pulses) / double(m.fires) : 100.0;
  m.mean_time_to_kill_s = m.kills > 0 ? kill_time_sum / double(m.kills) : 0.0;
  return m;
}

}  // namespace

MetricsReport bench(const SimConfig& cfg,
                    const std::vector<DetectorKind>& methods,
                    const std::vector<PredictionMode>& modes, int trials,
                    std::uint64_t seed_base, int threads) {
  validate(cfg);
  if (trials < 1) throw ConfigError("bench: trials must be >= 1");
  if (methods.empty() || modes.empty())
    throw ConfigError("bench: need at least one method and one mode");

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<SimConfig> cell_cfg;
  for (const DetectorKind d : methods)
    for (const PredictionMode pm : modes) {
      SimConfig c = cfg;
      c.pipeline.detector = d;
      c.pipeline.predictor.mode = pm;
      cell_cfg.push_back(c);
    }

  const std::size_t n_cells = cell_cfg.size();
  const std::size_t n_tasks = n_cells * std::size_t(trials);
  std::vector<std::vector<EpisodeResult>> results(n_cells);
  for (auto& v : results) v.resize(std::size_t(trials));

  int n_threads = threads > 0 ? threads
                              : int(std::thread::hardware_concurrency());
  if (n_threads < 1) n_threads = 1;
  if (std::size_t(n_threads) > n_tasks) n_threads = int(n_tasks);

  std::atomic<std::size_t> dispenser{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t task = dispenser.fetch_add(1);
      if (task >= n_tasks) return;
      const std::size_t cell = task / std::size_t(trials);
      const std::size_t trial = task % std::size_t(trials);
      try {
        // trial t runs on seed_base + t in every cell: cells see the same
        // flights, so grid columns compare methods over identical scenes
        results[cell][trial] =
            run_episode(cell_cfg[cell], seed_base + std::uint64_t(trial));
      } catch (...) {
        std::lock_guard<std::mutex> lk(error_mu);
        if (!first_error) first_error = std::current_exception();
        dispenser.store(n_tasks);  // drain remaining work
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);

  MetricsReport rep;
  rep.seed_base = seed_base;
  rep.trials = trials;
  rep.threads = n_threads;
  for (std::size_t ci = 0; ci < n_cells; ++ci)
    rep.cells.push_back(reduce_cell(cell_cfg[ci].pipeline.detector,
                                    cell_cfg[ci].pipeline.predictor.mode,
                                    results[ci]));
  rep.wall_clock_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

std::string bench_csv(const MetricsReport& r) {
  std::string out =
      "method,prediction_mode,trials,mean_detect_latency_s,"
      "tracking_success_pct,neutralization_pct,survival_after_pulse_pct,"
      "mean_time_to_kill_s\n";
  for (const CellMetrics& c : r.cells) {
    out += detector_name(c.method);
    out += ',';
    out += prediction_mode_name(c.mode);
    out += ',';
    out += std::to_string(c.trials);
    out += ',';
    out += fmt6(c.mean_detect_latency_s);
    out += ',';
    out += fmt6(c.tracking_success_pct);
    out += ',';
    out += fmt6(c.neutralization_pct);
    out += ',';
    out += fmt6(c.survival_after_pulse_pct);
    out += ',';
    out += fmt6(c.mean_time_to_kill_s);
    out += '\n';
  }
  return out;
}

std::string bench_json(const MetricsReport& r, const SimConfig& cfg) {
  nlohmann::ordered_json j;
  j["seed_base"] = r.seed_base;
  j["trials"] = r.trials;
  j["threads"] = r.threads;
  j["wall_clock_s"] = r.wall_clock_s;
  nlohmann::ordered_json jc;
  for (const std::string& k : config_keys()) jc[k] = get_key(cfg, k);
  j["config"] = std::move(jc);
  j["cells"] = nlohmann::ordered_json::array();
  for (const CellMetrics& c : r.cells) {
    nlohmann::ordered_json e;
    e["method"] = detector_name(c.method);
    e["prediction_mode"] = prediction_mode_name(c.mode);
    e["trials"] = c.trials;
    e["mean_detect_latency_s"] = c.mean_detect_latency_s;
    e["tracking_success_pct"] = c.tracking_success_pct;
    e["neutralization_pct"] = c.neutralization_pct;
    e["survival_after_pulse_pct"] = c.survival_after_pulse_pct;
    e["mean_time_to_kill_s"] = c.mean_time_to_kill_s;
    e["lost_track_events"] = c.lost_track_events;
    e["fires"] = c.fires;
    e["kills"] = c.kills;
    e["frames_rendered"] = c.frames_rendered;
    e["episode_wall_s"] = c.episode_wall_s;
    j["cells"].push_back(std::move(e));
  }
  return j.dump(2) + "\n";
}

std::string sweep_csv(const SimConfig& base, const std::string& key,
                      const std::vector<std::string>& values, int trials,
                      std::uint64_t seed_base, int threads) {
  if (values.empty()) throw ConfigError("sweep: no values given");
  std::string out = key +
                    ",method,prediction_mode,trials,mean_detect_latency_s,"
                    "tracking_success_pct,neutralization_pct,"
                    "survival_after_pulse_pct,mean_time_to_kill_s\n";
  for (const std::string& v : values) {
    SimConfig c = base;
    set_key(c, key, v);
    validate(c);
    const MetricsReport rep =
        bench(c, {c.pipeline.detector}, {c.pipeline.predictor.mode}, trials,
              seed_base, threads);
    const CellMetrics& m = rep.cells.at(0);
    out += v;
    out += ',';
    out += detector_name(m.method);
    out += ',';
    out += prediction_mode_name(m.mode);
    out += ',';
    out += std::to_string(m.trials);
    out += ',';
    out += fmt6(m.mean_detect_latency_s);
    out += ',';
    out += fmt6(m.tracking_success_pct);
    out += ',';
    out += fmt6(m.neutralization_pct);
    out += ',';
    out += fmt6(m.survival_after_pulse_pct);
    out += ',';
    out += fmt6(m.mean_time_to_kill_s);
    out += '\n';
  }
  return out;
}

}  // namespace mz
