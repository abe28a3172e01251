#include "moszap.h"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "bench.hpp"
#include "config.hpp"
#include "dump.hpp"
#include "engine.hpp"

struct mz_config {
  mz::SimConfig cfg;
};

namespace {

thread_local std::string g_error;

mz_status fail(mz_status s, const std::string& msg) {
  g_error = msg;
  return s;
}

template <class F>
mz_status guarded(F&& f) {
  try {
    g_error.clear();
    return f();
  } catch (const mz::ConfigError& e) {
    return fail(MZ_ERR_CONFIG, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(MZ_ERR_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(MZ_ERR_RUNTIME, e.what());
  }
}

std::vector<std::string> split_csv(const char* s) {
  std::vector<std::string> out;
  std::string cur;
  for (const char* p = s; *p; ++p) {
    if (*p == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += *p;
    }
  }
  out.push_back(cur);
  return out;
}

void emit(const char* out_path, const std::string& content) {
  if (out_path) {
    mz::write_text(out_path, content);
  } else {
    std::fwrite(content.data(), 1, content.size(), stdout);
    std::fflush(stdout);
  }
}

}  // namespace

extern "C" {

const char* mz_version(void) { return "1.0.0"; }

const char* mz_status_name(mz_status s) {
  switch (s) {
    case MZ_OK: return "ok";
    case MZ_ERR_CONFIG: return "config_error";
    case MZ_ERR_RUNTIME: return "runtime_error";
    case MZ_ERR_INVALID: return "invalid_argument";
  }
  return "unknown";
}

const char* mz_last_error(void) { return g_error.c_str(); }

mz_config* mz_config_create(void) { return new (std::nothrow) mz_config{}; }

void mz_config_free(mz_config* cfg) { delete cfg; }

mz_status mz_config_load(mz_config* cfg, const char* path) {
  if (!cfg || !path) return fail(MZ_ERR_INVALID, "null argument");
  return guarded([&] {
    cfg->cfg = mz::load_config(path);
    return MZ_OK;
  });
}

mz_status mz_config_set(mz_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return fail(MZ_ERR_INVALID, "null argument");
  return guarded([&] {
    mz::set_key(cfg->cfg, key, value);
    return MZ_OK;
  });
}

mz_status mz_config_get(const mz_config* cfg, const char* key, char* buf,
                        size_t buf_len) {
  if (!cfg || !key || !buf) return fail(MZ_ERR_INVALID, "null argument");
  return guarded([&]() -> mz_status {
    const std::string v = mz::get_key(cfg->cfg, key);
    if (v.size() + 1 > buf_len)
      return fail(MZ_ERR_INVALID, "buffer too small for value of '" +
                                      std::string(key) + "'");
    std::memcpy(buf, v.c_str(), v.size() + 1);
    return MZ_OK;
  });
}

mz_status mz_config_save(const mz_config* cfg, const char* path) {
  if (!cfg || !path) return fail(MZ_ERR_INVALID, "null argument");
  return guarded([&] {
    mz::save_config(cfg->cfg, path);
    return MZ_OK;
  });
}

mz_status mz_simulate(const mz_config* cfg, uint64_t seed, const char* out_dir,
                      int verbose, mz_episode_summary* summary) {
  if (!cfg) return fail(MZ_ERR_INVALID, "null config");
  return guarded([&] {
    std::vector<std::string> events;
    const bool want_events = verbose || out_dir;
    const mz::EpisodeResult r =
        mz::run_episode(cfg->cfg, seed, out_dir != nullptr,
                        want_events ? &events : nullptr);
    if (verbose)
      for (const std::string& line : events) std::printf("%s\n", line.c_str());
    if (out_dir) {
      std::filesystem::create_directories(out_dir);
      const std::string dir = std::string(out_dir) + "/";
      mz::write_text(dir + "tracks.csv", mz::tracks_csv(r));
      mz::write_text(dir + "fires.csv", mz::fires_csv(r));
      std::string log;
      for (const std::string& line : events) {
        log += line;
        log += '\n';
      }
      mz::write_text(dir + "events.log", log);
    }
    if (summary) {
      const int count = cfg->cfg.scenario.mosquito_count;
      mz_episode_summary s{};
      s.mosquito_count = count;
      s.kills = r.kills();
      s.fires = r.fires;
      s.frames_captured = r.frames_captured;
      s.frames_rendered = r.frames_rendered;
      s.detections = r.detections;
      s.lost_track_events = r.lost_track_events;
      s.tracking_success_pct =
          r.mosquito_frames_visible > 0
              ? 100.0 * double(r.mosquito_frames_contained) /
                    double(r.mosquito_frames_visible)
              : 0.0;
      s.neutralization_pct = r.kills() > 0 ? 100.0 : 0.0;  // any-kill, per trial
      double tsum = 0.0;
      for (const auto& k : r.killed_at)
        if (k) tsum += *k;
      s.mean_time_to_kill_s = r.kills() > 0 ? tsum / double(r.kills()) : 0.0;
      s.wall_clock_s = r.wall_clock_s;
      *summary = s;
    }
    return MZ_OK;
  });
}

mz_status mz_bench(const mz_config* cfg, uint64_t seed_base, int trials,
                   const char* methods_csv, const char* modes_csv,
                   const char* out_path, const char* format, int threads) {
  if (!cfg) return fail(MZ_ERR_INVALID, "null config");
  return guarded([&]() -> mz_status {
    std::vector<mz::DetectorKind> methods;
    if (methods_csv) {
      for (const std::string& m : split_csv(methods_csv))
        methods.push_back(mz::detector_from_name(m));
    } else {
      methods = {mz::DetectorKind::frame_diff, mz::DetectorKind::color,
                 mz::DetectorKind::correlation_track,
                 mz::DetectorKind::profiled};
    }
    std::vector<mz::PredictionMode> modes;
    if (modes_csv) {
      for (const std::string& m : split_csv(modes_csv))
        modes.push_back(mz::prediction_mode_from_name(m));
    } else {
      modes = {mz::PredictionMode::none, mz::PredictionMode::flight_model};
    }
    const std::string fmt = format ? format : "csv";
    if (fmt != "csv" && fmt != "json")
      return fail(MZ_ERR_CONFIG, "format must be csv or json, got '" + fmt + "'");
    const mz::MetricsReport rep =
        mz::bench(cfg->cfg, methods, modes, trials, seed_base, threads);
    emit(out_path, fmt == "csv" ? mz::bench_csv(rep)
                                : mz::bench_json(rep, cfg->cfg));
    return MZ_OK;
  });
}

mz_status mz_render_dump(const mz_config* cfg, uint64_t seed, int frames,
                         const char* out_dir) {
  if (!cfg || !out_dir) return fail(MZ_ERR_INVALID, "null argument");
  return guarded([&] {
    mz::render_dump(cfg->cfg, seed, frames, out_dir);
    return MZ_OK;
  });
}

mz_status mz_sweep(const mz_config* cfg, const char* key,
                   const char* values_csv, int trials, uint64_t seed_base,
                   const char* out_path, int threads) {
  if (!cfg || !key || !values_csv) return fail(MZ_ERR_INVALID, "null argument");
  return guarded([&] {
    emit(out_path, mz::sweep_csv(cfg->cfg, key, split_csv(values_csv), trials,
                                 seed_base, threads));
    return MZ_OK;
  });
}

}  // extern "C"
