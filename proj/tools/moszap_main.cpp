// Command-line front end. Talks to the simulator exclusively through the
// public C API in moszap.h; exit code = mz_status of the failing call.
#include <moszap.h>

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

namespace {

const char* kUsage =
    "usage: moszap <command> [flags]\n"
    "\n"
    "commands:\n"
    "  simulate   one closed-loop episode; prints a summary\n"
    "  bench      method x prediction-mode metrics grid\n"
    "  render     synthetic stereo frame + intermediate dumps\n"
    "  sweep      1-D parameter study (one bench row per value)\n"
    "\n"
    "flags:\n"
    "  --config <path>    config file (defaults used when omitted)\n"
    "  --seed <u64>       base seed (default 1)\n"
    "  --trials <n>       bench/sweep trials per cell (default 180)\n"
    "  --out <path>       output file (bench/sweep) or directory\n"
    "                     (simulate/render); bench/sweep default to stdout\n"
    "  --format csv|json  bench output format (default csv)\n"
    "  --methods <csv>    bench detector subset, e.g. frame_diff,profiled\n"
    "  --modes <csv>      bench prediction-mode subset, e.g. none,linear\n"
    "  --frames <n>       render frame count (default 30)\n"
    "  --param <key>      sweep config key\n"
    "  --values <csv>     sweep values, e.g. 0.25,0.5,1.0\n"
    "  --set <key=value>  config override (repeatable, applied in order)\n"
    "  --threads <n>      bench/sweep worker threads (default: hardware)\n"
    "  --verbose          simulate: print the event log\n";

struct Args {
  std::string command;
  const char* config = nullptr;
  uint64_t seed = 1;
  int trials = 180;
  const char* out = nullptr;
  const char* format = nullptr;
  const char* methods = nullptr;
  const char* modes = nullptr;
  int frames = 30;
  const char* param = nullptr;
  const char* values = nullptr;
  std::vector<std::string> sets;
  int threads = 0;
  bool verbose = false;
};

int fail_usage(const char* msg) {
  std::fprintf(stderr, "moszap: %s\n%s", msg, kUsage);
  return MZ_ERR_CONFIG;
}

bool parse_u64(const char* s, uint64_t& out) {
  char* end = nullptr;
  out = std::strtoull(s, &end, 10);
  return end && *end == '\0' && end != s;
}

bool parse_int(const char* s, int& out) {
  char* end = nullptr;
  const long v = std::strtol(s, &end, 10);
  if (!end || *end != '\0' || end == s) return false;
  out = int(v);
  return true;
}

int parse_args(int argc, char** argv, Args& a) {
  if (argc < 2) return fail_usage("missing command");
  a.command = argv[1];
  for (int i = 2; i < argc; ++i) {
    const std::string flag = argv[i];
    auto need_value = [&](const char* name) -> const char* {
      if (i + 1 >= argc) {
        std::fprintf(stderr, "moszap: %s needs a value\n", name);
        return nullptr;
      }
      return argv[++i];
    };
    if (flag == "--verbose") {
      a.verbose = true;
    } else if (flag == "--config") {
      if (!(a.config = need_value("--config"))) return MZ_ERR_CONFIG;
    } else if (flag == "--seed") {
      const char* v = need_value("--seed");
      if (!v || !parse_u64(v, a.seed)) return fail_usage("bad --seed");
    } else if (flag == "--trials") {
      const char* v = need_value("--trials");
      if (!v || !parse_int(v, a.trials)) return fail_usage("bad --trials");
    } else if (flag == "--out") {
      if (!(a.out = need_value("--out"))) return MZ_ERR_CONFIG;
    } else if (flag == "--format") {
      if (!(a.format = need_value("--format"))) return MZ_ERR_CONFIG;
    } else if (flag == "--methods") {
      if (!(a.methods = need_value("--methods"))) return MZ_ERR_CONFIG;
    } else if (flag == "--modes") {
      if (!(a.modes = need_value("--modes"))) return MZ_ERR_CONFIG;
    } else if (flag == "--frames") {
      const char* v = need_value("--frames");
      if (!v || !parse_int(v, a.frames)) return fail_usage("bad --frames");
    } else if (flag == "--param") {
      if (!(a.param = need_value("--param"))) return MZ_ERR_CONFIG;
    } else if (flag == "--values") {
      if (!(a.values = need_value("--values"))) return MZ_ERR_CONFIG;
    } else if (flag == "--threads") {
      const char* v = need_value("--threads");
      if (!v || !parse_int(v, a.threads)) return fail_usage("bad --threads");
    } else if (flag == "--set") {
      const char* v = need_value("--set");
      if (!v || !std::strchr(v, '=')) return fail_usage("--set needs key=value");
      a.sets.push_back(v);
    } else if (flag == "--help" || flag == "-h") {
      std::fputs(kUsage, stdout);
      std::exit(0);
    } else {
      return fail_usage(("unknown flag " + flag).c_str());
    }
  }
  return MZ_OK;
}

int report(mz_status st) {
  if (st != MZ_OK)
    std::fprintf(stderr, "moszap: %s: %s\n", mz_status_name(st),
                 mz_last_error());
  return st;
}

}  // namespace

int main(int argc, char** argv) {
  Args a;
  const int pstat = parse_args(argc, argv, a);
  if (pstat != MZ_OK) return pstat;

  mz_config* cfg = mz_config_create();
  if (!cfg) {
    std::fprintf(stderr, "moszap: out of memory\n");
    return MZ_ERR_RUNTIME;
  }
  mz_status st = MZ_OK;
  if (a.config) st = mz_config_load(cfg, a.config);
  for (std::size_t i = 0; st == MZ_OK && i < a.sets.size(); ++i) {
    const std::string& kv = a.sets[i];
    const std::size_t eq = kv.find('=');
    st = mz_config_set(cfg, kv.substr(0, eq).c_str(),
                       kv.substr(eq + 1).c_str());
  }
  if (st != MZ_OK) {
    mz_config_free(cfg);
    return report(st);
  }

  if (a.command == "simulate") {
    mz_episode_summary s{};
    st = mz_simulate(cfg, a.seed, a.out, a.verbose ? 1 : 0, &s);
    if (st == MZ_OK) {
      std::printf("mosquitoes: %d\n", s.mosquito_count);
      std::printf("kills: %d\n", s.kills);
      std::printf("fires: %" PRId64 "\n", s.fires);
      std::printf("frames_captured: %" PRId64 "\n", s.frames_captured);
      std::printf("frames_rendered: %" PRId64 "\n", s.frames_rendered);
      std::printf("detections: %" PRId64 "\n", s.detections);
      std::printf("lost_track_events: %" PRId64 "\n", s.lost_track_events);
      std::printf("tracking_success_pct: %.6f\n", s.tracking_success_pct);
      std::printf("neutralization_pct: %.6f\n", s.neutralization_pct);
      std::printf("mean_time_to_kill_s: %.6f\n", s.mean_time_to_kill_s);
      std::printf("wall_clock_s: %.6f\n", s.wall_clock_s);
    }
  } else if (a.command == "bench") {
    st = mz_bench(cfg, a.seed, a.trials, a.methods, a.modes, a.out, a.format,
                  a.threads);
  } else if (a.command == "render") {
    if (!a.out) {
      mz_config_free(cfg);
      return fail_usage("render needs --out <dir>");
    }
    st = mz_render_dump(cfg, a.seed, a.frames, a.out);
  } else if (a.command == "sweep") {
    if (!a.param || !a.values) {
      mz_config_free(cfg);
      return fail_usage("sweep needs --param and --values");
    }
    st = mz_sweep(cfg, a.param, a.values, a.trials, a.seed, a.out, a.threads);
  } else {
    mz_config_free(cfg);
    return fail_usage(("unknown command " + a.command).c_str());
  }

  mz_config_free(cfg);
  return report(st);
}
