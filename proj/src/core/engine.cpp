#include "engine.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <queue>
#include <utility>

#include "actuation.hpp"
#include "vtime.hpp"

namespace mz {

namespace {

enum class Ev { frame_due, detection_ready, galvo_settled, dwell_complete };

struct Event {
  Ticks tick = 0;
  std::uint64_t seq = 0;  // insertion order; same-tick events run FIFO
  Ev kind = Ev::frame_due;
  std::int64_t arg = 0;  // frame index for frame_due / detection_ready
};

struct EventAfter {
  bool operator()(const Event& a, const Event& b) const {
    if (a.tick != b.tick) return a.tick > b.tick;
    return a.seq > b.seq;
  }
};

constexpr int kRingSlots = 64;
constexpr double kBlobSnapRadius = 3.0;   // px: template fix replaces a blob centroid
constexpr double kTemplateRefresh = 0.7;  // min score to overwrite a template

Vec3 clamp_to_box(const Vec3& p, const BoxRegion& box) {
  return Vec3{std::clamp(p.x, box.min_corner.x, box.max_corner.x),
              std::clamp(p.y, box.min_corner.y, box.max_corner.y),
              std::clamp(p.z, box.min_corner.z, box.max_corner.z)};
}

struct Engine {
  const SimConfig& cfg;
  bool log_tracks;
  std::vector<std::string>* elog;

  FlightParams fp;
  StereoRig rig;
  RenderOptions ropts;
  double z_nominal;
  Ticks dt_ticks, latency_ticks, dwell_ticks, end_ticks;
  KillModel km;

  FlightScene scene;
  Rng kill_rng;
  std::uint64_t noise_base, profiled_base;

  std::priority_queue<Event, std::vector<Event>, EventAfter> q;
  std::uint64_t next_seq = 0;
  Ticks flight_tick = 0;

  // truth snapshots for the last kRingSlots frames (lazy rendering + stale
  // detections both read capture-time state)
  std::array<std::vector<MosquitoState>, kRingSlots> ring;
  std::array<std::int64_t, kRingSlots> ring_frame;

  TrackStore store;
  bool detector_busy = false;

  GalvoState galvo;
  bool laser_busy = false;
  bool dwell_active = false;
  Ticks dwell_a = 0, dwell_b = 0;
  Vec3 plan_aim;
  double plan_tx = 0.0, plan_ty = 0.0;
  int plan_track = -1;
  // prediction inputs snapshotted at schedule time; the dwell re-aims along
  // the predicted trajectory, so the beam rides with the target instead of
  // parking at a point the target has already left
  Vec3 plan_lo_world;
  double plan_lo_t = 0.0;
  Vec3 plan_vel;
  std::vector<Vec3> dwell_path;   // beam target per flight substep of the dwell
  std::vector<double> integrals;  // per-mosquito overlap-time, current dwell
  int last_dwell_track = -1;
  double last_dwell_end = -1.0;

  EpisodeResult result;

  Engine(const SimConfig& c, std::uint64_t seed, bool logt,
         std::vector<std::string>* el)
      : cfg(c),
        log_tracks(logt),
        elog(el),
        fp(c.scenario.flight),
        rig(c.scenario.make_rig()),
        ropts(c.scenario.make_render()),
        z_nominal(c.scenario.box.center().z),
        dt_ticks(to_ticks(c.scenario.flight.dt)),
        latency_ticks(to_ticks(c.pipeline.effective_latency())),
        dwell_ticks(to_ticks(c.pipeline.dwell)),
        end_ticks(to_ticks(c.pipeline.episode_duration)),
        // calibration anchors to the fixed 0.5 s reference dwell, not the
        // configured one: the dose rate is a property of the laser, so a
        // longer dwell must raise the per-pulse kill probability
        km(c.pipeline.kill_rate_k > 0.0
               ? KillModel{c.pipeline.kill_rate_k}
               : KillModel::calibrated(c.pipeline.laser,
                                       c.scenario.body_radius)),
        scene(c.scenario.box, c.scenario.attractant,
              normalized_flight(c.scenario.flight, dt_ticks), c.scenario.wind,
              c.scenario.mosquito_count, c.scenario.body_radius,
              derive_seed(seed, kSeedTagScene)),
        kill_rng(derive_seed(seed, kSeedTagKill)),
        noise_base(derive_seed(seed, kSeedTagRenderNoise)),
        profiled_base(derive_seed(seed, kSeedTagProfiledDetect)) {
    fp.dt = to_seconds(dt_ticks);  // exact tick-grid step
    ring_frame.fill(-1);
    integrals.assign(std::size_t(cfg.scenario.mosquito_count), 0.0);
    result.killed_at.assign(std::size_t(cfg.scenario.mosquito_count),
                            std::nullopt);
    if (latency_ticks / kFramePeriodTicks > kRingSlots - 2)
      throw RuntimeError("pipeline latency exceeds the snapshot ring (" +
                         std::to_string(kRingSlots) + " frames)");
  }

  static FlightParams normalized_flight(FlightParams p, Ticks dt_ticks) {
    p.dt = to_seconds(dt_ticks);
    return p;
  }

  void push(Ticks tick, Ev kind, std::int64_t arg) {
    q.push(Event{tick, next_seq++, kind, arg});
  }

  void logf(const char* fmt, ...) {
    if (!elog) return;
    char buf[256];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    elog->push_back(buf);
  }

  // --- flight advancement with dwell-overlap accrual (ZOH on the dt grid) ---

  void accrue(Ticks a, Ticks b) {
    const Ticks lo = std::max(a, dwell_a), hi = std::min(b, dwell_b);
    if (lo >= hi) return;
    const double span = to_seconds(hi - lo);
    const std::size_t j = std::min(
        dwell_path.size() - 1,
        std::size_t(std::llround(double(lo - dwell_a) / double(dt_ticks))));
    const Vec3& beam = dwell_path[j];
    const auto& sts = scene.states();
    for (std::size_t i = 0; i < sts.size(); ++i) {
      if (!sts[i].alive) continue;
      integrals[i] += span * beam_overlap(beam, sts[i].position,
                                          sts[i].body_radius, cfg.pipeline.laser);
    }
  }

  void advance_to(Ticks t) {
    while (flight_tick + dt_ticks <= t) {
      if (dwell_active) accrue(flight_tick, flight_tick + dt_ticks);
      scene.advance_one_step();
      flight_tick += dt_ticks;
    }
  }

  const std::vector<MosquitoState>& ring_states(std::int64_t k) {
    const auto slot = std::size_t(k % kRingSlots);
    if (ring_frame[slot] != k)
      throw RuntimeError("snapshot ring miss for frame " + std::to_string(k));
    return ring[slot];
  }

  // --- frame capture ---

  void on_frame_due(std::int64_t k) {
    const Ticks tick = k * kFramePeriodTicks;
    advance_to(tick);
    const auto slot = std::size_t(k % kRingSlots);
    ring[slot] = scene.states();
    ring_frame[slot] = k;
    ++result.frames_captured;

    const double t = to_seconds(tick);
    for (const auto& m : scene.states()) {
      if (!m.alive) continue;
      const auto pr = rig.left.project(m.position);
      if (!pr || !rig.left.in_frame(pr->u, pr->v)) continue;
      ++result.mosquito_frames_visible;
      for (const Track& tr : store.tracks) {
        if (tr.lifecycle != Lifecycle::active) continue;
        const auto gc = tr.gate_center(t);
        if (std::hypot(gc[0] - pr->u, gc[1] - pr->v) <=
            cfg.pipeline.assoc.gate_radius) {
          ++result.mosquito_frames_contained;
          break;
        }
      }
    }

    if (!detector_busy) {
      detector_busy = true;
      push(tick + latency_ticks, Ev::detection_ready, k);
    }
    push(tick + kFramePeriodTicks, Ev::frame_due, k + 1);
  }

  // --- detection paths (all read the capture-time snapshot) ---

  Frame render(const CameraModel& cam, std::int64_t k, int cam_id) {
    ++result.frames_rendered;
    return render_frame(cam, ring_states(k), ropts, noise_base, k, cam_id);
  }

  std::vector<Detection> diff_detect(std::int64_t k, int cam_id, double t_cap,
                                     GrayFrame* gray_out) {
    const CameraModel& cam = cam_id ? rig.right : rig.left;
    if (k == 0) {  // no predecessor frame yet
      if (gray_out) {
        *gray_out = to_gray(render(cam, k, cam_id));
        gray_out->timestamp = t_cap;
      }
      return {};
    }
    GrayFrame cur = to_gray(render(cam, k, cam_id));
    GrayFrame prv = to_gray(render(cam, k - 1, cam_id));
    cur.timestamp = t_cap;
    ThresholdParams tp;
    tp.value = cfg.pipeline.threshold_value;
    const GrayFrame diff = frame_difference(prv, cur, tp);
    auto dets =
        filter_blobs(connected_components(diff), cam, z_nominal, t_cap);
    // Arrival gating: a dark body entering leaves the current frame darker
    // than the previous over its blob. The brighter twin — the spot the body
    // just left, or the afterimage of a neutralized one — would spawn ghost
    // tracks and re-arm dead ones, so it is dropped here.
    std::erase_if(dets, [&](const Detection& d) {
      long signed_sum = 0;
      const int x1 = std::min(d.bbox_x + d.bbox_w, cur.width);
      const int y1 = std::min(d.bbox_y + d.bbox_h, cur.height);
      for (int y = std::max(0, d.bbox_y); y < y1; ++y)
        for (int x = std::max(0, d.bbox_x); x < x1; ++x) {
          const int dv = int(prv.at(x, y)) - int(cur.at(x, y));
          if (dv > tp.value || -dv > tp.value) signed_sum += dv;
        }
      return signed_sum <= 0;
    });
    if (gray_out) *gray_out = std::move(cur);
    return dets;
  }

  std::vector<Detection> color_detect(std::int64_t k, int cam_id,
                                      double t_cap) {
    const CameraModel& cam = cam_id ? rig.right : rig.left;
    const Frame f = render(cam, k, cam_id);
    ColorMaskParams cmp;
    cmp.center[2] = cfg.pipeline.color_v_center;
    cmp.tol[2] = cfg.pipeline.color_v_tol;
    const GrayFrame mask = color_mask(f, cmp);
    return filter_blobs(connected_components(mask), cam, z_nominal, t_cap);
  }

  std::vector<Detection> profiled(std::int64_t k, int cam_id, double t_cap) {
    const CameraModel& cam = cam_id ? rig.right : rig.left;
    Rng r(derive_seed(derive_seed(profiled_base, std::uint64_t(k)),
                      std::uint64_t(cam_id)));
    auto dets = profiled_detect(ring_states(k), cam, cfg.pipeline.profile, r);
    for (auto& d : dets) d.timestamp = t_cap;
    return dets;
  }

  void on_detection_ready(std::int64_t k) {
    advance_to(k * kFramePeriodTicks + latency_ticks);
    detector_busy = false;
    const double t_cap = to_seconds(k * kFramePeriodTicks);
    const double t_now = to_seconds(k * kFramePeriodTicks + latency_ticks);

    std::vector<Detection> left, right;
    GrayFrame gray_left;
    bool have_gray = false;
    switch (cfg.pipeline.detector) {
      case DetectorKind::frame_diff:
        left = diff_detect(k, 0, t_cap, nullptr);
        right = diff_detect(k, 1, t_cap, nullptr);
        break;
      case DetectorKind::color:
        left = color_detect(k, 0, t_cap);
        right = color_detect(k, 1, t_cap);
        break;
      case DetectorKind::correlation_track:
        left = diff_detect(k, 0, t_cap, &gray_left);
        right = diff_detect(k, 1, t_cap, nullptr);
        have_gray = true;
        break;
      case DetectorKind::profiled:
        left = profiled(k, 0, t_cap);
        right = profiled(k, 1, t_cap);
        break;
    }

    if (have_gray) refine_with_templates(gray_left, left, t_cap);

    ++result.detection_epochs;
    result.latency_sum_s += cfg.pipeline.effective_latency();
    result.detections += long(left.size());

    const Assignment asg =
        associate(store.tracks, left, t_cap, cfg.pipeline.assoc);
    update_tracks(store, asg, left, right, t_cap, cfg.pipeline.assoc, rig,
                  z_nominal);
    maintain_coasting(t_cap);
    if (have_gray) refresh_templates(gray_left, t_cap);

    if (log_tracks)
      for (const Track& tr : store.tracks) {
        if (tr.lifecycle == Lifecycle::terminated || tr.history.empty())
          continue;
        const HistoryPoint& h = tr.last();
        result.track_log.push_back(
            {tr.id, t_cap, h.u, h.v, h.world, tr.lifecycle});
      }

    logf("t=%.6f detect frame=%lld left=%zu right=%zu tracks=%zu", t_now,
         (long long)k, left.size(), right.size(), store.tracks.size());

    if (!laser_busy) try_schedule(k * kFramePeriodTicks + latency_ticks, t_now);
  }

  // NCC refinement: a confident template lock overrides the nearest blob
  // centroid (or stands in for a missing one), which carries tracks through
  // detector flicker.
  void refine_with_templates(const GrayFrame& gray, std::vector<Detection>& dets,
                             double t_cap) {
    for (Track& tr : store.tracks) {
      if (tr.lifecycle == Lifecycle::terminated || tr.tmpl.pix.empty())
        continue;
      double score = 0.0;
      const auto ref =
          correlation_refine(tr, gray, cfg.pipeline.search_radius, &score);
      tr.tmpl_score = score;
      if (!ref) continue;
      int best = -1;
      double best_d = kBlobSnapRadius;
      for (std::size_t i = 0; i < dets.size(); ++i) {
        const double d =
            std::hypot(dets[i].u - (*ref)[0], dets[i].v - (*ref)[1]);
        if (d < best_d) {
          best_d = d;
          best = int(i);
        }
      }
      if (best >= 0) {
        dets[std::size_t(best)].u = (*ref)[0];
        dets[std::size_t(best)].v = (*ref)[1];
        dets[std::size_t(best)].score = score;
      } else {
        Detection d;
        d.u = (*ref)[0];
        d.v = (*ref)[1];
        d.bbox_x = int((*ref)[0]) - 1;
        d.bbox_y = int((*ref)[1]) - 1;
        d.bbox_w = 3;
        d.bbox_h = 3;
        d.area_px = 9;
        d.timestamp = t_cap;
        d.score = score;
        dets.push_back(d);
      }
    }
  }

  void refresh_templates(const GrayFrame& gray, double t_cap) {
    const int r = cfg.pipeline.template_radius;
    for (Track& tr : store.tracks) {
      if (tr.lifecycle != Lifecycle::active || tr.history.empty()) continue;
      const HistoryPoint& h = tr.last();
      if (!h.observed || h.t != t_cap) continue;
      if (!tr.tmpl.pix.empty() && tr.tmpl_score < kTemplateRefresh) continue;
      const int cx = int(std::lround(h.u)), cy = int(std::lround(h.v));
      if (cx - r < 0 || cy - r < 0 || cx + r >= gray.width ||
          cy + r >= gray.height)
        continue;
      GrayFrame patch(2 * r + 1, 2 * r + 1);
      patch.timestamp = t_cap;
      for (int y = 0; y <= 2 * r; ++y)
        for (int x = 0; x <= 2 * r; ++x)
          patch.at(x, y) = gray.at(cx - r + x, cy - r + y);
      tr.tmpl = std::move(patch);
    }
  }

  // Lost tracks coast on the flight model; the coasted point becomes the
  // association gate. A coast outside the frustum turns the track
  // dead_reckoned; exceeding max_coast terminates it.
  void maintain_coasting(double t_cap) {
    for (Track& tr : store.tracks) {
      if (tr.lifecycle != Lifecycle::lost &&
          tr.lifecycle != Lifecycle::dead_reckoned)
        continue;
      const HistoryPoint* lo = tr.last_observed();
      if (!lo) {
        tr.lifecycle = Lifecycle::terminated;
        continue;
      }
      const double elapsed = t_cap - lo->t;
      if (elapsed > cfg.pipeline.max_coast) {
        tr.lifecycle = Lifecycle::terminated;
        logf("t=%.6f terminate track=%d coast=%.3f", t_cap, tr.id, elapsed);
        continue;
      }
      const Vec3 coast = dead_reckon(tr, fp, cfg.scenario.wind, elapsed);
      const auto pr = rig.left.project(coast);
      if (!pr) {
        tr.lifecycle = Lifecycle::terminated;
        continue;
      }
      tr.gate_override = std::array<double, 2>{pr->u, pr->v};
      const bool inside = rig.left.in_frame(pr->u, pr->v);
      tr.lifecycle = inside ? Lifecycle::lost : Lifecycle::dead_reckoned;
      tr.history.push_back({t_cap, pr->u, pr->v, coast, false});
      while (tr.history.size() > Track::kHistoryCap) tr.history.pop_front();
    }
  }

  // --- lasing ---

  void try_schedule(Ticks now, double t_now) {
    std::vector<Vec3> aims(store.tracks.size());
    for (std::size_t i = 0; i < store.tracks.size(); ++i) {
      const auto p = predict(store.tracks[i], cfg.pipeline.predictor, fp,
                             cfg.scenario.wind);
      // targets cannot leave the enclosure, so neither should an aim point
      if (p) aims[i] = clamp_to_box(*p, cfg.scenario.box);
    }
    const auto order = rank_targets(store.tracks, aims, cfg.pipeline.scheduler,
                                    galvo, last_dwell_track, last_dwell_end);
    for (const int ti : order) {
      Track& tr = store.tracks[std::size_t(ti)];
      const Vec3 a = aims[std::size_t(ti)];
      const auto ang = angles_for_target(a, cfg.pipeline.galvo);
      if (!ang) continue;
      const double mv =
          move_time(galvo, (*ang)[0], (*ang)[1], cfg.pipeline.galvo);
      plan_aim = a;
      plan_tx = (*ang)[0];
      plan_ty = (*ang)[1];
      plan_track = tr.id;
      const HistoryPoint* lo = tr.last_observed();
      plan_lo_world = lo->world;
      plan_lo_t = lo->t;
      plan_vel = tr.velocity_estimate;
      laser_busy = true;
      push(now + to_ticks(mv), Ev::galvo_settled, 0);
      logf("t=%.6f aim track=%d move_s=%.6f aim=(%.1f,%.1f,%.1f)", t_now,
           tr.id, mv, a.x, a.y, a.z);
      return;
    }
  }

  // The beam path across the dwell, one point per flight substep, predicted
  // from the schedule-time snapshot under the configured mode. `none` parks
  // on the (stale) aim; `linear` rides the chord velocity; `flight_model`
  // rides the same rollout predict() uses, hover guard included.
  void build_dwell_path() {
    const std::size_t n = std::size_t(dwell_ticks / dt_ticks) + 2;
    dwell_path.assign(n, plan_aim);
    if (cfg.pipeline.predictor.mode == PredictionMode::none) return;

    const Vec3 v_body = plan_vel - cfg.scenario.wind.velocity;
    const double speed = v_body.norm();
    if (speed < kHoverSpeedFrac * fp.s_min) return;  // parked on a hoverer

    const double t0 = to_seconds(dwell_a);
    if (cfg.pipeline.predictor.mode == PredictionMode::linear) {
      for (std::size_t j = 0; j < n; ++j) {
        const double e = t0 + double(j) * fp.dt - plan_lo_t;
        dwell_path[j] =
            clamp_to_box(plan_lo_world + plan_vel * e, cfg.scenario.box);
      }
      return;
    }
    MosquitoState st;
    st.position = plan_lo_world;
    st.heading = (1.0 / speed) * v_body;
    st.speed = std::min(speed, fp.s_max);
    const long pre = std::lround((t0 - plan_lo_t) / fp.dt);
    for (long i = 0; i < pre; ++i) st = step(st, fp, cfg.scenario.wind);
    for (std::size_t j = 0; j < n; ++j) {
      dwell_path[j] = clamp_to_box(st.position, cfg.scenario.box);
      st = step(st, fp, cfg.scenario.wind);
    }
  }

  void on_galvo_settled(Ticks tick) {
    advance_to(tick);
    galvo.theta_x = plan_tx;
    galvo.theta_y = plan_ty;
    galvo.timestamp = to_seconds(tick);
    dwell_a = tick;
    dwell_b = tick + dwell_ticks;
    build_dwell_path();
    std::fill(integrals.begin(), integrals.end(), 0.0);
    dwell_active = true;
    push(dwell_b, Ev::dwell_complete, 0);
  }

  void on_dwell_complete(Ticks tick) {
    advance_to(tick);
    if (flight_tick < tick) accrue(flight_tick, tick);  // partial ZOH tail
    dwell_active = false;

    int best = -1;
    double best_i = 0.0;
    for (std::size_t i = 0; i < integrals.size(); ++i)
      if (integrals[i] > best_i) {
        best_i = integrals[i];
        best = int(i);
      }

    // One uniform per living mosquito, in id order, at every pulse —
    // the draw stream depends only on pulse count and the alive set, never
    // on where the beam pointed. Only the mosquito that collected the most
    // beam can actually die: a pulse neutralizes at most one target, which
    // keeps kills/s <= 1/dwell structural in any scene density.
    bool best_killed = false;
    auto& sts = scene.states();
    for (std::size_t i = 0; i < sts.size(); ++i) {
      if (!sts[i].alive) continue;
      const double u = kill_rng.uniform01();
      if (int(i) == best && u < kill_probability(integrals[i], km)) {
        sts[i].alive = false;
        result.killed_at[i] = to_seconds(tick);
        best_killed = true;
        logf("t=%.6f kill mosquito=%zu overlap=%.4f", to_seconds(tick), i,
             integrals[i]);
      }
    }

    if (best_killed) {
      // the target is gone; retiring its track here keeps the next frames
      // from reporting a spurious loss and frees the scheduler immediately
      for (Track& tr : store.tracks)
        if (tr.id == plan_track && tr.lifecycle != Lifecycle::terminated) {
          tr.lifecycle = Lifecycle::terminated;
          logf("t=%.6f terminate track=%d neutralized", to_seconds(tick),
               tr.id);
        }
    }
    if (!dwell_path.empty())
      if (const auto ang =
              angles_for_target(dwell_path.back(), cfg.pipeline.galvo)) {
        galvo.theta_x = (*ang)[0];  // mirrors rest where the sweep ended
        galvo.theta_y = (*ang)[1];
        galvo.timestamp = to_seconds(tick);
      }

    ++result.fires;
    result.fire_log.push_back({to_seconds(dwell_a), plan_aim,
                               to_seconds(dwell_b - dwell_a), plan_track, best,
                               best_i, best_killed});
    last_dwell_track = plan_track;
    last_dwell_end = to_seconds(tick);
    laser_busy = false;
    logf("t=%.6f dwell_end track=%d best=%d overlap=%.4f killed=%d",
         to_seconds(tick), plan_track, best, best_i, int(best_killed));
  }

  EpisodeResult run() {
    const auto t0 = std::chrono::steady_clock::now();
    push(0, Ev::frame_due, 0);
    while (!q.empty()) {
      const Event e = q.top();
      if (e.tick >= end_ticks) break;
      q.pop();
      switch (e.kind) {
        case Ev::frame_due: on_frame_due(e.arg); break;
        case Ev::detection_ready: on_detection_ready(e.arg); break;
        case Ev::galvo_settled: on_galvo_settled(e.tick); break;
        case Ev::dwell_complete: on_dwell_complete(e.tick); break;
      }
    }
    result.lost_track_events = store.lost_events;
    result.wall_clock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return result;
  }
};

}  // namespace

std::vector<int> rank_targets(const std::vector<Track>& tracks,
                              const std::vector<Vec3>& aim_points,
                              SchedulerKind kind, const GalvoState& galvo,
                              int last_dwell_track_id, double last_dwell_end) {
  // unit vector along the beam at the current deflection
  const Vec3 axis =
      Vec3{std::tan(galvo.theta_x), std::tan(galvo.theta_y), 1.0}.normalized();
  std::vector<std::pair<double, int>> keyed;
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    const Track& tr = tracks[i];
    if (tr.lifecycle != Lifecycle::active || tr.history.size() < 2) continue;
    const HistoryPoint* lo = tr.last_observed();
    if (!lo) continue;
    // a just-lased target must be seen again before it can be re-engaged
    if (tr.id == last_dwell_track_id && lo->t <= last_dwell_end) continue;
    double key = double(tr.id);
    if (kind == SchedulerKind::nearest_first) {
      const Vec3& p = aim_points[i];
      key = (p - dot(p, axis) * axis).norm();  // distance to the beam axis
    }
    keyed.emplace_back(key, int(i));
  }
  std::sort(keyed.begin(), keyed.end(),
            [&tracks](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first < b.first;
              return tracks[std::size_t(a.second)].id <
                     tracks[std::size_t(b.second)].id;
            });
  std::vector<int> out;
  out.reserve(keyed.size());
  for (const auto& [key, idx] : keyed) out.push_back(idx);
  return out;
}

EpisodeResult run_episode(const SimConfig& cfg, std::uint64_t seed,
                          bool log_tracks,
                          std::vector<std::string>* event_log) {
  validate(cfg);
  Engine eng(cfg, seed, log_tracks, event_log);
  return eng.run();
}

}  // namespace mz
