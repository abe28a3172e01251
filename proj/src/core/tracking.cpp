#include "tracking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace mz {

const char* lifecycle_name(Lifecycle lc) {
  switch (lc) {
    case Lifecycle::tentative: return "tentative";
    case Lifecycle::active: return "active";
    case Lifecycle::lost: return "lost";
    case Lifecycle::dead_reckoned: return "dead_reckoned";
    case Lifecycle::terminated: return "terminated";
  }
  return "?";
}

const HistoryPoint* Track::last_observed() const {
  for (auto it = history.rbegin(); it != history.rend(); ++it)
    if (it->observed) return &*it;
  return nullptr;
}

std::array<double, 2> Track::pixel_velocity() const {
  const HistoryPoint* a = nullptr;
  const HistoryPoint* b = nullptr;  // b newer
  for (auto it = history.rbegin(); it != history.rend(); ++it) {
    if (!it->observed) continue;
    if (!b) {
      b = &*it;
    } else {
      a = &*it;
      break;
    }
  }
  if (!a || !b || b->t - a->t < 1e-12) return {0.0, 0.0};
  const double dt = b->t - a->t;
  return {(b->u - a->u) / dt, (b->v - a->v) / dt};
}

std::array<double, 2> Track::gate_center(double t) const {
  if (gate_override) return *gate_override;
  const HistoryPoint* lo = last_observed();
  if (!lo) return {0.0, 0.0};
  const auto pv = pixel_velocity();
  return {lo->u + pv[0] * (t - lo->t), lo->v + pv[1] * (t - lo->t)};
}

Assignment associate(const std::vector<Track>& tracks,
                     const std::vector<Detection>& detections, double t,
                     const AssociationConfig& cfg) {
  struct Cand {
    double dist;
    int track_id;
    int track_idx;
    int det_idx;
  };
  std::vector<Cand> cands;
  for (int ti = 0; ti < int(tracks.size()); ++ti) {
    const Track& tr = tracks[std::size_t(ti)];
    if (tr.lifecycle == Lifecycle::terminated) continue;
    const HistoryPoint* lo = tr.last_observed();
    if (!lo) continue;
    const auto gc = tr.gate_center(t);
    for (int di = 0; di < int(detections.size()); ++di) {
      const Detection& d = detections[std::size_t(di)];
      const double dg = std::hypot(d.u - gc[0], d.v - gc[1]);
      const double dl = std::hypot(d.u - lo->u, d.v - lo->v);
      const double dist = std::min(dg, dl);
      if (dist <= cfg.gate_radius) cands.push_back({dist, tr.id, ti, di});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    return std::tie(a.dist, a.track_id, a.det_idx) <
           std::tie(b.dist, b.track_id, b.det_idx);
  });

  Assignment out;
  std::vector<char> track_used(tracks.size(), 0), det_used(detections.size(), 0);
  for (const Cand& c : cands) {
    if (track_used[std::size_t(c.track_idx)] || det_used[std::size_t(c.det_idx)])
      continue;
    track_used[std::size_t(c.track_idx)] = 1;
    det_used[std::size_t(c.det_idx)] = 1;
    out.matches.emplace_back(c.track_idx, c.det_idx);
  }
  for (int ti = 0; ti < int(tracks.size()); ++ti)
    if (!track_used[std::size_t(ti)] &&
        tracks[std::size_t(ti)].lifecycle != Lifecycle::terminated)
      out.unmatched_tracks.push_back(ti);
  for (int di = 0; di < int(detections.size()); ++di)
    if (!det_used[std::size_t(di)]) out.unmatched_detections.push_back(di);
  return out;
}

double ncc_score(const GrayFrame& tmpl, const GrayFrame& gray, int x0, int y0) {
  const int tw = tmpl.width, th = tmpl.height;
  double mean_t = 0.0, mean_w = 0.0;
  for (int y = 0; y < th; ++y)
    for (int x = 0; x < tw; ++x) {
      mean_t += tmpl.at(x, y);
      mean_w += gray.at(x0 + x, y0 + y);
    }
  const double n = double(tw) * th;
  mean_t /= n;
  mean_w /= n;
  double num = 0.0, den_t = 0.0, den_w = 0.0;
  for (int y = 0; y < th; ++y)
    for (int x = 0; x < tw; ++x) {
      const double a = tmpl.at(x, y) - mean_t;
      const double b = gray.at(x0 + x, y0 + y) - mean_w;
      num += a * b;
      den_t += a * a;
      den_w += b * b;
    }
  const double den = std::sqrt(den_t * den_w);
  if (den < 1e-9) return 0.0;  // zero-variance window or template
  return num / den;
}

std::optional<std::array<double, 2>> correlation_refine(const Track& track,
                                                        const GrayFrame& gray,
                                                        int search_radius,
                                                        double* score_out) {
  if (score_out) *score_out = 0.0;
  if (track.tmpl.pix.empty()) return std::nullopt;
  const int tw = track.tmpl.width, th = track.tmpl.height;
  const int rx = tw / 2, ry = th / 2;
  const auto gc = track.gate_center(gray.timestamp);
  const int cx = int(std::lround(gc[0]));
  const int cy = int(std::lround(gc[1]));

  // candidate template centers, clipped so the patch stays inside the frame
  const int lo_x = std::max(rx, cx - search_radius);
  const int hi_x = std::min(gray.width - 1 - (tw - 1 - rx), cx + search_radius);
  const int lo_y = std::max(ry, cy - search_radius);
  const int hi_y = std::min(gray.height - 1 - (th - 1 - ry), cy + search_radius);
  if (lo_x > hi_x || lo_y > hi_y) return std::nullopt;

  const int sw = hi_x - lo_x + 1, sh = hi_y - lo_y + 1;
  std::vector<double> scores(std::size_t(sw) * sh);
  double best = -2.0;
  int bx = lo_x, by = lo_y;
  for (int py = lo_y; py <= hi_y; ++py)
    for (int px = lo_x; px <= hi_x; ++px) {
      const double s = ncc_score(track.tmpl, gray, px - rx, py - ry);
      scores[std::size_t(py - lo_y) * sw + (px - lo_x)] = s;
      if (s > best) {
        best = s;
        bx = px;
        by = py;
      }
    }
  if (score_out) *score_out = best;
  if (best < 0.5) return std::nullopt;

  auto sc = [&](int px, int py) {
    return scores[std::size_t(py - lo_y) * sw + (px - lo_x)];
  };
  double du = 0.0, dv = 0.0;
  if (bx > lo_x && bx < hi_x) {
    const double sm = sc(bx - 1, by), s0 = best, sp = sc(bx + 1, by);
    const double den = sm - 2.0 * s0 + sp;
    if (den < -1e-12) du = std::clamp(0.5 * (sm - sp) / den, -0.5, 0.5);
  }
  if (by > lo_y && by < hi_y) {
    const double sm = sc(bx, by - 1), s0 = best, sp = sc(bx, by + 1);
    const double den = sm - 2.0 * s0 + sp;
    if (den < -1e-12) dv = std::clamp(0.5 * (sm - sp) / den, -0.5, 0.5);
  }
  return std::array<double, 2>{bx + du, by + dv};
}

namespace {

Vec3 world_from_detection(const Detection& det,
                          const std::vector<Detection>& right_dets,
                          std::vector<char>& right_used, const StereoRig& rig,
                          double z_nominal) {
  const double f = rig.left.intr.f_px, T = rig.baseline();
  const double d_min = f * T / (2.0 * z_nominal);
  const double d_max = f * T / (0.5 * z_nominal);
  int best = -1;
  double best_dv = 4.0;  // epipolar row tolerance, px
  for (int ri = 0; ri < int(right_dets.size()); ++ri) {
    if (right_used[std::size_t(ri)]) continue;
    const Detection& r = right_dets[std::size_t(ri)];
    const double dv = std::fabs(r.v - det.v);
    const double disp = det.u - r.u;
    if (disp < d_min || disp > d_max) continue;
    if (dv < best_dv) {
      best_dv = dv;
      best = ri;
    }
  }
  if (best >= 0) {
    const auto p =
        rig.triangulate(det.u, det.v, right_dets[std::size_t(best)].u);
    if (p) {
      right_used[std::size_t(best)] = 1;
      return *p;
    }
  }
  return rig.left.unproject(det.u, det.v, z_nominal);  // mono fallback
}

void append_history(Track& tr, double t, double u, double v, const Vec3& world,
                    bool observed) {
  tr.history.push_back({t, u, v, world, observed});
  while (tr.history.size() > Track::kHistoryCap) tr.history.pop_front();
}

void refresh_velocity(Track& tr) {
  // chord over the two newest observations only: a longer window averages
  // across heading drift, bending the direction and shrinking the magnitude
  // until model prediction degenerates into parking on the last fix
  const HistoryPoint* pts[2] = {};
  int n = 0;
  for (auto it = tr.history.rbegin(); it != tr.history.rend() && n < 2; ++it)
    if (it->observed) pts[n++] = &*it;
  if (n < 2) {
    tr.velocity_estimate = Vec3{0.0, 0.0, 0.0};
    return;
  }
  const double dt = pts[0]->t - pts[1]->t;
  tr.velocity_estimate =
      dt > 1e-12 ? (1.0 / dt) * (pts[0]->world - pts[1]->world) : Vec3{};
}

}  // namespace

TrackUpdateStats update_tracks(TrackStore& store, const Assignment& asg,
                               const std::vector<Detection>& left_dets,
                               const std::vector<Detection>& right_dets,
                               double timestamp, const AssociationConfig& cfg,
                               const StereoRig& rig, double z_nominal) {
  TrackUpdateStats stats;
  std::vector<char> right_used(right_dets.size(), 0);

  // matches in track-id order so stereo pairing is deterministic
  auto matches = asg.matches;
  std::sort(matches.begin(), matches.end(),
            [&](const std::pair<int, int>& a, const std::pair<int, int>& b) {
              return store.tracks[std::size_t(a.first)].id <
                     store.tracks[std::size_t(b.first)].id;
            });
  for (const auto& [ti, di] : matches) {
    Track& tr = store.tracks[std::size_t(ti)];
    const Detection& det = left_dets[std::size_t(di)];
    const Vec3 world =
        world_from_detection(det, right_dets, right_used, rig, z_nominal);
    append_history(tr, timestamp, det.u, det.v, world, true);
    refresh_velocity(tr);
    tr.miss_count = 0;
    tr.hit_streak += 1;
    tr.gate_override.reset();
    if (tr.lifecycle == Lifecycle::tentative && tr.hit_streak >= cfg.confirm_hits)
      tr.lifecycle = Lifecycle::active;
    else if (tr.lifecycle == Lifecycle::lost ||
             tr.lifecycle == Lifecycle::dead_reckoned)
      tr.lifecycle = Lifecycle::active;
    stats.matched += 1;
  }

  for (const int ti : asg.unmatched_tracks) {
    Track& tr = store.tracks[std::size_t(ti)];
    tr.hit_streak = 0;
    if (tr.lifecycle == Lifecycle::tentative) {
      tr.lifecycle = Lifecycle::terminated;
      continue;
    }
    tr.miss_count += 1;
    if (tr.lifecycle == Lifecycle::active && tr.miss_count > cfg.max_misses) {
      tr.lifecycle = Lifecycle::lost;
      tr.coast_since = timestamp;
      store.lost_events += 1;
      stats.lost_events += 1;
    }
  }

  for (const int di : asg.unmatched_detections) {
    const Detection& det = left_dets[std::size_t(di)];
    Track tr;
    tr.id = store.next_id++;
    tr.lifecycle = Lifecycle::tentative;
    tr.hit_streak = 1;
    const Vec3 world =
        world_from_detection(det, right_dets, right_used, rig, z_nominal);
    append_history(tr, timestamp, det.u, det.v, world, true);
    store.tracks.push_back(std::move(tr));
    stats.spawned += 1;
  }
  return stats;
}

std::optional<Vec3> predict(const Track& track, const PredictorConfig& cfg,
                            const FlightParams& params, const Wind& wind) {
  if (track.history.size() < 2) return std::nullopt;
  const HistoryPoint* lo = track.last_observed();
  if (!lo) return std::nullopt;
  switch (cfg.mode) {
    case PredictionMode::none:
      return lo->world;
    case PredictionMode::linear:
      return lo->world + cfg.horizon * track.velocity_estimate;
    case PredictionMode::flight_model: {
      const Vec3 v_body = track.velocity_estimate - wind.velocity;
      const double s = v_body.norm();
      // the estimate is a chord average over the history window, so sustained
      // flight measures well below the true airspeed; hover jitter measures
      // lower still.  half of s_min separates the two regimes.
      if (s < kHoverSpeedFrac * params.s_min) return lo->world;
      MosquitoState st;
      st.position = lo->world;
      st.heading = (1.0 / s) * v_body;
      st.speed = std::min(s, params.s_max);
      const long n = std::lround(cfg.horizon / params.dt);
      for (long i = 0; i < n; ++i) st = step(st, params, wind);
      return st.position;
    }
  }
  return lo->world;
}

Vec3 dead_reckon(const Track& track, const FlightParams& params,
                 const Wind& wind, double elapsed) {
  PredictorConfig cfg;
  cfg.mode = PredictionMode::flight_model;
  cfg.horizon = elapsed;
  if (const auto p = predict(track, cfg, params, wind)) return *p;
  const HistoryPoint* lo = track.last_observed();
  return lo ? lo->world : Vec3{};
}

}  // namespace mz
