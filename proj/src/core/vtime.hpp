#pragma once

#include <cstdint>

namespace mz {

// Virtual-clock tick. One tick is 1/720000 s, chosen so that the flight step
// (1/240 s), the frame period (1/30 s), the galvo settle floor (50 us) and all
// Table-1 latencies land on exact integer counts. Event ordering is integer
// comparison, so schedules are reproducible across platforms.
using Ticks = std::int64_t;

inline constexpr Ticks kTicksPerSecond = 720000;

inline constexpr int kFrameRate = 30;
inline constexpr Ticks kFramePeriodTicks = kTicksPerSecond / kFrameRate;  // 24000

inline Ticks to_ticks(double seconds) {
  return static_cast<Ticks>(seconds * double(kTicksPerSecond) + (seconds >= 0 ? 0.5 : -0.5));
}

inline double to_seconds(Ticks t) { return double(t) / double(kTicksPerSecond); }

}  // namespace mz
