#pragma once

// Kinetics traces shared by the integrator, the measurement protocols and the
// scenario drivers.

#include "dwell/core.hpp"

#include <limits>
#include <string>
#include <vector>

namespace dwell {

struct TraceSample {
  double time = 0.0;
  double pop_x = 0.0;
  double pop_y = 0.0;
  double captured_fraction = 0.0;
  double scoop_count = 0.0;  // per-event count; 0 for continuous evolution
};

struct KineticsTrace {
  std::vector<TraceSample> samples;

  bool empty() const { return samples.empty(); }
  const TraceSample& front() const { return samples.front(); }
  const TraceSample& back() const { return samples.back(); }
};

// Sample times strictly increasing, captured fraction in [0, 1] and
// nondecreasing.
inline void validate_trace(const KineticsTrace& trace, const std::string& context) {
  double last_time = -std::numeric_limits<double>::infinity();
  double last_cf = 0.0;
  for (const TraceSample& s : trace.samples) {
    if (!(s.time > last_time))
      throw ValidationError(context + ": sample times must be strictly increasing");
    if (s.captured_fraction < 0.0 || s.captured_fraction > 1.0)
      throw ValidationError(context + ": captured fraction outside [0, 1]");
    if (s.captured_fraction + 1e-12 < last_cf)
      throw ValidationError(context + ": captured fraction must be nondecreasing");
    last_time = s.time;
    last_cf = s.captured_fraction;
  }
}

}  // namespace dwell
