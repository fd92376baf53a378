#pragma once

// Least-squares extraction of first-order capture kinetics from a trace:
// -ln(1 - captured_fraction) is linear in time with slope equal to the rate.

#include "dwell/core.hpp"
#include "dwell/trace.hpp"

#include <cmath>
#include <span>
#include <vector>

namespace dwell {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double slope_stderr = 0.0;
  int n_points = 0;
};

// Ordinary least squares with intercept.
inline LinearFit fit_linear(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw ValidationError("fit_linear: x and y must have the same length");
  const int n = static_cast<int>(x.size());
  if (n < 2) throw ValidationError("fit_linear: need at least two points");

  double mean_x = 0.0, mean_y = 0.0;
  for (int i = 0; i < n; ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= n;
  mean_y /= n;

  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = 0; i < n; ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw ValidationError("fit_linear: x values are all equal");

  LinearFit fit;
  fit.n_points = n;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  const double ss_res = std::max(0.0, syy - fit.slope * sxy);
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.slope_stderr = n > 2 ? std::sqrt(ss_res / (n - 2) / sxx) : 0.0;
  return fit;
}

struct RateFitOptions {
  double window_max_fraction = 0.5;  // fit only while captured fraction is below
  int min_samples = 10;
};

// Regression of -ln(1 - captured_fraction) on time over the initial window.
inline LinearFit exponential_rate_fit(const KineticsTrace& trace,
                                      const RateFitOptions& options = {}) {
  validate_trace(trace, "exponential_rate_fit");
  std::vector<double> times;
  std::vector<double> transformed;
  for (const TraceSample& s : trace.samples) {
    if (s.captured_fraction >= options.window_max_fraction) break;
    times.push_back(s.time);
    transformed.push_back(-std::log1p(-s.captured_fraction));
  }
  if (static_cast<int>(times.size()) < options.min_samples)
    throw ValidationError("exponential_rate_fit: fewer qualifying samples than required");
  if (transformed.back() == 0.0)
    throw ValidationError("exponential_rate_fit: no capture growth within the fit window");
  return fit_linear(times, transformed);
}

inline double fit_exponential_rate(const KineticsTrace& trace,
                                   const RateFitOptions& options = {}) {
  const double rate = exponential_rate_fit(trace, options).slope;
  if (!(rate > 0.0))
    throw ValidationError("fit_exponential_rate: fitted rate is not positive");
  return rate;
}

}  // namespace dwell
