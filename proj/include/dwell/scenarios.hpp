#pragma once

// Named experiments composed from the dynamics and measurement modules:
// the scooped-box capture run, the two-arm adaptive-mutation comparison,
// the measurement-frequency (Zeno) scan, and the reversible-vs-absorbing
// decay contrast.

#include "dwell/core.hpp"
#include "dwell/dynamics.hpp"
#include "dwell/fit.hpp"
#include "dwell/measurement.hpp"
#include "dwell/trace.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace dwell {

// ---- scooped box ----

inline KineticsTrace scoop_box_experiment(std::int64_t n_particles, double delta,
                                          double epsilon,
                                          const MeasurementProtocol& protocol,
                                          std::uint64_t seed,
                                          bool monte_carlo = false,
                                          int n_threads = 1) {
  const WellSystem system{delta, epsilon, false};
  if (monte_carlo)
    return sample_trajectories(system, protocol, n_particles, seed, n_threads);
  return run_protocol(system, protocol, n_particles, seed);
}

// ---- adaptive mutation ----

// Ratio of fitted capture rates between the two arms; `predicted` is the
// ratio of the driving decoherence rates.
struct EnhancementResult {
  double rate_minus = 0.0;
  double rate_plus = 0.0;
  double enhancement = 0.0;
  double predicted = 0.0;
};

// Bookkeeping for the baseline (thermal-only) arm: count mutants at each
// decoherence event, or keep the baseline frozen (no cumulative mutants, so
// the reported enhancement is infinite).
enum class BaselineBookkeeping { count_mutants, frozen };

struct MutationOptions {
  double t_max = 0.0;
  std::int64_t n_particles = 1'000'000;
  std::uint64_t seed = 42;
  BaselineBookkeeping baseline = BaselineBookkeeping::count_mutants;
};

struct AdaptiveMutationRun {
  EnhancementResult result;
  KineticsTrace minus_trace;
  KineticsTrace plus_trace;
};

// Both arms run the same Poisson-event protocol; only the event rate differs.
// Rates must stay well below the tunnelling frequency or the per-event
// transfer probability is no longer rate-independent.
inline AdaptiveMutationRun adaptive_mutation_full(const WellSystem& system,
                                                  double gamma_minus,
                                                  double gamma_plus,
                                                  const MutationOptions& options) {
  system.validate();
  if (!(gamma_minus > 0.0) || !(gamma_plus > 0.0))
    throw ValidationError("adaptive_mutation_run: decoherence rates must be positive");
  const double omega = rabi_angular_frequency(system.delta, system.epsilon);
  if (std::max(gamma_minus, gamma_plus) > 0.1 * omega)
    throw ValidationError(
        "adaptive_mutation_run: decoherence rate above Omega/10 leaves the adaptive regime");
  if (!(options.t_max > 0.0))
    throw ValidationError("adaptive_mutation_run: t_max must be positive");

  MeasurementProtocol arm;
  arm.timing = TimingKind::poisson;
  arm.t_max = options.t_max;

  AdaptiveMutationRun run;
  run.result.predicted = gamma_plus / gamma_minus;

  arm.rate = gamma_plus;
  arm.mode = ProtocolMode::scoop;
  run.plus_trace = run_protocol(system, arm, options.n_particles, options.seed);
  run.result.rate_plus = fit_exponential_rate(run.plus_trace);

  arm.rate = gamma_minus;
  if (options.baseline == BaselineBookkeeping::count_mutants) {
    run.minus_trace = run_protocol(system, arm, options.n_particles, options.seed);
    run.result.rate_minus = fit_exponential_rate(run.minus_trace);
    run.result.enhancement = run.result.rate_plus / run.result.rate_minus;
  } else {
    arm.mode = ProtocolMode::look_only;
    run.minus_trace = run_protocol(system, arm, options.n_particles, options.seed);
    run.result.rate_minus = 0.0;
    run.result.enhancement = std::numeric_limits<double>::infinity();
  }
  return run;
}

inline EnhancementResult adaptive_mutation_run(const WellSystem& system,
                                               double gamma_minus,
                                               double gamma_plus,
                                               const MutationOptions& options) {
  return adaptive_mutation_full(system, gamma_minus, gamma_plus, options).result;
}

// ---- measurement-frequency scan ----

struct ZenoPoint {
  double tau = 0.0;
  double effective_rate = 0.0;
};

inline std::vector<double> log_spaced_taus(double tau_min, double tau_max,
                                           int points_per_decade) {
  if (!(tau_min > 0.0) || !(tau_max > tau_min))
    throw ValidationError("log_spaced_taus: need 0 < tau_min < tau_max");
  if (points_per_decade < 1)
    throw ValidationError("log_spaced_taus: need at least one point per decade");
  const double decades = std::log10(tau_max / tau_min);
  const int n = std::max(2, static_cast<int>(std::lround(decades * points_per_decade)) + 1);
  std::vector<double> taus(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    taus[static_cast<std::size_t>(i)] =
        tau_min * std::pow(tau_max / tau_min, static_cast<double>(i) / (n - 1));
  return taus;
}

// Effective transfer rate under a periodic projective scoop of spacing tau,
// extracted from the protocol itself: per-event transfer probability / tau.
// Survivors restart from X, so every period is identical and the first scoop
// already measures the per-event probability; inverting a long run's survival
// instead would saturate once 1 - cf underflows.
inline std::vector<ZenoPoint> zeno_scan(const WellSystem& system,
                                        std::span<const double> taus) {
  system.validate();
  const double omega = rabi_angular_frequency(system.delta, system.epsilon);
  if (!(omega > 0.0))
    throw ValidationError("zeno_scan: system does not evolve");
  if (taus.empty())
    throw ValidationError("zeno_scan: need at least one tau");
  double prev = 0.0;
  for (const double tau : taus) {
    if (!(tau > 1e-12) || !std::isfinite(tau))
      throw ValidationError("zeno_scan: taus must be finite and above 1e-12");
    if (tau <= prev)
      throw ValidationError("zeno_scan: taus must be strictly increasing");
    prev = tau;
  }
  if (!(taus.front() < 1.0 / omega) || !(taus.back() > 1.0 / omega))
    throw ValidationError("zeno_scan: taus must span both sides of 1/Omega");

  std::vector<ZenoPoint> points;
  points.reserve(taus.size());
  MeasurementProtocol protocol;
  protocol.timing = TimingKind::periodic;
  protocol.n_events = 1;
  protocol.mode = ProtocolMode::scoop;
  for (const double tau : taus) {
    protocol.interval = tau;
    const KineticsTrace trace = run_protocol(system, protocol, make_ensemble(1), 0);
    points.push_back({tau, trace.back().captured_fraction / tau});
  }
  return points;
}

// ---- reversible vs absorbing decay ----

struct AlphaDecayComparison {
  KineticsTrace reversible;  // dephasing only: populations equilibrate
  KineticsTrace absorbing;   // capture channel: monotone transfer into C
};

inline AlphaDecayComparison alpha_decay_compare(const WellSystem& system,
                                                double gamma, double t_max,
                                                double dt = 0.0,
                                                int record_stride = 0) {
  system.validate();
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw ValidationError("alpha_decay_compare: gamma must be positive and finite");
  if (!(t_max > 0.0) || !std::isfinite(t_max))
    throw ValidationError("alpha_decay_compare: t_max must be positive and finite");

  const WellSystem closed{system.delta, system.epsilon, false};
  const WellSystem open{system.delta, system.epsilon, true};

  AlphaDecayComparison out;
  {
    const std::vector<LindbladChannel> channels{{ChannelKind::dephasing_y, gamma}};
    EvolutionConfig config;
    config.dt = dt > 0.0 ? dt : suggested_dt(closed, channels, t_max);
    config.t_max = t_max;
    const long steps = static_cast<long>(std::ceil(t_max / config.dt));
    config.record_stride = record_stride > 0 ? record_stride
                                             : static_cast<int>(std::max(1l, steps / 2000));
    out.reversible = evolve_lindblad(pure_state(Well::X, 2), closed, channels, config);
  }
  {
    const std::vector<LindbladChannel> channels{{ChannelKind::capture_y_to_c, gamma}};
    EvolutionConfig config;
    config.dt = dt > 0.0 ? dt : suggested_dt(open, channels, t_max);
    config.t_max = t_max;
    const long steps = static_cast<long>(std::ceil(t_max / config.dt));
    config.record_stride = record_stride > 0 ? record_stride
                                             : static_cast<int>(std::max(1l, steps / 2000));
    out.absorbing = evolve_lindblad(pure_state(Well::X, 3), open, channels, config);
  }
  return out;
}

}  // namespace dwell
