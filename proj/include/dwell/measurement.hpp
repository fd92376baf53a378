#pragma once

// Discrete measurement protocols on an ensemble of identical two-level
// tunnellers. Each event opens the near-empty well: a look records its
// occupancy, a scoop removes it into the capture count. After every opening
// the surviving sub-ensemble re-equilibrates from the populated well, so the
// recorded occupancy distribution is stationary under looking alone.

#include "dwell/core.hpp"
#include "dwell/dynamics.hpp"
#include "dwell/rng.hpp"
#include "dwell/trace.hpp"

#include <cstdint>
#include <thread>
#include <vector>

namespace dwell {

// ---- protocol ----

enum class TimingKind { periodic, poisson };
enum class ProtocolMode { look_only, scoop };

struct MeasurementProtocol {
  TimingKind timing = TimingKind::poisson;
  double interval = 0.0;         // periodic: fixed spacing between events
  double rate = 0.0;             // poisson: mean event rate
  std::int64_t n_events = 0;     // stop after this many events; 0 = no cap
  double t_max = 0.0;            // stop when the next event would pass this; 0 = no cap
  ProtocolMode mode = ProtocolMode::scoop;

  void validate() const {
    switch (timing) {
      case TimingKind::periodic:
        if (!(interval > 0.0) || !std::isfinite(interval))
          throw ValidationError("MeasurementProtocol: periodic timing needs a positive interval");
        break;
      case TimingKind::poisson:
        if (!(rate > 0.0) || !std::isfinite(rate))
          throw ValidationError("MeasurementProtocol: poisson timing needs a positive rate");
        break;
      default:
        throw ValidationError("MeasurementProtocol: unknown timing kind");
    }
    if (n_events < 0 || t_max < 0.0 || !std::isfinite(t_max))
      throw ValidationError("MeasurementProtocol: stop conditions must be nonnegative");
    if (n_events == 0 && t_max == 0.0)
      throw ValidationError("MeasurementProtocol: need n_events or t_max");
  }
};

// Inter-event waiting times, identical for the deterministic and Monte Carlo
// drivers with the same seed.
inline std::vector<double> event_intervals(const MeasurementProtocol& protocol,
                                           std::uint64_t seed) {
  protocol.validate();
  std::vector<double> intervals;
  double t = 0.0;
  for (std::int64_t k = 1;; ++k) {
    if (protocol.n_events > 0 && k > protocol.n_events) break;
    const double s =
        protocol.timing == TimingKind::periodic
            ? protocol.interval
            : rng::exponential(seed, rng::stream_timing,
                               static_cast<std::uint64_t>(k), 0, protocol.rate);
    if (protocol.t_max > 0.0 && t + s > protocol.t_max) break;
    intervals.push_back(s);
    t += s;
  }
  return intervals;
}

// ---- ensemble ----

// Expectation-valued bookkeeping of one run: the not-yet-captured
// sub-ensemble (trace-1 density matrix) plus the cumulative capture count.
// Monte Carlo runs keep `captured` integer-valued.
struct EnsembleState {
  std::int64_t n_particles = 0;
  DensityMatrix rho;
  double captured = 0.0;

  void validate() const {
    if (n_particles < 1)
      throw ValidationError("EnsembleState: need at least one particle");
    if (!(captured >= 0.0) || captured > static_cast<double>(n_particles) * (1.0 + 1e-12))
      throw ValidationError("EnsembleState: captured count outside [0, n_particles]");
    if (rho.rows() != 2 || rho.cols() != 2)
      throw ValidationError("EnsembleState: sub-ensemble state must be 2x2");
    if (hermiticity_residue(rho) >= 1e-10)
      throw ValidationError("EnsembleState: sub-ensemble state must be Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > 1e-9 || std::abs(rho.trace().imag()) > 1e-10)
      throw ValidationError("EnsembleState: sub-ensemble state must have unit trace");
  }
};

inline EnsembleState make_ensemble(std::int64_t n_particles) {
  EnsembleState state;
  state.n_particles = n_particles;
  state.rho = pure_state(Well::X, 2);
  state.captured = 0.0;
  state.validate();
  return state;
}

// ---- single-event operations ----

// Projective population readout: coherences between Y and the rest vanish,
// the diagonal is untouched. Idempotent.
template <typename Derived>
DensityMatrix projective_look(const Eigen::MatrixBase<Derived>& rho) {
  if (rho.rows() != rho.cols() || (rho.rows() != 2 && rho.rows() != 3))
    throw ValidationError("projective_look: density matrix must be 2x2 or 3x3");
  DensityMatrix out = rho.derived();
  const Eigen::Index y = well_index(Well::Y);
  for (Eigen::Index j = 0; j < out.rows(); ++j) {
    if (j == y) continue;
    out(y, j) = Complex(0.0, 0.0);
    out(j, y) = Complex(0.0, 0.0);
  }
  return out;
}

// Empty well Y into the capture count and restart the survivors from X.
inline EnsembleState scoop(const EnsembleState& state) {
  state.validate();
  const double p = population(state.rho, Well::Y);
  const double remaining = static_cast<double>(state.n_particles) - state.captured;
  EnsembleState out;
  out.n_particles = state.n_particles;
  out.captured = state.captured + remaining * p;
  out.rho = pure_state(Well::X, 2);
  return out;
}

// ---- protocol drivers ----

// Deterministic expectation dynamics. The seed only feeds poisson event
// times; periodic runs ignore it.
inline KineticsTrace run_protocol(const WellSystem& system,
                                  const MeasurementProtocol& protocol,
                                  const EnsembleState& initial,
                                  std::uint64_t seed) {
  system.validate();
  if (system.include_capture_state)
    throw ValidationError("run_protocol: protocols track capture as a count; use a 2-level system");
  initial.validate();
  const std::vector<double> intervals = event_intervals(protocol, seed);

  const double n = static_cast<double>(initial.n_particles);
  EnsembleState state = initial;

  KineticsTrace trace;
  trace.samples.reserve(intervals.size() + 1);
  trace.samples.push_back({0.0, population(state.rho, Well::X),
                           population(state.rho, Well::Y), state.captured / n, 0.0});

  double t = 0.0;
  for (const double s : intervals) {
    t += s;
    state.rho = evolve_unitary(state.rho, system, s);
    const double pop_x_pre = population(state.rho, Well::X);
    const double pop_y_pre = population(state.rho, Well::Y);
    double event_count = 0.0;
    if (protocol.mode == ProtocolMode::scoop) {
      const EnsembleState next = scoop(state);
      event_count = next.captured - state.captured;
      state = next;
    } else {
      event_count = n * pop_y_pre;
      state.rho = pure_state(Well::X, 2);
    }
    trace.samples.push_back({t, pop_x_pre, pop_y_pre, state.captured / n, event_count});
  }
  return trace;
}

inline KineticsTrace run_protocol(const WellSystem& system,
                                  const MeasurementProtocol& protocol,
                                  std::int64_t n_particles, std::uint64_t seed) {
  return run_protocol(system, protocol, make_ensemble(n_particles), seed);
}

namespace detail {

// Per-event outcome counts for a contiguous particle range. Every draw is
// keyed by (seed, particle, event), so chunk boundaries cannot change results.
inline void tally_particle_range(std::int64_t first, std::int64_t last,
                                 const std::vector<double>& probs,
                                 ProtocolMode mode, std::uint64_t seed,
                                 std::vector<std::int64_t>& counts) {
  const std::size_t n_events = probs.size();
  for (std::int64_t i = first; i < last; ++i) {
    for (std::size_t k = 0; k < n_events; ++k) {
      if (rng::bernoulli(seed, rng::stream_outcome, static_cast<std::uint64_t>(i),
                         static_cast<std::uint64_t>(k), probs[k])) {
        ++counts[k];
        if (mode == ProtocolMode::scoop) break;
      }
    }
  }
}

}  // namespace detail

// Monte Carlo trajectories: each particle's outcome at each event is an
// independent Bernoulli draw at the deterministic single-particle
// probability. Bit-identical for any n_threads.
inline KineticsTrace sample_trajectories(const WellSystem& system,
                                         const MeasurementProtocol& protocol,
                                         std::int64_t n_particles,
                                         std::uint64_t master_seed,
                                         int n_threads = 1) {
  system.validate();
  if (system.include_capture_state)
    throw ValidationError("sample_trajectories: protocols track capture as a count; use a 2-level system");
  if (n_particles < 1)
    throw ValidationError("sample_trajectories: need at least one particle");
  if (n_threads < 1)
    throw ValidationError("sample_trajectories: need at least one thread");
  const std::vector<double> intervals = event_intervals(protocol, master_seed);

  // Survivors restart from X after every event, so the per-event transfer
  // probability is a function of the waiting time alone.
  std::vector<double> probs(intervals.size());
  for (std::size_t k = 0; k < intervals.size(); ++k)
    probs[k] = rabi_transfer_probability(system.delta, system.epsilon, intervals[k]);

  std::vector<std::int64_t> counts(intervals.size(), 0);
  if (n_threads == 1) {
    detail::tally_particle_range(0, n_particles, probs, protocol.mode, master_seed, counts);
  } else {
    const std::int64_t chunk = (n_particles + n_threads - 1) / n_threads;
    std::vector<std::vector<std::int64_t>> partial(
        static_cast<std::size_t>(n_threads),
        std::vector<std::int64_t>(intervals.size(), 0));
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(n_threads));
    for (int w = 0; w < n_threads; ++w) {
      const std::int64_t first = std::min<std::int64_t>(w * chunk, n_particles);
      const std::int64_t last = std::min<std::int64_t>(first + chunk, n_particles);
      workers.emplace_back(detail::tally_particle_range, first, last, std::cref(probs),
                           protocol.mode, master_seed, std::ref(partial[static_cast<std::size_t>(w)]));
    }
    for (std::thread& w : workers) w.join();
    for (const std::vector<std::int64_t>& part : partial)
      for (std::size_t k = 0; k < counts.size(); ++k) counts[k] += part[k];
  }

  const double n = static_cast<double>(n_particles);
  KineticsTrace trace;
  trace.samples.reserve(intervals.size() + 1);
  trace.samples.push_back({0.0, 1.0, 0.0, 0.0, 0.0});
  double t = 0.0;
  double captured = 0.0;
  for (std::size_t k = 0; k < intervals.size(); ++k) {
    t += intervals[k];
    const double event_count = static_cast<double>(counts[k]);
    double observed_y = 0.0;
    if (protocol.mode == ProtocolMode::scoop) {
      const double remaining = n - captured;
      observed_y = remaining > 0.0 ? event_count / remaining : 0.0;
      captured += event_count;
    } else {
      observed_y = event_count / n;
    }
    trace.samples.push_back({t, 1.0 - observed_y, observed_y, captured / n, event_count});
  }
  return trace;
}

}  // namespace dwell
