#pragma once

// Open-system evolution: closed-form unitary propagation of the tunnelling
// block, and fixed-step RK4 integration of the Lindblad master equation
//   drho/dt = -i[H, rho] + sum_k rate_k (L rho L^+ - 1/2 {L^+L, rho}).

#include "dwell/core.hpp"
#include "dwell/trace.hpp"

#include <cmath>
#include <span>
#include <utility>
#include <vector>

namespace dwell {

// ---- channels ----

enum class ChannelKind {
  dephasing_y,     // L = |Y><Y|, erases X-Y coherence, keeps populations
  capture_y_to_c,  // L = |C><Y|, drains Y into the absorbing state
};

struct LindbladChannel {
  ChannelKind kind = ChannelKind::dephasing_y;
  double rate = 0.0;

  void validate() const {
    if (!std::isfinite(rate) || rate < 0.0)
      throw ValidationError("LindbladChannel: rate must be finite and nonnegative");
  }
};

inline ComplexMatrix collapse_operator(ChannelKind kind, Eigen::Index dim) {
  if (dim != 2 && dim != 3)
    throw ValidationError("collapse_operator: dim must be 2 or 3");
  ComplexMatrix op = ComplexMatrix::Zero(dim, dim);
  switch (kind) {
    case ChannelKind::dephasing_y:
      op(1, 1) = Complex(1.0, 0.0);
      return op;
    case ChannelKind::capture_y_to_c:
      if (dim != 3)
        throw ValidationError("collapse_operator: capture requires the 3-level embedding");
      op(2, 1) = Complex(1.0, 0.0);
      return op;
  }
  throw ValidationError("collapse_operator: unknown channel kind");
}

// Rate, collapse operator and L^+L, cached for the integrator loop.
struct PreparedChannel {
  double rate = 0.0;
  ComplexMatrix op;
  ComplexMatrix op_sq;
};

inline std::vector<PreparedChannel> prepare_channels(
    std::span<const LindbladChannel> channels, Eigen::Index dim) {
  std::vector<PreparedChannel> out;
  out.reserve(channels.size());
  for (const LindbladChannel& c : channels) {
    c.validate();
    ComplexMatrix op = collapse_operator(c.kind, dim);
    ComplexMatrix op_sq = op.adjoint() * op;
    out.push_back({c.rate, std::move(op), std::move(op_sq)});
  }
  return out;
}

inline ComplexMatrix lindblad_rhs(const DensityMatrix& rho, const ComplexMatrix& h,
                                  std::span<const PreparedChannel> channels) {
  if (rho.rows() != rho.cols() || h.rows() != rho.rows() || h.cols() != rho.cols())
    throw ValidationError("lindblad_rhs: dimension mismatch between rho and H");
  const Complex minus_i(0.0, -1.0);
  ComplexMatrix out = minus_i * (h * rho - rho * h);
  for (const PreparedChannel& c : channels) {
    if (c.op.rows() != rho.rows())
      throw ValidationError("lindblad_rhs: dimension mismatch in channel operator");
    out.noalias() += c.rate * (c.op * rho * c.op.adjoint());
    out.noalias() -= (0.5 * c.rate) * (c.op_sq * rho + rho * c.op_sq);
  }
  return out;
}

inline ComplexMatrix lindblad_rhs(const DensityMatrix& rho, const ComplexMatrix& h,
                                  std::span<const LindbladChannel> channels) {
  const std::vector<PreparedChannel> prepared = prepare_channels(channels, rho.rows());
  return lindblad_rhs(rho, h, std::span<const PreparedChannel>(prepared));
}

// ---- unitary propagation ----

// exp(-i H t) in closed form: the X-Y block is a Pauli rotation, the capture
// row stays inert.
inline ComplexMatrix tunnelling_propagator(const WellSystem& system, double t) {
  system.validate();
  if (!std::isfinite(t))
    throw ValidationError("tunnelling_propagator: t must be finite");
  const Eigen::Index n = system.dim();
  ComplexMatrix u = ComplexMatrix::Identity(n, n);
  const double omega = rabi_angular_frequency(system.delta, system.epsilon);
  if (omega == 0.0) return u;
  const double half = 0.5 * omega * t;
  const double c = std::cos(half);
  const double s = std::sin(half);
  const Complex phase = std::exp(Complex(0.0, -0.5 * system.epsilon * t));
  const double dn = system.delta / omega;
  const double en = system.epsilon / omega;
  u(0, 0) = phase * Complex(c, s * en);
  u(0, 1) = phase * Complex(0.0, s * dn);
  u(1, 0) = u(0, 1);
  u(1, 1) = phase * Complex(c, -s * en);
  return u;
}

inline DensityMatrix evolve_unitary(const DensityMatrix& rho,
                                    const WellSystem& system, double t) {
  const ComplexMatrix u = tunnelling_propagator(system, t);
  if (rho.rows() != u.rows() || rho.cols() != u.cols())
    throw ValidationError("evolve_unitary: rho dimension does not match the system");
  return u * rho * u.adjoint();
}

// ---- fixed-step integration ----

struct EvolutionConfig {
  double dt = 0.0;
  double t_max = 0.0;
  int record_stride = 1;

  // dt must resolve both the fastest oscillation and the fastest decay.
  void validate(const WellSystem& system,
                std::span<const LindbladChannel> channels) const {
    if (!(dt > 0.0) || !std::isfinite(dt))
      throw ValidationError("EvolutionConfig: dt must be positive and finite");
    if (!(t_max > 0.0) || !std::isfinite(t_max))
      throw ValidationError("EvolutionConfig: t_max must be positive and finite");
    if (record_stride < 1)
      throw ValidationError("EvolutionConfig: record_stride must be at least 1");
    const double omega = rabi_angular_frequency(system.delta, system.epsilon);
    if (omega > 0.0 && dt > 0.01 / omega)
      throw ValidationError("EvolutionConfig: dt exceeds 0.01/Omega");
    double rate_max = 0.0;
    for (const LindbladChannel& c : channels) rate_max = std::max(rate_max, c.rate);
    if (rate_max > 0.0 && dt > 0.1 / rate_max)
      throw ValidationError("EvolutionConfig: dt exceeds 0.1/rate_max");
  }
};

// Largest dt satisfying the stability bounds, capped at t_max/1000 for
// resolution when the bounds are loose.
inline double suggested_dt(const WellSystem& system,
                           std::span<const LindbladChannel> channels,
                           double t_max) {
  double dt = t_max / 1000.0;
  const double omega = rabi_angular_frequency(system.delta, system.epsilon);
  if (omega > 0.0) dt = std::min(dt, 0.01 / omega);
  double rate_max = 0.0;
  for (const LindbladChannel& c : channels) rate_max = std::max(rate_max, c.rate);
  if (rate_max > 0.0) dt = std::min(dt, 0.1 / rate_max);
  return dt;
}

namespace detail {

// RK4 with a hard trace-conservation check; drift above 1e-6 aborts the run.
// The recorder sees (time, rho) at stride boundaries, including both ends.
template <typename Recorder>
void integrate_lindblad(const DensityMatrix& rho0, const WellSystem& system,
                        std::span<const LindbladChannel> channels,
                        const EvolutionConfig& config, Recorder&& record) {
  system.validate();
  config.validate(system, channels);
  const Eigen::Index n = system.dim();
  if (rho0.rows() != n || rho0.cols() != n)
    throw ValidationError("evolve_lindblad: rho dimension does not match the system");
  validate_density_matrix(rho0, "evolve_lindblad");

  const ComplexMatrix h = build_hamiltonian(system);
  const std::vector<PreparedChannel> prepared = prepare_channels(channels, n);
  const std::span<const PreparedChannel> ops(prepared);

  const long steps = static_cast<long>(std::ceil(config.t_max / config.dt - 1e-12));
  const double dt = config.t_max / static_cast<double>(steps);

  DensityMatrix rho = rho0;
  const double trace0 = rho0.trace().real();
  record(0.0, rho);

  for (long step = 1; step <= steps; ++step) {
    const ComplexMatrix k1 = lindblad_rhs(rho, h, ops);
    const ComplexMatrix k2 = lindblad_rhs(rho + (0.5 * dt) * k1, h, ops);
    const ComplexMatrix k3 = lindblad_rhs(rho + (0.5 * dt) * k2, h, ops);
    const ComplexMatrix k4 = lindblad_rhs(rho + dt * k3, h, ops);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    rho = (0.5 * (rho + rho.adjoint())).eval();

    if (std::abs(rho.trace().real() - trace0) > 1e-6)
      throw NumericalError("evolve_lindblad: trace drift exceeds 1e-6");
    if (step % config.record_stride == 0 || step == steps)
      record(static_cast<double>(step) * dt, rho);
  }
}

}  // namespace detail

inline KineticsTrace evolve_lindblad(const DensityMatrix& rho0,
                                     const WellSystem& system,
                                     std::span<const LindbladChannel> channels,
                                     const EvolutionConfig& config) {
  const Eigen::Index n = system.dim();
  KineticsTrace trace;
  detail::integrate_lindblad(rho0, system, channels, config,
                             [&](double t, const DensityMatrix& rho) {
                               TraceSample s;
                               s.time = t;
                               s.pop_x = population(rho, Well::X);
                               s.pop_y = population(rho, Well::Y);
                               s.captured_fraction =
                                   (n == 3) ? population(rho, Well::C) : 0.0;
                               trace.samples.push_back(s);
                             });
  return trace;
}

// Snapshot variant for integrity checks on the recorded states themselves.
inline std::vector<std::pair<double, DensityMatrix>> evolve_lindblad_states(
    const DensityMatrix& rho0, const WellSystem& system,
    std::span<const LindbladChannel> channels, const EvolutionConfig& config) {
  std::vector<std::pair<double, DensityMatrix>> out;
  detail::integrate_lindblad(rho0, system, channels, config,
                             [&](double t, const DensityMatrix& rho) {
                               out.emplace_back(t, rho);
                             });
  return out;
}

}  // namespace dwell
