#pragma once

// Core types for a biased two-level tunnelling system (wells X and Y) with an
// optional absorbing capture state C, plus the environment-induced
// decoherence-time estimate used to size measurement rates.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace dwell {

// ---- scalar and dense-matrix aliases ----

using Complex = std::complex<double>;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using ComplexMatrix = DenseMatrix<Complex>;
using DensityMatrix = ComplexMatrix;

// ---- error taxonomy ----

// Rejected inputs and configs.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Numerical integrity failures detected mid-run (trace drift, residues).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- basis ----

// Basis order is fixed: X (populated well), Y (near-empty well), C (absorbing
// capture state, 3-level embedding only).
enum class Well : int { X = 0, Y = 1, C = 2 };

constexpr Eigen::Index well_index(Well w) {
  return static_cast<Eigen::Index>(static_cast<int>(w));
}

// ---- system ----

struct WellSystem {
  double delta = 1.0;    // tunnelling amplitude between X and Y
  double epsilon = 0.0;  // energy bias of well Y relative to well X
  bool include_capture_state = false;

  Eigen::Index dim() const { return include_capture_state ? 3 : 2; }

  void validate() const {
    if (!std::isfinite(delta) || !std::isfinite(epsilon))
      throw ValidationError("WellSystem: delta and epsilon must be finite");
    if (delta < 0.0)
      throw ValidationError("WellSystem: delta must be nonnegative");
  }
};

// ---- closed-form tunnelling kinematics ----

inline double rabi_angular_frequency(double delta, double epsilon) {
  return std::hypot(delta, epsilon);
}

// Probability of finding the particle in the opposite well a time t after
// starting in one of them: delta^2/(delta^2+epsilon^2) * sin^2(Omega t / 2).
inline double rabi_transfer_probability(double delta, double epsilon, double t) {
  const double omega_sq = delta * delta + epsilon * epsilon;
  if (omega_sq == 0.0) return 0.0;
  const double s = std::sin(0.5 * std::sqrt(omega_sq) * t);
  return (delta * delta / omega_sq) * s * s;
}

// Time average of the transfer probability over a full oscillation.
inline double rabi_mean_transfer(double delta, double epsilon) {
  const double omega_sq = delta * delta + epsilon * epsilon;
  if (omega_sq == 0.0) return 0.0;
  return 0.5 * delta * delta / omega_sq;
}

// ---- Hamiltonian and states ----

// H = [[0, -delta/2], [-delta/2, epsilon]] on the X-Y block; the capture row
// and column stay zero so C is inert under coherent evolution.
inline ComplexMatrix build_hamiltonian(const WellSystem& system) {
  system.validate();
  const Eigen::Index n = system.dim();
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  h(0, 1) = h(1, 0) = Complex(-0.5 * system.delta, 0.0);
  h(1, 1) = Complex(system.epsilon, 0.0);
  return h;
}

// Projector |w><w| as a density matrix of dimension dim.
inline DensityMatrix pure_state(Well w, Eigen::Index dim) {
  if (dim != 2 && dim != 3)
    throw ValidationError("pure_state: dim must be 2 or 3");
  const Eigen::Index i = well_index(w);
  if (i >= dim)
    throw ValidationError("pure_state: label out of range for this dimension");
  DensityMatrix rho = DensityMatrix::Zero(dim, dim);
  rho(i, i) = Complex(1.0, 0.0);
  return rho;
}

// Diagonal occupation of a well, clamped to [0, 1]. An imaginary residue on
// the diagonal means the integrator corrupted the state.
template <typename Derived>
double population(const Eigen::MatrixBase<Derived>& rho, Well w) {
  const Eigen::Index i = well_index(w);
  if (rho.rows() != rho.cols())
    throw ValidationError("population: density matrix must be square");
  if (i >= rho.rows())
    throw ValidationError("population: label out of range for this dimension");
  const Complex d = rho(i, i);
  if (std::abs(d.imag()) >= 1e-10)
    throw NumericalError("population: imaginary residue on the diagonal");
  return std::min(1.0, std::max(0.0, d.real()));
}

// ---- density-matrix integrity ----

template <typename Derived>
double hermiticity_residue(const Eigen::MatrixBase<Derived>& rho) {
  return (rho.derived() - rho.derived().adjoint()).cwiseAbs().maxCoeff();
}

template <typename Derived>
double min_eigenvalue(const Eigen::MatrixBase<Derived>& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho.derived(),
                                                      Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

// Hermitian within 1e-10, eigenvalues above -1e-10, trace within [0, 1+1e-9].
template <typename Derived>
void validate_density_matrix(const Eigen::MatrixBase<Derived>& rho,
                             const std::string& context) {
  if (rho.rows() != rho.cols() || (rho.rows() != 2 && rho.rows() != 3))
    throw ValidationError(context + ": density matrix must be 2x2 or 3x3");
  if (hermiticity_residue(rho) >= 1e-10)
    throw NumericalError(context + ": density matrix is not Hermitian");
  const Complex tr = rho.trace();
  if (std::abs(tr.imag()) >= 1e-10 || tr.real() < -1e-9 || tr.real() > 1.0 + 1e-9)
    throw NumericalError(context + ": trace outside [0, 1]");
  if (min_eigenvalue(rho) < -1e-10)
    throw NumericalError(context + ": negative eigenvalue beyond tolerance");
}

// ---- environment-induced decoherence-time estimate ----

constexpr double hbar = 1.054571817e-34;      // J s
constexpr double k_boltzmann = 1.380649e-23;  // J / K

// All SI.
struct ZurekInputs {
  double mass = 0.0;             // kg
  double temperature = 0.0;      // K
  double displacement = 0.0;     // m, separation probed by the environment
  double relaxation_time = 0.0;  // s, thermal relaxation time

  void validate() const {
    if (!(mass > 0.0) || !(temperature > 0.0) || !(displacement > 0.0) ||
        !(relaxation_time > 0.0))
      throw ValidationError("ZurekInputs: all four inputs must be positive");
    if (!std::isfinite(mass) || !std::isfinite(temperature) ||
        !std::isfinite(displacement) || !std::isfinite(relaxation_time))
      throw ValidationError("ZurekInputs: inputs must be finite");
  }
};

inline double thermal_de_broglie_length(double mass, double temperature) {
  if (!(mass > 0.0) || !(temperature > 0.0))
    throw ValidationError("thermal_de_broglie_length: mass and temperature must be positive");
  return hbar / std::sqrt(2.0 * mass * k_boltzmann * temperature);
}

// tau_D = tau_R * (lambda_dB / dx)^2, the relaxation time scaled by the
// squared ratio of the thermal de Broglie length to the probed displacement.
inline double zurek_decoherence_time(const ZurekInputs& in) {
  in.validate();
  const double ratio =
      thermal_de_broglie_length(in.mass, in.temperature) / in.displacement;
  return in.relaxation_time * ratio * ratio;
}

}  // namespace dwell
