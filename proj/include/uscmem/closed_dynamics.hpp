#pragma once

// Pure-state propagation under the swept Rabi Hamiltonian, storage/retrieval
// fidelity curves, and the relative-phase landscape.

#include <numbers>
#include <vector>

#include "uscmem/linalg.hpp"
#include "uscmem/rabi.hpp"
#include "uscmem/spectral.hpp"

namespace uscmem {

inline constexpr int kDefaultSweepSteps = 2000;

/// Piecewise-exponential midpoint stepping:
///     psi(t + dt) = exp(-i H(t + dt/2) dt) psi(t).
/// The step count is ceil(T / dt); the step actually taken is T / count, so
/// every sweep ends exactly at T.
struct PropagatorConfig {
  double dt = 105.0 / kDefaultSweepSteps;
  double norm_tol = 1e-9;
  int record_every = 1;

  static PropagatorConfig for_schedule(const CouplingSchedule& schedule,
                                       int steps = kDefaultSweepSteps, int record_every = 1);
  /// Also enforces dt <= T / 500 against `schedule`.
  void validate(const CouplingSchedule& schedule) const;
  int steps_for(const CouplingSchedule& schedule) const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<double> couplings;
  std::vector<StateVector> states;

  const StateVector& final_state() const { return states.back(); }
};

/// One midpoint step operator exp(-i h dt). Blocks that do not mix the two
/// parity sectors are exponentiated sector by sector.
ComplexMatrix step_unitary(const ComplexMatrix& h, double dt, const ParitySectors& sectors);

/// Samples at t = 0, every `record_every` steps, and always at t = T.
/// Throws NumericalError if the norm drifts by more than norm_tol in a step.
Trajectory propagate(const ModelParams& params, const CouplingSchedule& schedule,
                     const StateVector& psi0, const PropagatorConfig& cfg);

/// Logical input alpha_F |0_F> + beta_F |1_F> of a flying qubit.
struct QubitAmplitudes {
  Complex alpha{std::numbers::sqrt2 / 2.0, 0.0};
  Complex beta{std::numbers::sqrt2 / 2.0, 0.0};

  /// |alpha|^2 + |beta|^2 must equal 1 within 1e-9.
  void validate() const;
};

/// psi_s = alpha_F |g,0> + beta_F |e,0> after the photon has been absorbed.
StateVector encode_input(const HilbertDims& dims, const QubitAmplitudes& input);

/// Multiplies every qubit-excited amplitude by exp(-i theta).
StateVector apply_phase_correction(const StateVector& psi, double theta);

/// |<psi_s| C(theta) psi>|^2 with C(theta) from apply_phase_correction.
double corrected_fidelity(const StateVector& psi, const QubitAmplitudes& input, double theta);

/// theta in [0, 2 pi) maximizing corrected_fidelity (closed form); 0 when one
/// of the input amplitudes vanishes.
double optimal_phase(const StateVector& psi, const QubitAmplitudes& input);

struct SweepResult {
  Trajectory trajectory;
  /// F_s(t_i) for each recorded sample.
  std::vector<double> fidelity;
  /// Phase correction applied in `fidelity` (0 for storage).
  double theta = 0.0;

  double final_fidelity() const { return fidelity.back(); }
};

/// Encodes the input at Omega(0) and sweeps; F_s(t) = |<psi_s|psi(t)>|^2
/// against the fixed initial state.
SweepResult storage_run(const ModelParams& params, const QubitAmplitudes& input,
                        const CouplingSchedule& schedule, const PropagatorConfig& cfg);

/// Sweeps `stored` down and reports |<psi_s| C(theta) psi(t)>|^2.
SweepResult retrieval_run(const ModelParams& params, const StateVector& stored,
                          const QubitAmplitudes& input, const CouplingSchedule& schedule,
                          const PropagatorConfig& cfg, double theta_correction);

struct RoundTripResult {
  SweepResult storage;
  SweepResult retrieval;  ///< times offset by T so the curve runs over [T, 2T]
  double theta_opt = 0.0;
  double final_fidelity = 0.0;
};

/// Storage 0 -> Omega_0 then retrieval Omega_0 -> 0 over T each, with the
/// decode phase optimized on the final state.
RoundTripResult round_trip(const ModelParams& params, const QubitAmplitudes& input,
                           double total_time, int steps = kDefaultSweepSteps,
                           int record_every = 1, double omega_start = 0.0);

/// Fidelity |<psi~(theta, t_i)|psi(t_i)>|^2 with
/// psi~ = alpha_F |psi_G(t_i)> + beta_F e^{i theta} |psi_E(t_i)>, built from
/// gauge-tracked instantaneous eigenstates.
struct PhaseLandscape {
  std::vector<double> times;
  std::vector<double> coupling_grid;
  std::vector<double> theta_grid;             ///< 2 pi j / theta_points
  std::vector<std::vector<double>> fidelity;  ///< [sample][theta]
  std::vector<double> theta_opt;              ///< grid argmax per sample
  std::vector<double> max_fidelity;           ///< row maxima
};

PhaseLandscape phase_landscape(const ModelParams& params, const QubitAmplitudes& input,
                               const CouplingSchedule& schedule, const PropagatorConfig& cfg,
                               int theta_points);

struct EvolutionTimeScan {
  std::vector<double> total_times;
  std::vector<double> fidelity;   ///< round-trip F_s with per-T optimized theta
  std::vector<double> theta_opt;
  double best_time = 0.0;
  double best_fidelity = 0.0;
};

EvolutionTimeScan optimal_evolution_time(const ModelParams& params, const QubitAmplitudes& input,
                                         const std::vector<double>& total_times,
                                         int steps = kDefaultSweepSteps, double omega_start = 0.0);

/// Seconds for a dimensionless time T (units 1 / omega_cav) given the cavity's
/// ordinary frequency f_cav in Hz: T / (2 pi f_cav).
double physical_time(double total_time, double f_cav_hz);

}  // namespace uscmem
