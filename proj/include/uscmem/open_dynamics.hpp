#pragma once

// Dressed-basis master equation for the swept Rabi model.
//
// Zero-temperature secular Lindblad form. For every pair of dressed levels
// E_k > E_j among the lowest k_levels and every channel s in
// {sigma_x, sigma_y, sigma_z, a + a^dagger} there is a jump |j><k| with rate
//     gamma = Gamma_s * J(E_k - E_j) * |<j|s|k>|^2,
// where J is the bath spectral density (flat by default). With a swept
// coupling the jump table is rebuilt from the instantaneous Hamiltonian every
// `refresh_every` steps.

#include <functional>
#include <string>
#include <vector>

#include "uscmem/closed_dynamics.hpp"

namespace uscmem {

struct NoiseRates {
  double gamma_x = 0.0;
  double gamma_y = 0.0;
  double gamma_z = 0.0;
  double gamma_r = 0.0;

  /// Gamma_x = Gamma_y = Gamma_z = 1e-3 omega_eg, Gamma_r = 1e-4 omega_eg.
  static NoiseRates reference(double omega_eg);
  void validate() const;
  bool all_zero() const { return gamma_x == 0 && gamma_y == 0 && gamma_z == 0 && gamma_r == 0; }
};

enum class NoiseChannel { SigmaX, SigmaY, SigmaZ, Resonator };

const char* channel_name(NoiseChannel c);

/// Bath spectral density J(gap) multiplying every rate.
using SpectralDensity = std::function<double(double gap)>;

SpectralDensity flat_density();
/// J(gap) = gap / reference_gap.
SpectralDensity ohmic_density(double reference_gap);

struct DressedJump {
  Eigen::Index lower;  ///< j
  Eigen::Index upper;  ///< k
  NoiseChannel channel;
  double rate;
};

struct DissipatorTable {
  RealVector energies;       ///< lowest k_levels dressed energies
  ComplexMatrix basis;       ///< dim x k_levels, dressed eigenvectors as columns
  std::vector<DressedJump> jumps;

  /// |j><k| in the bare basis.
  ComplexMatrix jump_operator(std::size_t i) const;
  /// Sum of rates out of each dressed level.
  RealVector decay_totals() const;
};

/// Rates below 1e-14 are dropped.
DissipatorTable dressed_dissipators(const ComplexMatrix& h, const NoiseRates& rates,
                                    Eigen::Index k_levels,
                                    const SpectralDensity& density = flat_density());

struct DensityMatrix {
  HilbertDims dims;
  ComplexMatrix entries;

  DensityMatrix(HilbertDims d, ComplexMatrix rho);
  static DensityMatrix pure(const StateVector& psi);
  static DensityMatrix maximally_mixed(const HilbertDims& dims);

  Complex trace() const { return entries.trace(); }
  double min_eigenvalue() const;
  /// Throws NumericalError unless Hermitian within 1e-10, unit trace within
  /// 1e-8 and minimum eigenvalue >= -1e-8.
  void validate() const;
};

struct MasterConfig {
  PropagatorConfig propagator;
  Eigen::Index k_levels = 12;
  int refresh_every = 20;
  SpectralDensity density = flat_density();
};

struct MasterTrajectory {
  std::vector<double> times;
  std::vector<double> couplings;
  std::vector<DensityMatrix> states;

  const DensityMatrix& final_state() const { return states.back(); }
};

/// Strang splitting per step: half dissipator, midpoint unitary conjugation,
/// half dissipator. Throws NumericalError when a recorded state has an
/// eigenvalue below -1e-6 or its trace drifts by more than 1e-8.
MasterTrajectory evolve_master(const ModelParams& params, const CouplingSchedule& schedule,
                               const DensityMatrix& rho0, const NoiseRates& rates,
                               const MasterConfig& cfg);

/// <psi|rho|psi>.
double fidelity_mixed(const DensityMatrix& rho, const StateVector& psi);

/// <psi_s| C(theta) rho C(theta)^dagger |psi_s>, maximized over theta in
/// closed form. Returns {fidelity, theta}.
std::pair<double, double> best_corrected_fidelity(const DensityMatrix& rho,
                                                  const QubitAmplitudes& input);

struct NoisyRoundTrip {
  MasterTrajectory storage;
  MasterTrajectory retrieval;          ///< times offset by T
  std::vector<double> storage_fidelity;   ///< <psi_s|rho|psi_s>
  std::vector<double> retrieval_fidelity; ///< with the optimized theta
  double theta_opt = 0.0;
  double final_fidelity = 0.0;
};

NoisyRoundTrip noisy_round_trip(const ModelParams& params, const QubitAmplitudes& input,
                                double total_time, const NoiseRates& rates, MasterConfig cfg,
                                int steps = kDefaultSweepSteps, double omega_start = 0.0);

}  // namespace uscmem
