#pragma once

// Two-mode beam splitter, photon-to-qubit state preparation, and storage of an
// entangled state in two independent memory cells.

#include <array>
#include <vector>

#include "uscmem/closed_dynamics.hpp"

namespace uscmem {

/// State of two bosonic modes a, b truncated at n_fock levels each;
/// index n_a * n_fock + n_b (mode a slowest).
struct TwoModeState {
  int n_fock;
  ComplexVector amplitudes;

  TwoModeState(int n_fock, ComplexVector amps);
  static TwoModeState fock(int n_fock, int n_a, int n_b);
  Complex amplitude(int n_a, int n_b) const { return amplitudes(n_a * n_fock + n_b); }
};

/// exp[xi (e^{i phase} a^dagger b - e^{-i phase} a b^dagger)] with
/// cos^2(xi) = transmissivity. With phase 0, |0,1> -> cos xi |0,1> + sin xi |1,0>.
/// Throws TruncationError when the input has weight on total photon number
/// >= n_fock - 1, where the truncated generator stops conserving it.
TwoModeState beam_splitter(const TwoModeState& state, double transmissivity, double phase = 0.0);

/// Maps each mode's |0>/|1> onto the |g>/|e> qubit of its own cell with the
/// resonators in vacuum (mode a -> cell 1). Components with more than one
/// photon in a mode are rejected.
StateVector photons_to_qubits(const TwoModeState& photons, int cell_n_fock);

/// (|ge> + |eg>) / sqrt(2) (x) |00>: a single photon split 50:50 and absorbed
/// by the two qubits.
StateVector prepare_two_cell(const ModelParams& params);

/// Joint evolution under H1 (x) I + I (x) H2, both cells driven by `schedule`.
/// The midpoint step is applied as U1 (x) U2 on the full joint state.
Trajectory propagate_two_cell(const ModelParams& cell1, const ModelParams& cell2,
                              const CouplingSchedule& schedule, const StateVector& psi0,
                              const PropagatorConfig& cfg);

struct TwoCellSweep {
  Trajectory trajectory;
  /// |<Psi_0|psi(t)>|^2 against the sweep's initial state.
  std::vector<double> fidelity;
};

TwoCellSweep two_cell_storage(const StateVector& state, const ModelParams& params,
                              const CouplingSchedule& schedule, const PropagatorConfig& cfg);

/// Per-cell phases maximizing |sum_{q1,q2} e^{-i(q1 theta1 + q2 theta2)} S_{q1 q2}|^2,
/// where q = 1 marks the excited branch of a cell.
struct LocalPhaseFit {
  double fidelity = 0.0;
  double theta1 = 0.0;
  double theta2 = 0.0;
};

/// S is indexed q1 * 2 + q2.
LocalPhaseFit fit_local_phases(const std::array<Complex, 4>& branch_overlaps);

/// Fidelity with the parity-protected image of `initial`: each cell's
/// |g,0> / |e,0> replaced by its instantaneous |psi_G> / |psi_E> at `coupling`,
/// excited branches carrying the fitted phases.
LocalPhaseFit parity_target_fidelity(const StateVector& psi, const StateVector& initial,
                                     const ModelParams& params, double coupling);

/// |<initial| C1(theta1) (x) C2(theta2) |psi>|^2 maximized over the phases.
LocalPhaseFit decoded_fidelity(const StateVector& psi, const StateVector& initial);

struct TwoCellRoundTrip {
  TwoCellSweep storage;
  TwoCellSweep retrieval;       ///< times offset by T; fidelity includes the decode phases
  LocalPhaseFit stored_target;  ///< against the parity-protected target at Omega_0
  LocalPhaseFit decoded;        ///< after retrieval
};

/// When `fixed_theta` is non-null both cells use that decode phase instead of
/// the fitted ones.
TwoCellRoundTrip two_cell_round_trip(const ModelParams& params, double total_time,
                                     int steps = kDefaultSweepSteps, int record_every = 1,
                                     double omega_start = 0.0,
                                     const double* fixed_theta = nullptr);

/// Von Neumann entropy (bits) of cell 1's reduced state.
double entanglement_entropy(const StateVector& two_cell);

/// <P (x) P>.
double joint_parity(const StateVector& two_cell);

}  // namespace uscmem
