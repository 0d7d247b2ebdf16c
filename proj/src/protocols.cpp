#include "uscmem/protocols.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "uscmem/errors.hpp"

namespace uscmem {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double theta) {
  double w = std::fmod(theta, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  return w;
}

// Kronecker product of two cell vectors, cell 1 slowest.
ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

void require_two_cell(const StateVector& psi, const char* who) {
  if (psi.dims.n_cells() != 2) throw ValidationError(std::string(who) + ": two-cell state expected");
}

}  // namespace

TwoModeState::TwoModeState(int n, ComplexVector amps) : n_fock(n), amplitudes(std::move(amps)) {
  if (n_fock < 2) throw ValidationError("two-mode state: n_fock must be >= 2");
  if (amplitudes.size() != static_cast<Eigen::Index>(n_fock) * n_fock) {
    throw ValidationError("two-mode state: expected n_fock^2 amplitudes");
  }
}

TwoModeState TwoModeState::fock(int n_fock, int n_a, int n_b) {
  if (n_a < 0 || n_b < 0 || n_a >= n_fock || n_b >= n_fock) {
    throw ValidationError("two-mode Fock label outside the truncated space");
  }
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(n_fock) * n_fock);
  v(n_a * n_fock + n_b) = 1.0;
  return {n_fock, std::move(v)};
}

TwoModeState beam_splitter(const TwoModeState& state, double transmissivity, double phase) {
  if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
    throw ValidationError("beam_splitter: transmissivity must lie in [0, 1]");
  }
  if (std::abs(state.amplitudes.norm() - 1.0) > 1e-9) {
    throw ValidationError("beam_splitter: input is not normalized");
  }
  const int nf = state.n_fock;
  for (int na = 0; na < nf; ++na) {
    for (int nb = 0; nb < nf; ++nb) {
      if (na + nb >= nf - 1 && state.amplitude(na, nb) != Complex(0.0)) {
        throw TruncationError("beam_splitter: input reaches total photon number " +
                              std::to_string(na + nb) + " >= n_fock - 1 = " +
                              std::to_string(nf - 1));
      }
    }
  }

  ComplexMatrix lower = ComplexMatrix::Zero(nf, nf);
  for (int n = 1; n < nf; ++n) lower(n - 1, n) = std::sqrt(static_cast<double>(n));
  const ComplexMatrix id = ComplexMatrix::Identity(nf, nf);
  const ComplexMatrix a = tensor(lower, id);
  const ComplexMatrix b = tensor(id, lower);

  const double xi = std::acos(std::sqrt(transmissivity));
  const Complex e = std::polar(1.0, phase);
  // exp(G) with G anti-Hermitian equals exp(-i K) for the Hermitian K = i G.
  const ComplexMatrix generator = xi * (e * a.adjoint() * b - std::conj(e) * a * b.adjoint());
  const ComplexMatrix k = Complex(0.0, 1.0) * generator;
  return {nf, expm_hermitian(k, 1.0) * state.amplitudes};
}

StateVector photons_to_qubits(const TwoModeState& photons, int cell_n_fock) {
  const HilbertDims dims(cell_n_fock, 2);
  const HilbertDims cell(cell_n_fock);
  ComplexVector v = ComplexVector::Zero(dims.total_dim());
  for (int na = 0; na < photons.n_fock; ++na) {
    for (int nb = 0; nb < photons.n_fock; ++nb) {
      const Complex amp = photons.amplitude(na, nb);
      if (amp == Complex(0.0)) continue;
      if (na > 1 || nb > 1) {
        throw ValidationError("photons_to_qubits: a mode holds more than one photon");
      }
      v(cell.index(na, 0) * dims.cell_dim() + cell.index(nb, 0)) = amp;
    }
  }
  return {dims, std::move(v)};
}

StateVector prepare_two_cell(const ModelParams& params) {
  params.validate();
  const int photon_levels = std::max(3, params.n_fock);
  const TwoModeState split = beam_splitter(TwoModeState::fock(photon_levels, 0, 1), 0.5);
  return photons_to_qubits(split, params.n_fock);
}

Trajectory propagate_two_cell(const ModelParams& cell1, const ModelParams& cell2,
                              const CouplingSchedule& schedule, const StateVector& psi0,
                              const PropagatorConfig& cfg) {
  schedule.validate();
  cfg.validate(schedule);
  if (cell1.n_fock != cell2.n_fock) throw ValidationError("two-cell run needs equal n_fock");
  const HilbertDims dims(cell1.n_fock, 2);
  if (!(psi0.dims == dims)) throw ValidationError("propagate_two_cell: psi0 dimension mismatch");
  if (std::abs(psi0.norm() - 1.0) > cfg.norm_tol) {
    throw ValidationError("propagate_two_cell: psi0 is not normalized");
  }

  const RabiTerms terms1(cell1);
  const RabiTerms terms2(cell2);
  const ParitySectors sectors(parity_diagonal(cell1.dims()));
  const int steps = cfg.steps_for(schedule);
  const double h = schedule.total_time / steps;
  const Eigen::Index d = dims.cell_dim();

  Trajectory traj;
  ComplexVector psi = psi0.amplitudes;
  auto record = [&](double t) {
    traj.times.push_back(t);
    traj.couplings.push_back(coupling_at(schedule, t));
    traj.states.emplace_back(dims, psi);
  };
  record(0.0);
  for (int s = 0; s < steps; ++s) {
    const double omega = coupling_at(schedule, (s + 0.5) * h);
    const ComplexMatrix u1 = step_unitary(terms1.at(omega), h, sectors);
    const ComplexMatrix u2 = step_unitary(terms2.at(omega), h, sectors);
    // Column-major view: m(i2, i1) = psi[i1 * d + i2], so (U1 (x) U2) psi = U2 m U1^T.
    Eigen::Map<ComplexMatrix> m(psi.data(), d, d);
    m = (u2 * m * u1.transpose()).eval();
    const double drift = std::abs(psi.norm() - 1.0);
    if (drift > cfg.norm_tol) {
      throw NumericalError("propagate_two_cell: norm drift " + std::to_string(drift));
    }
    psi.normalize();
    if ((s + 1) % cfg.record_every == 0 || s + 1 == steps) {
      record(s + 1 == steps ? schedule.total_time : (s + 1) * h);
    }
  }
  return traj;
}

TwoCellSweep two_cell_storage(const StateVector& state, const ModelParams& params,
                              const CouplingSchedule& schedule, const PropagatorConfig& cfg) {
  require_two_cell(state, "two_cell_storage");
  TwoCellSweep out{propagate_two_cell(params, params, schedule, state, cfg), {}};
  for (const auto& psi : out.trajectory.states) out.fidelity.push_back(std::norm(state.overlap(psi)));
  return out;
}

LocalPhaseFit fit_local_phases(const std::array<Complex, 4>& s) {
  auto value = [&](double t1, double t2) {
    return std::norm(s[0] + std::polar(1.0, -t2) * s[1] + std::polar(1.0, -t1) * s[2] +
                     std::polar(1.0, -(t1 + t2)) * s[3]);
  };
  // Coarse grid seed, then exact coordinate ascent: for fixed theta2 the
  // objective is |A + e^{-i theta1} B|^2, maximized at arg B - arg A.
  constexpr int kSeed = 32;
  LocalPhaseFit best{value(0.0, 0.0), 0.0, 0.0};
  for (int i = 0; i < kSeed; ++i) {
    for (int j = 0; j < kSeed; ++j) {
      const double t1 = kTwoPi * i / kSeed;
      const double t2 = kTwoPi * j / kSeed;
      const double f = value(t1, t2);
      if (f > best.fidelity) best = {f, t1, t2};
    }
  }
  for (int iter = 0; iter < 200; ++iter) {
    const double before = best.fidelity;
    {
      const Complex a = s[0] + std::polar(1.0, -best.theta2) * s[1];
      const Complex b = s[2] + std::polar(1.0, -best.theta2) * s[3];
      if (std::abs(a) > 0.0 && std::abs(b) > 0.0) best.theta1 = wrap_angle(std::arg(b) - std::arg(a));
    }
    {
      const Complex a = s[0] + std::polar(1.0, -best.theta1) * s[2];
      const Complex b = s[1] + std::polar(1.0, -best.theta1) * s[3];
      if (std::abs(a) > 0.0 && std::abs(b) > 0.0) best.theta2 = wrap_angle(std::arg(b) - std::arg(a));
    }
    best.fidelity = value(best.theta1, best.theta2);
    if (best.fidelity - before <= 1e-15) break;
  }
  return best;
}

LocalPhaseFit parity_target_fidelity(const StateVector& psi, const StateVector& initial,
                                     const ModelParams& params, double coupling) {
  require_two_cell(psi, "parity_target_fidelity");
  require_two_cell(initial, "parity_target_fidelity");
  const HilbertDims cell = params.dims();
  const Spectrum levels = eigendecompose(build_rabi(params, coupling), 2, cell);
  const Eigen::Index d = cell.cell_dim();

  std::array<Complex, 4> s{};
  for (int q1 = 0; q1 < 2; ++q1) {
    for (int q2 = 0; q2 < 2; ++q2) {
      const Complex weight = initial.amplitudes(cell.index(q1, 0) * d + cell.index(q2, 0));
      if (weight == Complex(0.0)) continue;
      const ComplexVector target = kron(levels.states.col(q1), levels.states.col(q2));
      s[q1 * 2 + q2] = std::conj(weight) * target.dot(psi.amplitudes);
    }
  }
  return fit_local_phases(s);
}

LocalPhaseFit decoded_fidelity(const StateVector& psi, const StateVector& initial) {
  require_two_cell(psi, "decoded_fidelity");
  if (!(psi.dims == initial.dims)) throw ValidationError("decoded_fidelity: dimension mismatch");
  const HilbertDims cell(psi.dims.n_fock());
  const Eigen::Index d = cell.cell_dim();
  const Eigen::Index nf = cell.n_fock();
  std::array<Complex, 4> s{};
  for (Eigen::Index i1 = 0; i1 < d; ++i1) {
    for (Eigen::Index i2 = 0; i2 < d; ++i2) {
      const Eigen::Index idx = i1 * d + i2;
      s[(i1 / nf) * 2 + (i2 / nf)] += std::conj(initial.amplitudes(idx)) * psi.amplitudes(idx);
    }
  }
  return fit_local_phases(s);
}

TwoCellRoundTrip two_cell_round_trip(const ModelParams& params, double total_time, int steps,
                                     int record_every, double omega_start,
                                     const double* fixed_theta) {
  const CouplingSchedule store = CouplingSchedule::storage(params, total_time, omega_start);
  const CouplingSchedule retrieve = store.reversed();
  const PropagatorConfig cfg = PropagatorConfig::for_schedule(store, steps, record_every);
  const StateVector initial = prepare_two_cell(params);

  TwoCellRoundTrip out;
  out.storage = two_cell_storage(initial, params, store, cfg);
  out.stored_target = parity_target_fidelity(out.storage.trajectory.final_state(), initial, params,
                                             store.omega_end);

  out.retrieval.trajectory =
      propagate_two_cell(params, params, retrieve, out.storage.trajectory.final_state(), cfg);
  for (auto& t : out.retrieval.trajectory.times) t += total_time;
  if (fixed_theta != nullptr) {
    out.decoded.theta1 = *fixed_theta;
    out.decoded.theta2 = *fixed_theta;
  } else {
    out.decoded = decoded_fidelity(out.retrieval.trajectory.final_state(), initial);
  }

  const HilbertDims cell = params.dims();
  const Eigen::Index d = cell.cell_dim();
  for (const auto& psi : out.retrieval.trajectory.states) {
    ComplexVector corrected = psi.amplitudes;
    for (Eigen::Index i1 = 0; i1 < d; ++i1) {
      for (Eigen::Index i2 = 0; i2 < d; ++i2) {
        const double phase = (i1 >= cell.n_fock() ? out.decoded.theta1 : 0.0) +
                             (i2 >= cell.n_fock() ? out.decoded.theta2 : 0.0);
        corrected(i1 * d + i2) *= std::polar(1.0, -phase);
      }
    }
    out.retrieval.fidelity.push_back(std::norm(initial.amplitudes.dot(corrected)));
  }
  out.decoded.fidelity = out.retrieval.fidelity.back();
  return out;
}

double entanglement_entropy(const StateVector& two_cell) {
  require_two_cell(two_cell, "entanglement_entropy");
  const Eigen::Index d = two_cell.dims.cell_dim();
  const Eigen::Map<const ComplexMatrix> m(two_cell.amplitudes.data(), d, d);  // m(i2, i1)
  const ComplexMatrix rho1 = m.transpose() * m.conjugate();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho1, Eigen::EigenvaluesOnly);
  double entropy = 0.0;
  for (double p : solver.eigenvalues()) {
    if (p > 1e-300) entropy -= p * std::log2(p);
  }
  return entropy;
}

double joint_parity(const StateVector& two_cell) {
  require_two_cell(two_cell, "joint_parity");
  return (two_cell.amplitudes.cwiseAbs2().array() * parity_diagonal(two_cell.dims).array()).sum();
}

}  // namespace uscmem
