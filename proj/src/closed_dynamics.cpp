#include "uscmem/closed_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "uscmem/errors.hpp"

namespace uscmem {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMinStepsPerSweep = 500.0;

double wrap_angle(double theta) {
  double w = std::fmod(theta, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  return w;
}

}  // namespace

PropagatorConfig PropagatorConfig::for_schedule(const CouplingSchedule& schedule, int steps,
                                                int record_every) {
  if (steps < 1) throw ValidationError("step count must be >= 1");
  schedule.validate();
  PropagatorConfig cfg;
  cfg.dt = schedule.total_time / steps;
  cfg.record_every = record_every;
  return cfg;
}

void PropagatorConfig::validate(const CouplingSchedule& schedule) const {
  if (!(dt > 0.0)) throw ValidationError("dt must be > 0");
  if (!(norm_tol > 0.0)) throw ValidationError("norm_tol must be > 0");
  if (record_every < 1) throw ValidationError("record_every must be >= 1");
  // Relative slack so that dt = T / 500 computed in floating point passes.
  if (dt > schedule.total_time / kMinStepsPerSweep * (1.0 + 1e-12)) {
    throw ValidationError("dt = " + std::to_string(dt) + " exceeds T/500 = " +
                          std::to_string(schedule.total_time / kMinStepsPerSweep));
  }
}

int PropagatorConfig::steps_for(const CouplingSchedule& schedule) const {
  return static_cast<int>(std::ceil(schedule.total_time / dt - 1e-9));
}

ComplexMatrix step_unitary(const ComplexMatrix& h, double dt, const ParitySectors& sectors) {
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if (sectors.even.empty() || sectors.odd.empty() || sectors.leakage(h) > 1e-14 * scale) {
    return expm_hermitian(h, dt);
  }
  ComplexMatrix u = ComplexMatrix::Zero(h.rows(), h.cols());
  u(sectors.even, sectors.even) = expm_hermitian(h(sectors.even, sectors.even), dt);
  u(sectors.odd, sectors.odd) = expm_hermitian(h(sectors.odd, sectors.odd), dt);
  return u;
}

Trajectory propagate(const ModelParams& params, const CouplingSchedule& schedule,
                     const StateVector& psi0, const PropagatorConfig& cfg) {
  schedule.validate();
  cfg.validate(schedule);
  const HilbertDims dims = params.dims();
  if (!(psi0.dims == dims)) throw ValidationError("propagate: psi0 dimension mismatch");
  if (std::abs(psi0.norm() - 1.0) > cfg.norm_tol) {
    throw ValidationError("propagate: psi0 is not normalized");
  }

  const RabiTerms terms(params);
  const ParitySectors sectors(parity_diagonal(dims));
  const int steps = cfg.steps_for(schedule);
  const double h = schedule.total_time / steps;

  Trajectory traj;
  ComplexVector psi = psi0.amplitudes;
  auto record = [&](double t) {
    traj.times.push_back(t);
    traj.couplings.push_back(coupling_at(schedule, t));
    traj.states.emplace_back(dims, psi);
  };
  record(0.0);
  for (int s = 0; s < steps; ++s) {
    const double t_mid = (s + 0.5) * h;
    psi = step_unitary(terms.at(coupling_at(schedule, t_mid)), h, sectors) * psi;
    const double drift = std::abs(psi.norm() - 1.0);
    if (drift > cfg.norm_tol) {
      throw NumericalError("propagate: norm drift " + std::to_string(drift) + " at step " +
                           std::to_string(s));
    }
    psi.normalize();
    if ((s + 1) % cfg.record_every == 0 || s + 1 == steps) {
      record(s + 1 == steps ? schedule.total_time : (s + 1) * h);
    }
  }
  return traj;
}

void QubitAmplitudes::validate() const {
  const double n = std::norm(alpha) + std::norm(beta);
  if (std::abs(n - 1.0) > 1e-9) {
    throw ValidationError("|alpha_F|^2 + |beta_F|^2 = " + std::to_string(n) + ", expected 1");
  }
}

StateVector encode_input(const HilbertDims& dims, const QubitAmplitudes& input) {
  input.validate();
  ComplexVector v = ComplexVector::Zero(dims.total_dim());
  v(dims.index(0, 0)) = input.alpha;
  v(dims.index(1, 0)) = input.beta;
  return {dims, std::move(v)};
}

StateVector apply_phase_correction(const StateVector& psi, double theta) {
  if (psi.dims.n_cells() != 1) throw ValidationError("apply_phase_correction is single-cell");
  StateVector out = psi;
  const Eigen::Index nf = psi.dims.n_fock();
  out.amplitudes.segment(psi.dims.index(1, 0), nf) *= std::polar(1.0, -theta);
  return out;
}

namespace {

// <psi_s| C(theta) psi> = A + B e^{-i theta}
std::pair<Complex, Complex> decode_terms(const StateVector& psi, const QubitAmplitudes& input) {
  const Complex g0 = psi.amplitudes(psi.dims.index(0, 0));
  const Complex e0 = psi.amplitudes(psi.dims.index(1, 0));
  return {std::conj(input.alpha) * g0, std::conj(input.beta) * e0};
}

}  // namespace

double corrected_fidelity(const StateVector& psi, const QubitAmplitudes& input, double theta) {
  const auto [a, b] = decode_terms(psi, input);
  return std::norm(a + b * std::polar(1.0, -theta));
}

double optimal_phase(const StateVector& psi, const QubitAmplitudes& input) {
  const auto [a, b] = decode_terms(psi, input);
  if (std::abs(a) == 0.0 || std::abs(b) == 0.0) return 0.0;
  return wrap_angle(std::arg(b) - std::arg(a));
}

SweepResult storage_run(const ModelParams& params, const QubitAmplitudes& input,
                        const CouplingSchedule& schedule, const PropagatorConfig& cfg) {
  const StateVector psi_s = encode_input(params.dims(), input);
  SweepResult out{propagate(params, schedule, psi_s, cfg), {}, 0.0};
  out.fidelity.reserve(out.trajectory.states.size());
  for (const auto& psi : out.trajectory.states) out.fidelity.push_back(std::norm(psi_s.overlap(psi)));
  return out;
}

SweepResult retrieval_run(const ModelParams& params, const StateVector& stored,
                          const QubitAmplitudes& input, const CouplingSchedule& schedule,
                          const PropagatorConfig& cfg, double theta_correction) {
  input.validate();
  SweepResult out{propagate(params, schedule, stored, cfg), {}, theta_correction};
  out.fidelity.reserve(out.trajectory.states.size());
  for (const auto& psi : out.trajectory.states) {
    out.fidelity.push_back(corrected_fidelity(psi, input, theta_correction));
  }
  return out;
}

RoundTripResult round_trip(const ModelParams& params, const QubitAmplitudes& input,
                           double total_time, int steps, int record_every, double omega_start) {
  const CouplingSchedule store = CouplingSchedule::storage(params, total_time, omega_start);
  const CouplingSchedule retrieve = store.reversed();
  const PropagatorConfig cfg = PropagatorConfig::for_schedule(store, steps, record_every);

  RoundTripResult out;
  out.storage = storage_run(params, input, store, cfg);
  const Trajectory back = propagate(params, retrieve, out.storage.trajectory.final_state(), cfg);
  out.theta_opt = optimal_phase(back.final_state(), input);

  out.retrieval.trajectory = back;
  out.retrieval.theta = out.theta_opt;
  for (auto& t : out.retrieval.trajectory.times) t += total_time;
  for (const auto& psi : back.states) {
    out.retrieval.fidelity.push_back(corrected_fidelity(psi, input, out.theta_opt));
  }
  out.final_fidelity = out.retrieval.final_fidelity();
  return out;
}

PhaseLandscape phase_landscape(const ModelParams& params, const QubitAmplitudes& input,
                               const CouplingSchedule& schedule, const PropagatorConfig& cfg,
                               int theta_points) {
  if (theta_points < 32) throw ValidationError("phase_landscape: theta_points must be >= 32");
  const Trajectory traj = storage_run(params, input, schedule, cfg).trajectory;
  const std::vector<Spectrum> tracked = track_spectrum(params, traj.couplings, 2);

  PhaseLandscape out;
  out.times = traj.times;
  out.coupling_grid = traj.couplings;
  for (int j = 0; j < theta_points; ++j) out.theta_grid.push_back(kTwoPi * j / theta_points);

  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const ComplexVector& psi = traj.states[i].amplitudes;
    const Complex a = std::conj(input.alpha) * tracked[i].states.col(0).dot(psi);
    const Complex b = std::conj(input.beta) * tracked[i].states.col(1).dot(psi);
    std::vector<double> row;
    row.reserve(out.theta_grid.size());
    for (double theta : out.theta_grid) row.push_back(std::norm(a + b * std::polar(1.0, -theta)));
    const auto best = std::max_element(row.begin(), row.end());
    out.theta_opt.push_back(out.theta_grid[static_cast<std::size_t>(best - row.begin())]);
    out.max_fidelity.push_back(*best);
    out.fidelity.push_back(std::move(row));
  }
  return out;
}

EvolutionTimeScan optimal_evolution_time(const ModelParams& params, const QubitAmplitudes& input,
                                         const std::vector<double>& total_times, int steps,
                                         double omega_start) {
  if (total_times.empty()) throw ValidationError("optimal_evolution_time: empty T grid");
  EvolutionTimeScan out;
  for (double T : total_times) {
    // Only the end points matter here; record nothing in between.
    const RoundTripResult rt = round_trip(params, input, T, steps, steps, omega_start);
    out.total_times.push_back(T);
    out.fidelity.push_back(rt.final_fidelity);
    out.theta_opt.push_back(rt.theta_opt);
  }
  const auto best = std::max_element(out.fidelity.begin(), out.fidelity.end());
  out.best_time = out.total_times[static_cast<std::size_t>(best - out.fidelity.begin())];
  out.best_fidelity = *best;
  return out;
}

double physical_time(double total_time, double f_cav_hz) {
  if (!(total_time > 0.0) || !(f_cav_hz > 0.0)) {
    throw ValidationError("physical_time: inputs must be positive");
  }
  return total_time / (kTwoPi * f_cav_hz);
}

}  // namespace uscmem
