#include "uscmem/open_dynamics.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "uscmem/errors.hpp"

namespace uscmem {

namespace {

constexpr double kRateFloor = 1e-14;
constexpr double kPositivityFloor = -1e-6;
constexpr double kTraceTol = 1e-8;

struct ChannelOperator {
  NoiseChannel channel;
  double gamma;
  ComplexMatrix op;
};

std::vector<ChannelOperator> channel_operators(const HilbertDims& dims, const NoiseRates& rates) {
  const ComplexMatrix a = annihilation_op(dims);
  return {
      {NoiseChannel::SigmaX, rates.gamma_x, pauli_op(PauliAxis::X, dims)},
      {NoiseChannel::SigmaY, rates.gamma_y, pauli_op(PauliAxis::Y, dims)},
      {NoiseChannel::SigmaZ, rates.gamma_z, pauli_op(PauliAxis::Z, dims)},
      {NoiseChannel::Resonator, rates.gamma_r, a + a.adjoint()},
  };
}

// Compact form of a jump table: for each level pair the summed rate.
struct DissipatorKernel {
  ComplexMatrix basis;        // dim x k
  Eigen::MatrixXd rate;       // (lower, upper)
  RealVector decay;           // total rate out of each level

  explicit DissipatorKernel(const DissipatorTable& table)
      : basis(table.basis),
        rate(Eigen::MatrixXd::Zero(table.basis.cols(), table.basis.cols())),
        decay(table.decay_totals()) {
    for (const auto& j : table.jumps) rate(j.lower, j.upper) += j.rate;
  }

  // sum_jk gamma_jk (L rho L^dag - 1/2 {L^dag L, rho}), L = |j><k|
  ComplexMatrix apply(const ComplexMatrix& rho) const {
    const ComplexMatrix w = basis.adjoint() * rho;  // k x dim
    RealVector populations(basis.cols());
    for (Eigen::Index k = 0; k < basis.cols(); ++k) {
      populations(k) = w.row(k).transpose().cwiseProduct(basis.col(k)).sum().real();
    }
    const RealVector gain = rate * populations;
    const ComplexMatrix loss = basis * (decay.cast<Complex>().asDiagonal() * w);
    return basis * gain.cast<Complex>().asDiagonal() * basis.adjoint() - 0.5 * (loss + loss.adjoint());
  }

  // Classical RK4 on the linear dissipator flow.
  void advance(ComplexMatrix& rho, double dt) const {
    const ComplexMatrix k1 = apply(rho);
    const ComplexMatrix k2 = apply(rho + 0.5 * dt * k1);
    const ComplexMatrix k3 = apply(rho + 0.5 * dt * k2);
    const ComplexMatrix k4 = apply(rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
};

void check_state(const ComplexMatrix& rho, double t) {
  const double trace_drift = std::abs(rho.trace() - Complex(1.0, 0.0));
  if (trace_drift > kTraceTol) {
    throw NumericalError("evolve_master: trace drift " + std::to_string(trace_drift) +
                         " at t = " + std::to_string(t));
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho, Eigen::EigenvaluesOnly);
  const double lowest = solver.eigenvalues()(0);
  if (lowest < kPositivityFloor) {
    throw NumericalError("evolve_master: eigenvalue " + std::to_string(lowest) + " at t = " +
                         std::to_string(t) + "; reduce dt");
  }
}

}  // namespace

NoiseRates NoiseRates::reference(double omega_eg) {
  return {1e-3 * omega_eg, 1e-3 * omega_eg, 1e-3 * omega_eg, 1e-4 * omega_eg};
}

void NoiseRates::validate() const {
  if (!(gamma_x >= 0.0 && gamma_y >= 0.0 && gamma_z >= 0.0 && gamma_r >= 0.0)) {
    throw ValidationError("noise rates must be >= 0");
  }
}

const char* channel_name(NoiseChannel c) {
  switch (c) {
    case NoiseChannel::SigmaX: return "sigma_x";
    case NoiseChannel::SigmaY: return "sigma_y";
    case NoiseChannel::SigmaZ: return "sigma_z";
    case NoiseChannel::Resonator: return "resonator";
  }
  return "?";
}

SpectralDensity flat_density() {
  return [](double) { return 1.0; };
}

SpectralDensity ohmic_density(double reference_gap) {
  if (!(reference_gap > 0.0)) throw ValidationError("ohmic reference gap must be > 0");
  return [reference_gap](double gap) { return gap / reference_gap; };
}

ComplexMatrix DissipatorTable::jump_operator(std::size_t i) const {
  const DressedJump& j = jumps.at(i);
  return basis.col(j.lower) * basis.col(j.upper).adjoint();
}

RealVector DissipatorTable::decay_totals() const {
  RealVector out = RealVector::Zero(basis.cols());
  for (const auto& j : jumps) out(j.upper) += j.rate;
  return out;
}

DissipatorTable dressed_dissipators(const ComplexMatrix& h, const NoiseRates& rates,
                                    Eigen::Index k_levels, const SpectralDensity& density) {
  rates.validate();
  if (h.rows() % 2 != 0) throw ValidationError("dressed_dissipators: single-cell Hamiltonian expected");
  if (k_levels < 1 || k_levels > h.rows()) {
    throw ValidationError("dressed_dissipators: k_levels outside [1, dim]");
  }
  const HilbertDims dims(static_cast<int>(h.rows() / 2));
  const Spectrum spectrum = eigendecompose(h, k_levels, dims);

  DissipatorTable table{spectrum.energies, spectrum.states, {}};
  for (const auto& ch : channel_operators(dims, rates)) {
    if (ch.gamma == 0.0) continue;
    const ComplexMatrix elements = spectrum.states.adjoint() * ch.op * spectrum.states;
    for (Eigen::Index k = 0; k < k_levels; ++k) {
      for (Eigen::Index j = 0; j < k_levels; ++j) {
        const double gap = spectrum.energies(k) - spectrum.energies(j);
        if (!(gap > 0.0)) continue;
        const double rate = ch.gamma * density(gap) * std::norm(elements(j, k));
        if (rate >= kRateFloor) table.jumps.push_back({j, k, ch.channel, rate});
      }
    }
  }
  return table;
}

DensityMatrix::DensityMatrix(HilbertDims d, ComplexMatrix rho) : dims(d), entries(std::move(rho)) {
  if (entries.rows() != dims.total_dim() || entries.cols() != dims.total_dim()) {
    throw ValidationError("density matrix does not match the Hilbert space dimension");
  }
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  return {psi.dims, psi.amplitudes * psi.amplitudes.adjoint()};
}

DensityMatrix DensityMatrix::maximally_mixed(const HilbertDims& dims) {
  const auto d = dims.total_dim();
  return {dims, ComplexMatrix::Identity(d, d) / static_cast<double>(d)};
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(entries, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

void DensityMatrix::validate() const {
  std::ostringstream problems;
  if (hermiticity_defect(entries) > 1e-10) problems << " not Hermitian;";
  if (std::abs(trace() - Complex(1.0, 0.0)) > 1e-8) problems << " trace != 1;";
  if (min_eigenvalue() < -1e-8) problems << " negative eigenvalue;";
  if (!problems.str().empty()) throw NumericalError("invalid density matrix:" + problems.str());
}

MasterTrajectory evolve_master(const ModelParams& params, const CouplingSchedule& schedule,
                               const DensityMatrix& rho0, const NoiseRates& rates,
                               const MasterConfig& cfg) {
  schedule.validate();
  rates.validate();
  cfg.propagator.validate(schedule);
  if (cfg.refresh_every < 1) throw ValidationError("refresh_every must be >= 1");
  const HilbertDims dims = params.dims();
  if (!(rho0.dims == dims)) throw ValidationError("evolve_master: rho0 dimension mismatch");
  rho0.validate();

  const RabiTerms terms(params);
  const ParitySectors sectors(parity_diagonal(dims));
  const int steps = cfg.propagator.steps_for(schedule);
  const double h = schedule.total_time / steps;
  const int record_every = cfg.propagator.record_every;

  MasterTrajectory traj;
  ComplexMatrix rho = rho0.entries;
  auto record = [&](double t) {
    check_state(rho, t);
    traj.times.push_back(t);
    traj.couplings.push_back(coupling_at(schedule, t));
    traj.states.emplace_back(dims, rho);
  };
  record(0.0);

  std::optional<DissipatorKernel> kernel;
  for (int s = 0; s < steps; ++s) {
    const ComplexMatrix h_mid = terms.at(coupling_at(schedule, (s + 0.5) * h));
    if (!rates.all_zero() && s % cfg.refresh_every == 0) {
      kernel.emplace(dressed_dissipators(h_mid, rates, cfg.k_levels, cfg.density));
    }
    if (kernel) kernel->advance(rho, 0.5 * h);
    const ComplexMatrix u = step_unitary(h_mid, h, sectors);
    rho = u * rho * u.adjoint();
    if (kernel) kernel->advance(rho, 0.5 * h);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    if ((s + 1) % record_every == 0 || s + 1 == steps) {
      record(s + 1 == steps ? schedule.total_time : (s + 1) * h);
    }
  }
  return traj;
}

double fidelity_mixed(const DensityMatrix& rho, const StateVector& psi) {
  if (!(rho.dims == psi.dims)) throw ValidationError("fidelity_mixed: dimension mismatch");
  return psi.amplitudes.dot(rho.entries * psi.amplitudes).real();
}

std::pair<double, double> best_corrected_fidelity(const DensityMatrix& rho,
                                                  const QubitAmplitudes& input) {
  input.validate();
  const Eigen::Index g = rho.dims.index(0, 0);
  const Eigen::Index e = rho.dims.index(1, 0);
  const double diagonal = std::norm(input.alpha) * rho.entries(g, g).real() +
                          std::norm(input.beta) * rho.entries(e, e).real();
  const Complex coherence = std::conj(input.alpha) * input.beta * rho.entries(g, e);
  double theta = 0.0;
  if (std::abs(coherence) > 0.0) {
    theta = std::fmod(-std::arg(coherence) + 2.0 * std::numbers::pi, 2.0 * std::numbers::pi);
  }
  return {diagonal + 2.0 * std::abs(coherence), theta};
}

NoisyRoundTrip noisy_round_trip(const ModelParams& params, const QubitAmplitudes& input,
                                double total_time, const NoiseRates& rates, MasterConfig cfg,
                                int steps, double omega_start) {
  const CouplingSchedule store = CouplingSchedule::storage(params, total_time, omega_start);
  const CouplingSchedule retrieve = store.reversed();
  const int record_every = cfg.propagator.record_every;
  cfg.propagator = PropagatorConfig::for_schedule(store, steps, record_every);

  const StateVector psi_s = encode_input(params.dims(), input);
  NoisyRoundTrip out;
  out.storage = evolve_master(params, store, DensityMatrix::pure(psi_s), rates, cfg);
  out.retrieval = evolve_master(params, retrieve, out.storage.final_state(), rates, cfg);
  for (auto& t : out.retrieval.times) t += total_time;

  for (const auto& rho : out.storage.states) out.storage_fidelity.push_back(fidelity_mixed(rho, psi_s));
  const auto [best, theta] = best_corrected_fidelity(out.retrieval.final_state(), input);
  out.theta_opt = theta;
  out.final_fidelity = best;
  const StateVector target = apply_phase_correction(psi_s, -theta);  // C(theta)^dagger psi_s
  for (const auto& rho : out.retrieval.states) {
    out.retrieval_fidelity.push_back(fidelity_mixed(rho, target));
  }
  return out;
}

}  // namespace uscmem
