#include "uscmem/rabi.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "uscmem/errors.hpp"

namespace uscmem {

namespace {

void throw_if_any(const std::vector<std::string>& problems, const char* what) {
  if (problems.empty()) return;
  std::ostringstream msg;
  msg << what << ":";
  for (const auto& p : problems) msg << "\n  - " << p;
  throw ValidationError(msg.str());
}

}  // namespace

void ModelParams::validate() const {
  std::vector<std::string> problems;
  if (!(omega_cav > 0.0)) problems.push_back("omega_cav must be > 0");
  if (!(omega_eg >= 0.0)) problems.push_back("omega_eg must be >= 0");
  if (!(coupling_max >= 0.0)) problems.push_back("Omega0 must be >= 0");
  if (n_fock < 2) problems.push_back("n_fock must be >= 2");
  throw_if_any(problems, "invalid model parameters");
}

CouplingSchedule CouplingSchedule::from_flux(double f, double delta_f, double omega0,
                                             double total_time) {
  CouplingSchedule s{omega0 * std::cos(f), omega0 * (std::cos(f) - delta_f * std::sin(f)),
                     total_time};
  s.validate();
  return s;
}

CouplingSchedule CouplingSchedule::storage(const ModelParams& params, double total_time,
                                           double omega_start) {
  CouplingSchedule s{omega_start, params.coupling_max, total_time};
  s.validate();
  return s;
}

CouplingSchedule CouplingSchedule::retrieval(const ModelParams& params, double total_time,
                                             double omega_end) {
  CouplingSchedule s{params.coupling_max, omega_end, total_time};
  s.validate();
  return s;
}

void CouplingSchedule::validate() const {
  std::vector<std::string> problems;
  if (!(total_time > 0.0) || !std::isfinite(total_time)) problems.push_back("T must be > 0");
  if (!std::isfinite(omega_start)) problems.push_back("omega_start must be finite");
  if (!std::isfinite(omega_end)) problems.push_back("omega_end must be finite");
  throw_if_any(problems, "invalid coupling schedule");
}

RabiTerms::RabiTerms(const ModelParams& params) {
  params.validate();
  const HilbertDims dims = params.dims();
  const ComplexMatrix a = annihilation_op(dims);
  drift = 0.5 * params.omega_eg * pauli_op(PauliAxis::Z, dims) +
          params.omega_cav * (a.adjoint() * a);
  coupling = pauli_op(PauliAxis::X, dims) * (a + a.adjoint());
}

ComplexMatrix RabiTerms::at(double coupling_strength) const {
  return drift + coupling_strength * coupling;
}

ComplexMatrix build_rabi(const ModelParams& params, double coupling) {
  if (!(coupling >= 0.0)) throw ValidationError("build_rabi: coupling must be >= 0");
  return RabiTerms(params).at(coupling);
}

RealVector parity_diagonal(const HilbertDims& dims) {
  const int nf = dims.n_fock();
  RealVector cell(dims.cell_dim());
  for (int q = 0; q < 2; ++q) {
    for (int n = 0; n < nf; ++n) {
      const double sz = q == 1 ? 1.0 : -1.0;
      cell(dims.index(q, n)) = (n % 2 == 0) ? sz : -sz;
    }
  }
  if (dims.n_cells() == 1) return cell;
  RealVector joint(dims.total_dim());
  const Eigen::Index d = dims.cell_dim();
  for (Eigen::Index i = 0; i < d; ++i) joint.segment(i * d, d) = cell(i) * cell;
  return joint;
}

ComplexMatrix parity_op(const HilbertDims& dims) {
  return parity_diagonal(dims).cast<Complex>().asDiagonal();
}

double coupling_at(const CouplingSchedule& schedule, double t) {
  const double T = schedule.total_time;
  // Accumulated step times may overshoot T by a few ulps.
  const double slack = 1e-12 * T;
  if (!(t >= -slack && t <= T + slack)) {
    throw ValidationError("coupling_at: t = " + std::to_string(t) + " outside [0, " +
                          std::to_string(T) + "]");
  }
  if (t <= 0.0) return schedule.omega_start;
  if (t >= T) return schedule.omega_end;
  return schedule.omega_start + (schedule.omega_end - schedule.omega_start) * (t / T);
}

ComplexMatrix hamiltonian_at(const ModelParams& params, const CouplingSchedule& schedule,
                             double t) {
  const double omega = coupling_at(schedule, t);
  return RabiTerms(params).at(omega);
}

}  // namespace uscmem
