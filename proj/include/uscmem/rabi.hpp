#pragma once

// Quantum Rabi Hamiltonian, its Z2 parity, and linear coupling ramps.
// Units: hbar = 1, frequencies are angular, omega_cav = 1 by default so times
// are in units of 1 / omega_cav.

#include "uscmem/fock.hpp"

namespace uscmem {

struct ModelParams {
  double omega_cav = 1.0;
  double omega_eg = 0.1;
  /// Peak coupling Omega_0 reached at the end of a storage sweep.
  double coupling_max = 1.0;
  int n_fock = 30;

  /// Throws ValidationError listing every violated invariant.
  void validate() const;
  HilbertDims dims() const { return HilbertDims(n_fock); }
};

/// Omega(t) = omega_start + (omega_end - omega_start) t / T on [0, T].
struct CouplingSchedule {
  double omega_start = 0.0;
  double omega_end = 1.0;
  double total_time = 105.0;

  /// Flux-bias parameterization Omega(t) = (cos f - df sin f t/T) Omega_0.
  static CouplingSchedule from_flux(double f, double delta_f, double omega0, double total_time);
  /// 0 -> params.coupling_max.
  static CouplingSchedule storage(const ModelParams& params, double total_time,
                                  double omega_start = 0.0);
  /// params.coupling_max -> 0.
  static CouplingSchedule retrieval(const ModelParams& params, double total_time,
                                    double omega_end = 0.0);

  CouplingSchedule reversed() const { return {omega_end, omega_start, total_time}; }
  void validate() const;
};

/// The Hamiltonian split into its coupling-free part and the coupling operator
/// sigma_x (a + a^dagger), so that H(Omega) = drift + Omega * coupling exactly.
struct RabiTerms {
  ComplexMatrix drift;
  ComplexMatrix coupling;

  explicit RabiTerms(const ModelParams& params);
  ComplexMatrix at(double coupling_strength) const;
};

/// H = (omega_eg/2) sigma_z + omega_cav a^dagger a + Omega sigma_x (a + a^dagger).
ComplexMatrix build_rabi(const ModelParams& params, double coupling);

/// P = sigma_z (x) exp(i pi a^dagger a) per cell; on two cells, P1 (x) P2.
ComplexMatrix parity_op(const HilbertDims& dims);

/// Diagonal of parity_op (P is diagonal in the product basis), entries +-1.
RealVector parity_diagonal(const HilbertDims& dims);

double coupling_at(const CouplingSchedule& schedule, double t);

ComplexMatrix hamiltonian_at(const ModelParams& params, const CouplingSchedule& schedule, double t);

}  // namespace uscmem
