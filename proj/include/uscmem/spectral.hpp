#pragma once

// Instantaneous eigenstates of the Rabi model, gauge tracking along a sweep,
// and the cat-state approximants of the two lowest levels.

#include <vector>

#include "uscmem/rabi.hpp"

namespace uscmem {

/// The k lowest eigenpairs of a Hamiltonian, each with a definite parity.
struct Spectrum {
  HilbertDims dims;
  RealVector energies;      ///< ascending (unless reordered by align_gauge)
  ComplexMatrix states;     ///< orthonormal columns
  std::vector<int> parities;///< +1 / -1

  Eigen::Index size() const { return energies.size(); }
  StateVector state(Eigen::Index k) const { return {dims, states.col(k)}; }
};

/// Lowest k eigenpairs of a Hermitian single-cell Hamiltonian (dimension
/// 2 * n_fock). Each returned state has its largest-magnitude amplitude real
/// and positive.
///
/// When h commutes with the parity operator the two parity sectors are
/// diagonalized separately, so exactly degenerate doublets of opposite
/// parity still come out as parity eigenstates. Otherwise the labels come from
/// the sign of <P>, and a state with |<P>| <= 0.999 is an error.
///
/// Throws ValidationError for non-Hermitian input or k outside [1, dim].
Spectrum eigendecompose(const ComplexMatrix& h, Eigen::Index k);
Spectrum eigendecompose(const ComplexMatrix& h, Eigen::Index k, const HilbertDims& dims);

enum class CatBranch { Ground, Excited };

/// (|-alpha>|+> -/+ |alpha>|->) / sqrt(2) with alpha = coupling / omega_cav and
/// |+-> = (|e> +- |g>) / sqrt(2); minus for Ground. coupling = 0 gives the
/// alpha -> 0 limit |g,0> / |e,0>.
StateVector cat_approximant(const ModelParams& params, double coupling, CatBranch which);

/// <a^dagger a> summed over all cells.
double mean_photon(const StateVector& state);

/// Re-orders and re-phases `current` so that it continues `previous`:
/// afterwards <previous_k|current_k> is real and >= 0. States are matched by
/// maximum overlap when two adjacent energies of `current` lie within
/// `degeneracy_tol`; otherwise the energy order is kept.
/// Throws NumericalError when the matching is ambiguous (best and runner-up
/// overlaps within 1e-3) or the phase reference vanishes, which means the
/// sweep step is too coarse.
Spectrum align_gauge(const Spectrum& previous, const Spectrum& current,
                     double degeneracy_tol = 1e-6);

/// Spectrum of H(Omega) for each coupling in `couplings`, gauge-aligned in
/// sequence starting from the canonical gauge of the first point.
std::vector<Spectrum> track_spectrum(const ModelParams& params, const std::vector<double>& couplings,
                                     Eigen::Index k);

}  // namespace uscmem
