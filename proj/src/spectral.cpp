#include "uscmem/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "uscmem/errors.hpp"
#include "uscmem/linalg.hpp"

namespace uscmem {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kParityLabelFloor = 0.999;
constexpr double kAmbiguityGap = 1e-3;

// Largest-magnitude amplitude made real and positive. Near-ties resolve to the
// lowest index so the choice is stable under rounding.
void canonicalize_phase(Eigen::Ref<ComplexVector> v) {
  const double peak = v.cwiseAbs().maxCoeff();
  Eigen::Index pivot = 0;
  while (std::abs(v(pivot)) < peak * (1.0 - 1e-9)) ++pivot;
  v *= std::conj(v(pivot)) / std::abs(v(pivot));
}

struct Level {
  double energy;
  int parity;
  int sector_order;  // even sector first on exact ties
  ComplexVector state;
};

}  // namespace

Spectrum eigendecompose(const ComplexMatrix& h, Eigen::Index k) {
  if (h.rows() % 2 != 0) {
    throw ValidationError("eigendecompose: single-cell Hamiltonian must have even dimension");
  }
  return eigendecompose(h, k, HilbertDims(static_cast<int>(h.rows() / 2)));
}

Spectrum eigendecompose(const ComplexMatrix& h, Eigen::Index k, const HilbertDims& dims) {
  if (h.rows() != dims.total_dim() || h.cols() != dims.total_dim()) {
    throw ValidationError("eigendecompose: matrix does not match the Hilbert space dimension");
  }
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if (hermiticity_defect(h) > kHermitianTol * scale) {
    throw ValidationError("eigendecompose: input is not Hermitian");
  }
  if (k < 1 || k > h.rows()) {
    throw ValidationError("eigendecompose: k = " + std::to_string(k) + " outside [1, " +
                          std::to_string(h.rows()) + "]");
  }

  const RealVector parity = parity_diagonal(dims);
  const ParitySectors sectors(parity);
  std::vector<Level> levels;
  levels.reserve(static_cast<std::size_t>(h.rows()));

  if (sectors.leakage(h) <= kHermitianTol * scale) {
    int order = 0;
    for (const auto* idx : {&sectors.even, &sectors.odd}) {
      if (idx->empty()) continue;
      const int label = (idx == &sectors.even) ? 1 : -1;
      const EigenPairs eig = hermitian_eigen(h(*idx, *idx));
      for (Eigen::Index j = 0; j < eig.values.size(); ++j) {
        ComplexVector full = ComplexVector::Zero(h.rows());
        full(*idx) = eig.vectors.col(j);
        levels.push_back({eig.values(j), label, order, std::move(full)});
      }
      ++order;
    }
  } else {
    const EigenPairs eig = hermitian_eigen(h);
    for (Eigen::Index j = 0; j < k; ++j) {
      const ComplexVector v = eig.vectors.col(j);
      const double p = (v.cwiseAbs2().array() * parity.array()).sum();
      if (std::abs(p) <= kParityLabelFloor) {
        throw NumericalError("eigendecompose: eigenstate " + std::to_string(j) +
                             " has no definite parity (<P> = " + std::to_string(p) + ")");
      }
      levels.push_back({eig.values(j), p > 0 ? 1 : -1, 0, v});
    }
  }

  std::stable_sort(levels.begin(), levels.end(), [](const Level& a, const Level& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    return a.sector_order < b.sector_order;
  });

  Spectrum out{dims, RealVector(k), ComplexMatrix(h.rows(), k), std::vector<int>(k)};
  for (Eigen::Index j = 0; j < k; ++j) {
    out.energies(j) = levels[j].energy;
    out.states.col(j) = levels[j].state;
    canonicalize_phase(out.states.col(j));
    out.parities[j] = levels[j].parity;
  }
  return out;
}

StateVector cat_approximant(const ModelParams& params, double coupling, CatBranch which) {
  params.validate();
  if (!(coupling >= 0.0)) throw ValidationError("cat_approximant: coupling must be >= 0");
  const double alpha = coupling / params.omega_cav;
  const ComplexVector plus_alpha = coherent_state(alpha, params.n_fock).amplitudes;
  const ComplexVector minus_alpha = coherent_state(-alpha, params.n_fock).amplitudes;

  // |-alpha>|+> = (|e,-alpha> + |g,-alpha>)/sqrt2, |alpha>|-> = (|e,alpha> - |g,alpha>)/sqrt2
  const double sign = which == CatBranch::Ground ? -1.0 : 1.0;
  const HilbertDims dims = params.dims();
  const Eigen::Index nf = dims.n_fock();
  ComplexVector v(dims.total_dim());
  v.segment(dims.index(0, 0), nf) = 0.5 * (minus_alpha - sign * plus_alpha);
  v.segment(dims.index(1, 0), nf) = 0.5 * (minus_alpha + sign * plus_alpha);
  // The two branches are only approximately orthogonal after truncation.
  v.normalize();
  return {dims, std::move(v)};
}

double mean_photon(const StateVector& state) {
  double total = 0.0;
  for (int cell = 0; cell < state.dims.n_cells(); ++cell) {
    const ComplexMatrix a = annihilation_op(state.dims, cell);
    total += (a * state.amplitudes).squaredNorm();
  }
  return total;
}

Spectrum align_gauge(const Spectrum& previous, const Spectrum& current, double degeneracy_tol) {
  if (!(previous.dims == current.dims) || previous.size() != current.size()) {
    throw ValidationError("align_gauge: spectra differ in dimension or level count");
  }
  const Eigen::Index k = current.size();
  const ComplexMatrix overlaps = previous.states.adjoint() * current.states;  // (prev, cur)
  const Eigen::MatrixXd mags = overlaps.cwiseAbs();

  bool degenerate = false;
  for (Eigen::Index j = 0; j + 1 < k; ++j) {
    if (std::abs(current.energies(j + 1) - current.energies(j)) < degeneracy_tol) degenerate = true;
  }

  std::vector<Eigen::Index> assignment(static_cast<std::size_t>(k));
  std::iota(assignment.begin(), assignment.end(), Eigen::Index{0});
  if (degenerate) {
    for (Eigen::Index r = 0; r < k; ++r) mags.row(r).maxCoeff(&assignment[r]);
    std::vector<Eigen::Index> sorted = assignment;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw NumericalError("align_gauge: two tracked states matched the same eigenstate");
    }
  }

  for (Eigen::Index r = 0; r < k; ++r) {
    const Eigen::Index c = assignment[r];
    for (Eigen::Index other = 0; other < k; ++other) {
      if (other != c && mags(r, other) > mags(r, c) - kAmbiguityGap) {
        throw NumericalError("align_gauge: ambiguous assignment for level " + std::to_string(r) +
                             " (overlaps " + std::to_string(mags(r, c)) + " vs " +
                             std::to_string(mags(r, other)) + "); refine the sweep step");
      }
    }
  }

  Spectrum out{current.dims, RealVector(k), ComplexMatrix(current.states.rows(), k),
               std::vector<int>(k)};
  for (Eigen::Index r = 0; r < k; ++r) {
    const Eigen::Index c = assignment[r];
    const Complex ov = overlaps(r, c);
    if (std::abs(ov) < 1e-8) {
      throw NumericalError("align_gauge: vanishing overlap with the reference state");
    }
    out.energies(r) = current.energies(c);
    out.states.col(r) = current.states.col(c) * (std::conj(ov) / std::abs(ov));
    out.parities[r] = current.parities[c];
  }
  return out;
}

std::vector<Spectrum> track_spectrum(const ModelParams& params, const std::vector<double>& couplings,
                                     Eigen::Index k) {
  const RabiTerms terms(params);
  std::vector<Spectrum> out;
  out.reserve(couplings.size());
  for (double omega : couplings) {
    Spectrum s = eigendecompose(terms.at(omega), k, params.dims());
    out.push_back(out.empty() ? std::move(s) : align_gauge(out.back(), s));
  }
  return out;
}

}  // namespace uscmem
