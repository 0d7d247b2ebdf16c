#pragma once

// Dense Hermitian kernels shared by the spectral and dynamics modules.

#include <vector>

#include "uscmem/fock.hpp"

namespace uscmem {

struct EigenPairs {
  RealVector values;     ///< ascending
  ComplexMatrix vectors; ///< columns
};

/// Full eigendecomposition of a Hermitian matrix. Real symmetric input takes
/// the real solver. Throws NumericalError if the solver does not converge.
EigenPairs hermitian_eigen(const ComplexMatrix& h);

/// exp(-i h t) for Hermitian h, via the eigendecomposition.
ComplexMatrix expm_hermitian(const ComplexMatrix& h, double t);

/// Index sets of the +1 and -1 eigenspaces of a diagonal +-1 operator.
struct ParitySectors {
  std::vector<Eigen::Index> even;
  std::vector<Eigen::Index> odd;

  explicit ParitySectors(const RealVector& parity_diag);
  /// Largest |h_ij| with i, j in different sectors.
  double leakage(const ComplexMatrix& h) const;
};

}  // namespace uscmem
