#include "uscmem/linalg.hpp"

#include <cmath>

#include "uscmem/errors.hpp"

namespace uscmem {

EigenPairs hermitian_eigen(const ComplexMatrix& h) {
  if (h.imag().isZero(0.0)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.real());
    if (solver.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors().cast<Complex>()};
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix expm_hermitian(const ComplexMatrix& h, double t) {
  const EigenPairs eig = hermitian_eigen(h);
  const ComplexVector phases =
      eig.values.unaryExpr([t](double e) { return std::polar(1.0, -e * t); });
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

ParitySectors::ParitySectors(const RealVector& parity_diag) {
  for (Eigen::Index i = 0; i < parity_diag.size(); ++i) {
    (parity_diag(i) > 0 ? even : odd).push_back(i);
  }
}

double ParitySectors::leakage(const ComplexMatrix& h) const {
  if (even.empty() || odd.empty()) return 0.0;
  return h(even, odd).cwiseAbs().maxCoeff();
}

}  // namespace uscmem
