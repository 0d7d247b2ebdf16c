#include "uscmem/fock.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "uscmem/errors.hpp"

namespace uscmem {

HilbertDims::HilbertDims(int n_fock, int n_cells) : n_fock_(n_fock), n_cells_(n_cells) {
  if (n_fock < 2) {
    throw ValidationError("n_fock must be >= 2, got " + std::to_string(n_fock));
  }
  if (n_cells != 1 && n_cells != 2) {
    throw ValidationError("n_cells must be 1 or 2, got " + std::to_string(n_cells));
  }
}

Eigen::Index HilbertDims::total_dim() const {
  return n_cells_ == 1 ? cell_dim() : cell_dim() * cell_dim();
}

Eigen::Index HilbertDims::index(int qubit, int photons) const {
  if (qubit < 0 || qubit > 1 || photons < 0 || photons >= n_fock_) {
    throw ValidationError("basis label |" + std::to_string(qubit) + ", " +
                          std::to_string(photons) + "> outside the truncated space");
  }
  return static_cast<Eigen::Index>(qubit) * n_fock_ + photons;
}

StateVector::StateVector(HilbertDims d, ComplexVector amps)
    : dims(d), amplitudes(std::move(amps)) {
  if (amplitudes.size() != dims.total_dim()) {
    throw ValidationError("state has " + std::to_string(amplitudes.size()) +
                          " amplitudes, expected " + std::to_string(dims.total_dim()));
  }
}

StateVector StateVector::basis(const HilbertDims& dims, int qubit, int photons) {
  if (dims.n_cells() != 1) throw ValidationError("StateVector::basis is single-cell");
  ComplexVector v = ComplexVector::Zero(dims.total_dim());
  v(dims.index(qubit, photons)) = 1.0;
  return {dims, std::move(v)};
}

Complex StateVector::overlap(const StateVector& other) const {
  if (!(dims == other.dims)) throw ValidationError("overlap of states with different dims");
  return amplitudes.dot(other.amplitudes);  // Eigen's dot conjugates the left argument
}

namespace {

ComplexMatrix fock_lowering(int n_fock) {
  ComplexMatrix a = ComplexMatrix::Zero(n_fock, n_fock);
  for (int n = 1; n < n_fock; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

ComplexMatrix qubit_pauli(PauliAxis axis) {
  // index 0 = |g>, 1 = |e>
  ComplexMatrix s = ComplexMatrix::Zero(2, 2);
  const Complex i{0.0, 1.0};
  switch (axis) {
    case PauliAxis::X:
      s(0, 1) = 1.0;
      s(1, 0) = 1.0;
      break;
    case PauliAxis::Y:
      // <e|sigma_y|g> = -i, so that sigma_x sigma_y = i sigma_z
      s(1, 0) = -i;
      s(0, 1) = i;
      break;
    case PauliAxis::Z:
      s(0, 0) = -1.0;
      s(1, 1) = 1.0;
      break;
  }
  return s;
}

// Lifts a single-cell operator into the full space of `dims`.
ComplexMatrix embed(const ComplexMatrix& cell_op, const HilbertDims& dims, int cell) {
  if (cell < 0 || cell >= dims.n_cells()) {
    throw ValidationError("cell index " + std::to_string(cell) + " out of range");
  }
  if (dims.n_cells() == 1) return cell_op;
  const ComplexMatrix id = ComplexMatrix::Identity(dims.cell_dim(), dims.cell_dim());
  return cell == 0 ? tensor(cell_op, id) : tensor(id, cell_op);
}

}  // namespace

ComplexMatrix annihilation_op(const HilbertDims& dims, int cell) {
  const ComplexMatrix cell_op = tensor(ComplexMatrix::Identity(2, 2), fock_lowering(dims.n_fock()));
  return embed(cell_op, dims, cell);
}

ComplexMatrix pauli_op(PauliAxis axis, const HilbertDims& dims, int cell) {
  const ComplexMatrix cell_op =
      tensor(qubit_pauli(axis), ComplexMatrix::Identity(dims.n_fock(), dims.n_fock()));
  return embed(cell_op, dims, cell);
}

ComplexMatrix identity_op(const HilbertDims& dims) {
  return ComplexMatrix::Identity(dims.total_dim(), dims.total_dim());
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b, Eigen::Index dimension_cap) {
  if (a.rows() != a.cols() || b.rows() != b.cols()) {
    throw ValidationError("tensor: both factors must be square");
  }
  const Eigen::Index na = a.rows();
  const Eigen::Index nb = b.rows();
  if (na != 0 && nb > dimension_cap / na) {
    throw ValidationError("tensor: product dimension " + std::to_string(na) + "x" +
                          std::to_string(nb) + " exceeds cap " + std::to_string(dimension_cap));
  }
  ComplexMatrix out(na * nb, na * nb);
  for (Eigen::Index i = 0; i < na; ++i) {
    for (Eigen::Index j = 0; j < na; ++j) {
      out.block(i * nb, j * nb, nb, nb) = a(i, j) * b;
    }
  }
  return out;
}

CoherentAmplitudes coherent_state(Complex alpha, int n_fock) {
  const double mean = std::norm(alpha);
  if (n_fock < 2) throw ValidationError("coherent_state: n_fock must be >= 2");
  if (mean > n_fock / 4.0) {
    throw TruncationError("coherent_state: |alpha|^2 = " + std::to_string(mean) +
                          " exceeds n_fock/4 = " + std::to_string(n_fock / 4.0));
  }
  ComplexVector c(n_fock);
  c(0) = std::exp(-mean / 2.0);
  for (int n = 1; n < n_fock; ++n) c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  const double kept = c.squaredNorm();
  const double lost = 1.0 - kept;
  if (lost >= 1e-8) {
    throw TruncationError("coherent_state: truncation discards weight " + std::to_string(lost) +
                          " (limit 1e-8); raise n_fock");
  }
  c /= std::sqrt(kept);
  return {std::move(c), lost};
}

StateVector with_qubit(const ComplexVector& fock_amplitudes, int qubit) {
  const HilbertDims dims(static_cast<int>(fock_amplitudes.size()));
  ComplexVector v = ComplexVector::Zero(dims.total_dim());
  v.segment(dims.index(qubit, 0), dims.n_fock()) = fock_amplitudes;
  return {dims, std::move(v)};
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

double hermiticity_defect(const ComplexMatrix& h) {
  if (h.rows() != h.cols()) return std::numeric_limits<double>::infinity();
  return max_abs_diff(h, h.adjoint());
}

}  // namespace uscmem
