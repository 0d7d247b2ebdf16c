#pragma once

// Operators and states on the truncated qubit (x) resonator space.
//
// Basis ordering. Within one memory cell the index is
//     i = q * n_fock + n,   q in {0 = |g>, 1 = |e>},  n in [0, n_fock)
// so the qubit is the slow index. With two cells the joint index is
//     I = i1 * (2 n_fock) + i2
// (cell 1 slowest). Every matrix, state and serialized file uses this order.

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace uscmem {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Largest total dimension accepted by `tensor` and the two-cell builders.
inline constexpr Eigen::Index kDefaultDimensionCap = 4096;

class HilbertDims {
 public:
  /// Throws ValidationError unless n_fock >= 2 and n_cells is 1 or 2.
  HilbertDims(int n_fock, int n_cells = 1);

  int n_fock() const { return n_fock_; }
  int n_cells() const { return n_cells_; }
  /// 2 * n_fock.
  Eigen::Index cell_dim() const { return 2 * static_cast<Eigen::Index>(n_fock_); }
  /// (2 * n_fock)^n_cells.
  Eigen::Index total_dim() const;

  /// Single-cell index of |q, n>.
  Eigen::Index index(int qubit, int photons) const;

  bool operator==(const HilbertDims&) const = default;

 private:
  int n_fock_;
  int n_cells_;
};

struct StateVector {
  HilbertDims dims;
  ComplexVector amplitudes;

  StateVector(HilbertDims d, ComplexVector amps);

  /// |q, n> on a single cell.
  static StateVector basis(const HilbertDims& dims, int qubit, int photons);

  double norm() const { return amplitudes.norm(); }
  /// <this|other>.
  Complex overlap(const StateVector& other) const;
};

enum class PauliAxis { X, Y, Z };

/// Resonator lowering operator a of `cell`, identity on everything else.
ComplexMatrix annihilation_op(const HilbertDims& dims, int cell = 0);

/// Pauli matrix of the qubit in `cell`. sigma_z |e> = +|e>, sigma_z |g> = -|g>.
ComplexMatrix pauli_op(PauliAxis axis, const HilbertDims& dims, int cell = 0);

ComplexMatrix identity_op(const HilbertDims& dims);

/// Kronecker product, left factor slowest. Throws ValidationError for
/// non-square inputs or a product larger than `dimension_cap`.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b,
                     Eigen::Index dimension_cap = kDefaultDimensionCap);

struct CoherentAmplitudes {
  ComplexVector amplitudes;  ///< length n_fock, unit norm
  double truncated_weight;   ///< probability lost to the cutoff before renormalization
};

/// Truncated coherent state |alpha> on n_fock levels.
/// Throws TruncationError if |alpha|^2 > n_fock / 4 or if the weight lost to
/// truncation exceeds 1e-8.
CoherentAmplitudes coherent_state(Complex alpha, int n_fock);

/// Embeds a resonator state into a single cell with the qubit in |g> (qubit=0)
/// or |e> (qubit=1).
StateVector with_qubit(const ComplexVector& fock_amplitudes, int qubit);

/// Largest |entry| of a - b.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Largest |entry| of h - h^dagger.
double hermiticity_defect(const ComplexMatrix& h);

}  // namespace uscmem
