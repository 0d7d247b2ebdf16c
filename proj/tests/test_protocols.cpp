#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "uscmem/errors.hpp"
#include "uscmem/linalg.hpp"
#include "uscmem/protocols.hpp"

using namespace uscmem;

// Reference values: sparse joint-Hamiltonian propagation with scipy expm_multiply,
// tests/oracles/derive_goldens.py --two-cell.
namespace golden {
constexpr double kStoredTarget = 0.9997019421;
constexpr double kRoundTrip = 0.9992243005;
}  // namespace golden

TEST(BeamSplitter, HongOuMandelSuppression) {
  const auto out = beam_splitter(TwoModeState::fock(5, 1, 1), 0.5);
  EXPECT_LT(std::abs(out.amplitude(1, 1)), 1e-10);
  EXPECT_NEAR(std::norm(out.amplitude(2, 0)), 0.5, 1e-12);
  EXPECT_NEAR(std::norm(out.amplitude(0, 2)), 0.5, 1e-12);
}

TEST(BeamSplitter, SinglePhotonSplitsByTransmissivity) {
  const auto out = beam_splitter(TwoModeState::fock(4, 0, 1), 0.3);
  EXPECT_NEAR(out.amplitude(0, 1).real(), std::sqrt(0.3), 1e-12);
  EXPECT_NEAR(out.amplitude(1, 0).real(), std::sqrt(0.7), 1e-12);
  EXPECT_NEAR(out.amplitudes.norm(), 1.0, 1e-12);
}

TEST(BeamSplitter, ConservesPhotonNumber) {
  const int n = 6;
  ComplexVector v = ComplexVector::Zero(n * n);
  v(1 * n + 2) = 0.6;
  v(0 * n + 1) = Complex(0, 0.8);
  const auto out = beam_splitter(TwoModeState(n, v), 0.5, 0.7);
  double w3 = 0.0, w1 = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a + b == 3) w3 += std::norm(out.amplitude(a, b));
      if (a + b == 1) w1 += std::norm(out.amplitude(a, b));
    }
  }
  EXPECT_NEAR(w3, 0.36, 1e-12);
  EXPECT_NEAR(w1, 0.64, 1e-12);
}

TEST(BeamSplitter, RejectsTruncatedInput) {
  EXPECT_THROW(beam_splitter(TwoModeState::fock(3, 1, 1), 0.5), TruncationError);
  EXPECT_THROW(beam_splitter(TwoModeState::fock(4, 0, 1), 1.5), ValidationError);
}

TEST(TwoCell, PreparedStateIsSplitExcitation) {
  const ModelParams p{1.0, 0.1, 1.0, 4};
  const StateVector psi = prepare_two_cell(p);
  const HilbertDims one = p.dims();
  const Eigen::Index d = one.cell_dim();
  const double r = std::numbers::sqrt2 / 2;
  EXPECT_NEAR(std::abs(psi.amplitudes(one.index(0, 0) * d + one.index(1, 0))), r, 1e-12);
  EXPECT_NEAR(std::abs(psi.amplitudes(one.index(1, 0) * d + one.index(0, 0))), r, 1e-12);
  EXPECT_NEAR(psi.norm(), 1.0, 1e-12);
  EXPECT_NEAR(entanglement_entropy(psi), 1.0, 1e-12);
  EXPECT_NEAR(joint_parity(psi), -1.0, 1e-12);
}

TEST(TwoCell, ProductStateHasNoEntropy) {
  const HilbertDims two(4, 2);
  ComplexVector v = ComplexVector::Zero(two.total_dim());
  v(3) = 1.0;
  EXPECT_NEAR(entanglement_entropy(StateVector(two, v)), 0.0, 1e-12);
}

TEST(TwoCell, FactorizedStepMatchesJointExponential) {
  const ModelParams p{1.0, 0.1, 1.0, 5};
  const auto s = CouplingSchedule::storage(p, 5.0);
  const auto cfg = PropagatorConfig::for_schedule(s, 500, 500);
  const StateVector psi0 = prepare_two_cell(p);
  const StateVector fast = propagate_two_cell(p, p, s, psi0, cfg).final_state();

  const ComplexMatrix id = identity_op(p.dims());
  ComplexVector psi = psi0.amplitudes;
  const double dt = 5.0 / 500;
  for (int k = 0; k < 500; ++k) {
    const ComplexMatrix h1 = hamiltonian_at(p, s, (k + 0.5) * dt);
    const ComplexMatrix joint = tensor(h1, id) + tensor(id, h1);
    psi = expm_hermitian(joint, dt) * psi;
  }
  EXPECT_LT((fast.amplitudes - psi).norm(), 1e-10);
}

TEST(TwoCell, JointParityIsConserved) {
  const ModelParams p{1.0, 0.1, 1.0, 6};
  const auto s = CouplingSchedule::storage(p, 20.0);
  const auto tr = propagate_two_cell(p, p, s, prepare_two_cell(p), PropagatorConfig::for_schedule(s, 1000, 100));
  for (const auto& psi : tr.states) {
    EXPECT_NEAR(joint_parity(psi), -1.0, 1e-7);
    EXPECT_NEAR(psi.norm(), 1.0, 1e-9);
  }
}

TEST(LocalPhases, FitMatchesBruteForce) {
  const std::array<Complex, 4> s{Complex(0.1, 0.05), std::polar(0.5, 0.7), std::polar(0.45, -1.9), Complex(0.02, 0)};
  const auto fit = fit_local_phases(s);
  auto f = [&](double t1, double t2) {
    return std::norm(s[0] + std::polar(1.0, -t2) * s[1] + std::polar(1.0, -t1) * s[2] +
                     std::polar(1.0, -t1 - t2) * s[3]);
  };
  double brute = 0.0;
  for (int i = 0; i < 400; ++i) {
    for (int j = 0; j < 400; ++j) brute = std::max(brute, f(2 * std::numbers::pi * i / 400, 2 * std::numbers::pi * j / 400));
  }
  EXPECT_GE(fit.fidelity, brute - 1e-12);
  EXPECT_NEAR(fit.fidelity, brute, 1e-3);
  EXPECT_NEAR(f(fit.theta1, fit.theta2), fit.fidelity, 1e-12);
}

TEST(LocalPhases, DecodedFidelityByDirectContraction) {
  const ModelParams p{1.0, 0.1, 1.0, 3};
  const StateVector initial = prepare_two_cell(p);
  const HilbertDims one = p.dims();
  ComplexVector v = initial.amplitudes;
  const Eigen::Index d = one.cell_dim();
  v(one.index(0, 0) * d + one.index(1, 0)) *= std::polar(1.0, 0.9);
  v(one.index(1, 0) * d + one.index(0, 0)) *= std::polar(1.0, 2.1);
  v(5) = 0.3;
  const StateVector psi(initial.dims, v.normalized());
  const auto fit = decoded_fidelity(psi, initial);

  ComplexMatrix c = ComplexMatrix::Identity(d, d);
  for (int n = 0; n < p.n_fock; ++n) c(one.index(1, n), one.index(1, n)) = std::polar(1.0, -fit.theta1);
  ComplexMatrix c2 = ComplexMatrix::Identity(d, d);
  for (int n = 0; n < p.n_fock; ++n) c2(one.index(1, n), one.index(1, n)) = std::polar(1.0, -fit.theta2);
  const ComplexVector decoded = tensor(c, c2) * psi.amplitudes;
  EXPECT_NEAR(std::norm(initial.amplitudes.dot(decoded)), fit.fidelity, 1e-12);
  EXPECT_NEAR(fit.fidelity, 1.0 / (1.0 + 0.09), 1e-9);
}

TEST(TwoCellRoundTrip, MatchesReferencePropagation) {
  ModelParams p;
  p.n_fock = 15;
  const auto rt = two_cell_round_trip(p, 105.0, kDefaultSweepSteps, 100);
  EXPECT_NEAR(rt.stored_target.fidelity, golden::kStoredTarget, 1e-8);
  EXPECT_NEAR(rt.decoded.fidelity, golden::kRoundTrip, 1e-8);
  EXPECT_NEAR(entanglement_entropy(rt.storage.trajectory.final_state()), 1.0, 1e-3);
}
