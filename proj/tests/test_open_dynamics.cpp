#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "uscmem/errors.hpp"
#include "uscmem/open_dynamics.hpp"

using namespace uscmem;

// Reference values: full Lindblad RK4 with per-step dressed rates,
// tests/oracles/derive_goldens.py --noisy.
namespace golden {
constexpr double kNoisyFlat = 0.9914365643;
constexpr double kNoisyOhmic = 0.9943781045;
}  // namespace golden

namespace {

MasterConfig config_for(const CouplingSchedule& s, int steps, int record_every) {
  MasterConfig cfg;
  cfg.propagator = PropagatorConfig::for_schedule(s, steps, record_every);
  cfg.k_levels = 8;
  return cfg;
}

}  // namespace

TEST(NoiseRates, ReferenceScalesWithQubitFrequency) {
  const auto r = NoiseRates::reference(0.1);
  EXPECT_DOUBLE_EQ(r.gamma_x, 1e-4);
  EXPECT_DOUBLE_EQ(r.gamma_y, 1e-4);
  EXPECT_DOUBLE_EQ(r.gamma_z, 1e-4);
  EXPECT_DOUBLE_EQ(r.gamma_r, 1e-5);
  NoiseRates bad;
  bad.gamma_x = -1.0;
  EXPECT_THROW(bad.validate(), ValidationError);
}

TEST(Dissipators, OnlyDownwardJumpsWithGoldenRuleRates) {
  const ModelParams p{1.0, 0.1, 1.0, 12};
  const ComplexMatrix h = build_rabi(p, 0.5);
  NoiseRates rates;
  rates.gamma_x = 0.01;
  const auto table = dressed_dissipators(h, rates, 6);
  ASSERT_FALSE(table.jumps.empty());
  const ComplexMatrix sx = pauli_op(PauliAxis::X, p.dims());
  for (const auto& j : table.jumps) {
    EXPECT_GT(table.energies(j.upper), table.energies(j.lower));
    const Complex m = table.basis.col(j.lower).dot(sx * table.basis.col(j.upper));
    EXPECT_NEAR(j.rate, 0.01 * std::norm(m), 1e-15);
    EXPECT_EQ(j.channel, NoiseChannel::SigmaX);
  }
  EXPECT_DOUBLE_EQ(table.decay_totals()(0), 0.0);
}

TEST(Dissipators, OhmicScalesByGap) {
  const ModelParams p{1.0, 0.1, 1.0, 12};
  const ComplexMatrix h = build_rabi(p, 0.5);
  NoiseRates rates;
  rates.gamma_r = 0.01;
  const auto flat = dressed_dissipators(h, rates, 6, flat_density());
  const auto ohmic = dressed_dissipators(h, rates, 6, ohmic_density(0.1));
  ASSERT_EQ(flat.jumps.size(), ohmic.jumps.size());
  for (std::size_t i = 0; i < flat.jumps.size(); ++i) {
    const double gap = flat.energies(flat.jumps[i].upper) - flat.energies(flat.jumps[i].lower);
    EXPECT_NEAR(ohmic.jumps[i].rate, flat.jumps[i].rate * gap / 0.1, 1e-15);
  }
  EXPECT_THROW(ohmic_density(0.0), ValidationError);
}

TEST(DensityMatrix, ValidationCatchesBadStates) {
  const HilbertDims d(3);
  EXPECT_NO_THROW(DensityMatrix::maximally_mixed(d).validate());
  ComplexMatrix m = ComplexMatrix::Zero(6, 6);
  m(0, 0) = 1.0;
  m(0, 1) = 0.1;
  EXPECT_THROW(DensityMatrix(d, m).validate(), NumericalError);
  m(0, 1) = 0.0;
  m(1, 1) = -0.5;
  m(0, 0) = 1.5;
  EXPECT_THROW(DensityMatrix(d, m).validate(), NumericalError);
  EXPECT_THROW(DensityMatrix(d, ComplexMatrix::Zero(4, 4)), ValidationError);
}

TEST(Master, NoiselessMatchesSchrodinger) {
  const ModelParams p{1.0, 0.1, 1.0, 10};
  const auto s = CouplingSchedule::storage(p, 20.0);
  const auto psi0 = encode_input(p.dims(), QubitAmplitudes{});
  const auto cfg = config_for(s, 1000, 1000);
  const auto rho = evolve_master(p, s, DensityMatrix::pure(psi0), NoiseRates{}, cfg).final_state();
  const auto psi = propagate(p, s, psi0, cfg.propagator).final_state();
  EXPECT_NEAR(fidelity_mixed(rho, psi), 1.0, 1e-10);
}

TEST(Master, TraceHermiticityPositivity) {
  const ModelParams p{1.0, 0.1, 1.0, 10};
  const auto s = CouplingSchedule::storage(p, 30.0);
  NoiseRates strong{0.01, 0.01, 0.01, 0.005};
  const auto tr = evolve_master(p, s, DensityMatrix::pure(encode_input(p.dims(), QubitAmplitudes{})),
                                strong, config_for(s, 1000, 50));
  for (const auto& rho : tr.states) {
    EXPECT_LT(std::abs(rho.trace() - 1.0), 1e-8);
    EXPECT_LT(hermiticity_defect(rho.entries), 1e-12);
    EXPECT_GT(rho.min_eigenvalue(), -1e-8);
  }
  const double purity = (tr.final_state().entries * tr.final_state().entries).trace().real();
  EXPECT_LT(purity, 0.999);
}

TEST(Master, DecayTowardsGroundIsMonotone) {
  const ModelParams p{1.0, 0.1, 0.5, 10};
  const CouplingSchedule s{0.5, 0.5, 100.0};
  const ComplexMatrix h = build_rabi(p, 0.5);
  const Spectrum sp = eigendecompose(h, 3, p.dims());
  NoiseRates rates{0.02, 0.0, 0.0, 0.02};
  const auto tr = evolve_master(p, s, DensityMatrix::pure(sp.state(2)), rates, config_for(s, 1000, 10));
  double previous = -1.0;
  for (const auto& rho : tr.states) {
    const double pop = fidelity_mixed(rho, sp.state(0));
    EXPECT_GE(pop, previous - 1e-12);
    previous = pop;
  }
  EXPECT_GT(previous, 0.5);
}

TEST(Master, BestCorrectedFidelityMatchesGrid) {
  const ModelParams p{1.0, 0.1, 1.0, 4};
  ComplexVector a = ComplexVector::Zero(8), b = ComplexVector::Zero(8);
  a(0) = std::polar(0.7, 0.2);
  a(4) = std::polar(0.7, 1.4);
  b(1) = 1.0;
  const ComplexMatrix m = 0.9 * a.normalized() * a.normalized().adjoint() + 0.1 * b * b.adjoint();
  const DensityMatrix rho(p.dims(), m);
  const QubitAmplitudes in;
  const auto [best, theta] = best_corrected_fidelity(rho, in);
  double grid = 0.0;
  for (int j = 0; j < 7200; ++j) {
    const double th = 2 * std::numbers::pi * j / 7200;
    grid = std::max(grid, fidelity_mixed(rho, apply_phase_correction(encode_input(p.dims(), in), -th)));
  }
  EXPECT_NEAR(best, grid, 1e-6);
  EXPECT_GE(best, grid - 1e-15);
  EXPECT_NEAR(fidelity_mixed(rho, apply_phase_correction(encode_input(p.dims(), in), -theta)), best, 1e-14);
}

TEST(NoisyRoundTrip, MatchesReferenceSolver) {
  ModelParams p;
  p.n_fock = 20;
  const QubitAmplitudes in;
  MasterConfig cfg;
  cfg.propagator.record_every = 100;
  const auto flat = noisy_round_trip(p, in, 105.0, NoiseRates::reference(0.1), cfg);
  EXPECT_NEAR(flat.final_fidelity, golden::kNoisyFlat, 2e-6);
  cfg.density = ohmic_density(0.1);
  const auto ohmic = noisy_round_trip(p, in, 105.0, NoiseRates::reference(0.1), cfg);
  EXPECT_NEAR(ohmic.final_fidelity, golden::kNoisyOhmic, 2e-6);
  EXPECT_NEAR(flat.storage_fidelity.front(), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(flat.retrieval.times.back(), 210.0);
}
