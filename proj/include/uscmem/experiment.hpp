#pragma once

// End-to-end experiments and their in-memory result bundles.

#include <optional>
#include <string>
#include <vector>

#include "uscmem/closed_dynamics.hpp"
#include "uscmem/open_dynamics.hpp"
#include "uscmem/protocols.hpp"

namespace uscmem {

enum class ExperimentKind {
  Spectrum,
  Storage,
  Retrieval,
  RoundTrip,
  PhaseMap,
  Noisy,
  Entangled,
  Convergence,
};

/// Accepts the subcommand names; throws ValidationError for anything else.
ExperimentKind parse_experiment_kind(const std::string& name);
const char* experiment_kind_name(ExperimentKind kind);

struct ExperimentSpec {
  std::string name = "roundtrip";
  ExperimentKind kind = ExperimentKind::RoundTrip;

  ModelParams model;           ///< closed single-cell runs
  int n_fock_noisy = 20;
  int n_fock_two_cell = 15;

  double total_time = 105.0;
  double omega_start = 0.0;
  int steps = kDefaultSweepSteps;
  int record_every = 10;

  QubitAmplitudes input;
  /// Decode phase; empty means optimize.
  std::optional<double> fixed_theta;
  int theta_points = 64;

  std::vector<double> landscape_times{105.0, 120.0};
  /// Extra round-trip T scan (empty: skipped).
  std::vector<double> scan_times;

  NoiseRates noise = NoiseRates::reference(0.1);
  /// "flat" or "ohmic" (J = gap / omega_eg).
  std::string rate_model = "flat";
  int k_levels = 12;
  int refresh_every = 20;

  std::vector<int> convergence_n_fock{30, 40};
  int spectrum_levels = 6;
  int spectrum_points = 101;

  double f_cav_hz = 5e9;

  /// Throws ValidationError listing every violation.
  void validate() const;
  /// One `key = value` line per resolved parameter, fixed order, 17 digits.
  std::string canonical_text() const;
  /// SHA-256 of canonical_text(), hex.
  std::string hash() const;
};

struct Curve {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct LandscapeTable {
  std::string name;
  PhaseLandscape data;
};

struct Scalar {
  std::string name;
  double value;
  std::string spec_hash;
};

struct ResultBundle {
  std::string experiment;
  std::string spec_hash;
  std::string canonical_spec;
  std::vector<Curve> curves;
  std::vector<LandscapeTable> landscapes;
  std::vector<Scalar> scalars;
  /// One human-readable line for the terminal.
  std::string summary_line;

  const Scalar* find_scalar(const std::string& name) const;
};

/// Validates and runs `spec`. Errors keep their type (ValidationError or
/// NumericalError) and gain the failing stage's name in the message.
ResultBundle run_experiment(const ExperimentSpec& spec);

}  // namespace uscmem
