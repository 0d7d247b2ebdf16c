#include "uscmem/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <utility>

#include "uscmem/errors.hpp"
#include "uscmem/report.hpp"

namespace uscmem {

namespace {

template <class F>
auto stage(const char* name, F&& fn) -> decltype(fn()) {
  const std::string prefix = std::string("stage '") + name + "': ";
  try {
    return fn();
  } catch (const ValidationError& e) {
    throw ValidationError(prefix + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(prefix + e.what());
  }
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string fixed8(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8f", v);
  return buf;
}

template <class T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    if constexpr (std::is_floating_point_v<T>) {
      out += format_number(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

class BundleBuilder {
 public:
  explicit BundleBuilder(const ExperimentSpec& spec) {
    bundle_.experiment = spec.name;
    bundle_.canonical_spec = spec.canonical_text();
    bundle_.spec_hash = sha256_hex(bundle_.canonical_spec);
  }
  void scalar(std::string name, double value) {
    bundle_.scalars.push_back({std::move(name), value, bundle_.spec_hash});
  }
  void curve(Curve c) { bundle_.curves.push_back(std::move(c)); }
  void landscape(std::string name, PhaseLandscape data) {
    bundle_.landscapes.push_back({std::move(name), std::move(data)});
  }
  void summary(std::string line) { bundle_.summary_line = std::move(line); }
  ResultBundle finish() { return std::move(bundle_); }

 private:
  ResultBundle bundle_;
};

// Cat-approximant fidelities along a trajectory, and the best overlap of the
// final state with alpha_F |psi_G> + beta_F e^{i theta} |psi_E>.
struct AdiabaticDiagnostics {
  std::vector<double> f_ground;
  std::vector<double> f_excited;
  double target_fidelity = 0.0;
  double target_theta = 0.0;
};

AdiabaticDiagnostics diagnose(const ModelParams& params, const Trajectory& traj,
                              const QubitAmplitudes& input) {
  AdiabaticDiagnostics out;
  const std::vector<Spectrum> tracked = track_spectrum(params, traj.couplings, 2);
  for (std::size_t i = 0; i < tracked.size(); ++i) {
    const double omega = std::max(0.0, traj.couplings[i]);
    const StateVector g = cat_approximant(params, omega, CatBranch::Ground);
    const StateVector e = cat_approximant(params, omega, CatBranch::Excited);
    out.f_ground.push_back(std::norm(g.overlap(tracked[i].state(0))));
    out.f_excited.push_back(std::norm(e.overlap(tracked[i].state(1))));
  }
  const ComplexVector& psi = traj.final_state().amplitudes;
  const Complex a = std::conj(input.alpha) * tracked.back().states.col(0).dot(psi);
  const Complex b = std::conj(input.beta) * tracked.back().states.col(1).dot(psi);
  out.target_fidelity = std::pow(std::abs(a) + std::abs(b), 2);
  if (std::abs(a) > 0.0 && std::abs(b) > 0.0) {
    out.target_theta = std::fmod(std::arg(b) - std::arg(a) + 4.0 * std::numbers::pi,
                                 2.0 * std::numbers::pi);
  }
  return out;
}

Curve sweep_curve(std::string name, const std::vector<double>& times,
                  const std::vector<double>& couplings, const std::vector<double>& fidelity,
                  const AdiabaticDiagnostics* diag = nullptr) {
  Curve c{std::move(name), {"t", "omega", "F_s"}, {}};
  if (diag) {
    c.columns.push_back("F_G");
    c.columns.push_back("F_E");
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::vector<double> row{times[i], couplings[i], fidelity[i]};
    if (diag) {
      row.push_back(diag->f_ground[i]);
      row.push_back(diag->f_excited[i]);
    }
    c.rows.push_back(std::move(row));
  }
  return c;
}

ResultBundle run_spectrum(const ExperimentSpec& spec) {
  BundleBuilder out(spec);
  const ModelParams& p = spec.model;
  const RabiTerms terms(p);
  Curve c{"spectrum", {"omega"}, {}};
  for (int j = 0; j < spec.spectrum_levels; ++j) c.columns.push_back("E" + std::to_string(j));
  for (int j = 0; j < spec.spectrum_levels; ++j) c.columns.push_back("P" + std::to_string(j));
  stage("spectrum", [&] {
    for (int i = 0; i < spec.spectrum_points; ++i) {
      const double omega = p.coupling_max * i / (spec.spectrum_points - 1);
      const Spectrum s = eigendecompose(terms.at(omega), spec.spectrum_levels, p.dims());
      std::vector<double> row{omega};
      for (int j = 0; j < spec.spectrum_levels; ++j) row.push_back(s.energies(j));
      for (int j = 0; j < spec.spectrum_levels; ++j) row.push_back(s.parities[j]);
      c.rows.push_back(std::move(row));
    }
  });
  out.curve(std::move(c));

  const Spectrum top = stage("spectrum", [&] { return eigendecompose(terms.at(p.coupling_max), 2, p.dims()); });
  const double fg = stage("cat approximant", [&] {
    return std::norm(cat_approximant(p, p.coupling_max, CatBranch::Ground).overlap(top.state(0)));
  });
  const double fe = stage("cat approximant", [&] {
    return std::norm(cat_approximant(p, p.coupling_max, CatBranch::Excited).overlap(top.state(1)));
  });
  out.scalar("ground_energy", top.energies(0));
  out.scalar("gap", top.energies(1) - top.energies(0));
  out.scalar("mean_photon_ground", mean_photon(top.state(0)));
  out.scalar("F_G", fg);
  out.scalar("F_E", fe);
  out.summary("spectrum: Omega0=" + short_number(p.coupling_max) + " E0=" + fixed8(top.energies(0)) +
              " gap=" + fixed8(top.energies(1) - top.energies(0)) + " F_G=" + fixed8(fg) +
              " F_E=" + fixed8(fe));
  return out.finish();
}

ResultBundle run_storage(const ExperimentSpec& spec) {
  BundleBuilder out(spec);
  const auto schedule = CouplingSchedule::storage(spec.model, spec.total_time, spec.omega_start);
  const auto cfg = PropagatorConfig::for_schedule(schedule, spec.steps, spec.record_every);
  const SweepResult run = stage("storage", [&] { return storage_run(spec.model, spec.input, schedule, cfg); });
  const auto diag = stage("adiabatic diagnostics", [&] { return diagnose(spec.model, run.trajectory, spec.input); });
  out.curve(sweep_curve("storage", run.trajectory.times, run.trajectory.couplings, run.fidelity, &diag));
  out.scalar("F_s_final", run.final_fidelity());
  out.scalar("target_fidelity", diag.target_fidelity);
  out.scalar("theta_target", diag.target_theta);
  out.summary("storage: T=" + short_number(spec.total_time) + " target_fidelity=" +
              fixed8(diag.target_fidelity) + " theta=" + fixed8(diag.target_theta));
  return out.finish();
}

ResultBundle run_retrieval(const ExperimentSpec& spec) {
  BundleBuilder out(spec);
  const ModelParams& p = spec.model;
  const auto schedule = CouplingSchedule::retrieval(p, spec.total_time, spec.omega_start);
  const auto cfg = PropagatorConfig::for_schedule(schedule, spec.steps, spec.record_every);
  const StateVector stored = stage("prepare stored state", [&] {
    spec.input.validate();
    const Spectrum s = eigendecompose(build_rabi(p, p.coupling_max), 2, p.dims());
    return StateVector(p.dims(), spec.input.alpha * s.states.col(0) + spec.input.beta * s.states.col(1));
  });
  const Trajectory traj = stage("retrieval", [&] { return propagate(p, schedule, stored, cfg); });
  const double theta = spec.fixed_theta.value_or(optimal_phase(traj.final_state(), spec.input));
  std::vector<double> fidelity;
  for (const auto& psi : traj.states) fidelity.push_back(corrected_fidelity(psi, spec.input, theta));
  out.curve(sweep_curve("retrieval", traj.times, traj.couplings, fidelity));
  out.scalar("F_s", fidelity.back());
  out.scalar("theta", theta);
  out.summary("retrieval: T=" + short_number(spec.total_time) + " F_s=" + fixed8(fidelity.back()) +
              " theta=" + fixed8(theta));
  return out.finish();
}

ResultBundle run_round_trip(const ExperimentSpec& spec) {
  BundleBuilder out(spec);
  const ModelParams& p = spec.model;
  RoundTripResult rt = stage("roundtrip", [&] {
    return round_trip(p, spec.input, spec.total_time, spec.steps, spec.record_every, spec.omega_start);
  });
  if (spec.fixed_theta) {
    rt.theta_opt = *spec.fixed_theta;
    rt.retrieval.theta = rt.theta_opt;
    rt.retrieval.fidelity.clear();
    for (const auto& psi : rt.retrieval.trajectory.states) {
      rt.retrieval.fidelity.push_back(corrected_fidelity(psi, spec.input, rt.theta_opt));
    }
    rt.final_fidelity = rt.retrieval.final_fidelity();
  }
  const auto diag = stage("adiabatic diagnostics", [&] { return diagnose(p, rt.storage.trajectory, spec.input); });
  out.curve(sweep_curve("storage", rt.storage.trajectory.times, rt.storage.trajectory.couplings,
                        rt.storage.fidelity, &diag));
  out.curve(sweep_curve("retrieval", rt.retrieval.trajectory.times,
                        rt.retrieval.trajectory.couplings, rt.retrieval.fidelity));
  out.scalar("F_s", rt.final_fidelity);
  out.scalar("theta_opt", rt.theta_opt);
  out.scalar("storage_target_fidelity", diag.target_fidelity);
  out.scalar("physical_time_ns", 1e9 * physical_time(spec.total_time, spec.f_cav_hz));

  if (!spec.scan_times.empty()) {
    const EvolutionTimeScan scan = stage("T scan", [&] {
      return optimal_evolution_time(p, spec.input, spec.scan_times, spec.steps, spec.omega_start);
    });
    Curve c{"t_scan", {"T", "F_s", "theta_opt"}, {}};
    for (std::size_t i = 0; i < scan.total_times.size(); ++i) {
      c.rows.push_back({scan.total_times[i], scan.fidelity[i], scan.theta_opt[i]});
    }
    out.curve(std::move(c));
    out.scalar("T_best", scan.best_time);
    out.scalar("F_s_best", scan.best_fidelity);
  }
  out.summary("roundtrip: T=" + short_number(spec.total_time) + " F_s=" + fixed8(rt.final_fidelity) +
              " theta_opt=" + fixed8(rt.theta_opt));
  return out.finish();
}

ResultBundle run_phase_map(const ExperimentSpec& spec) {
  BundleBuilder out(spec);
  std::string summary = "phase-map:";
  for (double T : spec.landscape_times) {
    const std::string tag = "T" + short_number(T);
    PhaseLandscape land = stage("phase landscape", [&] {
      const auto schedule = CouplingSchedule::storage(spec.model, T, spec.omega_start);
      const auto cfg = PropagatorConfig::for_schedule(schedule, spec.steps, spec.record_every);
      return phase_landscape(spec.model, spec.input, schedule, cfg, spec.theta_points);
    });
    const double ridge = *std::min_element(land.max_fidelity.begin(), land.max_fidelity.end());
    out.scalar("ridge_min_" + tag, ridge);
    out.scalar("theta_opt_final_" + tag, land.theta_opt.back());
    summary += " " + tag + " ridge_min=" + fixed8(ridge) + " theta_opt(T)=" + fixed8(land.theta_opt.back());
    out.landscape(tag, std::move(land));
  }
  out.summary(summary);
  return out.finish();
}

ResultBundle run_noisy(const ExperimentSpec& spec) {
  BundleBuilder out(spec);
  ModelParams p = spec.model;
  p.n_fock = spec.n_fock_noisy;
  MasterConfig cfg;
  cfg.propagator.record_every = spec.record_every;
  cfg.k_levels = spec.k_levels;
  cfg.refresh_every = spec.refresh_every;
  cfg.density = spec.rate_model == "ohmic" ? ohmic_density(p.omega_eg) : flat_density();
  NoisyRoundTrip rt = stage("noisy round trip", [&] {
    return noisy_round_trip(p, spec.input, spec.total_time, spec.noise, cfg, spec.steps, spec.omega_start);
  });
  if (spec.fixed_theta) {
    const StateVector target = apply_phase_correction(encode_input(p.dims(), spec.input), -*spec.fixed_theta);
    rt.theta_opt = *spec.fixed_theta;
    rt.retrieval_fidelity.clear();
    for (const auto& rho : rt.retrieval.states) rt.retrieval_fidelity.push_back(fidelity_mixed(rho, target));
    rt.final_fidelity = rt.retrieval_fidelity.back();
  }
  out.curve(sweep_curve("storage", rt.storage.times, rt.storage.couplings, rt.storage_fidelity));
  out.curve(sweep_curve("retrieval", rt.retrieval.times, rt.retrieval.couplings, rt.retrieval_fidelity));
  out.scalar("F_s", rt.final_fidelity);
  out.scalar("theta_opt", rt.theta_opt);
  out.summary("noisy: F_s=" + fixed8(rt.final_fidelity) + " theta_opt=" + fixed8(rt.theta_opt) +
              " rate_model=" + spec.rate_model);
  return out.finish();
}

ResultBundle run_entangled(const ExperimentSpec& spec) {
  BundleBuilder out(spec);
  ModelParams p = spec.model;
  p.n_fock = spec.n_fock_two_cell;
  const double* fixed = spec.fixed_theta ? &*spec.fixed_theta : nullptr;
  const TwoCellRoundTrip rt = stage("two-cell round trip", [&] {
    return two_cell_round_trip(p, spec.total_time, spec.steps, spec.record_every, spec.omega_start, fixed);
  });
  out.curve(sweep_curve("storage", rt.storage.trajectory.times, rt.storage.trajectory.couplings,
                        rt.storage.fidelity));
  out.curve(sweep_curve("retrieval", rt.retrieval.trajectory.times,
                        rt.retrieval.trajectory.couplings, rt.retrieval.fidelity));
  out.scalar("target_fidelity", rt.stored_target.fidelity);
  out.scalar("theta1", rt.stored_target.theta1);
  out.scalar("theta2", rt.stored_target.theta2);
  out.scalar("F_bar", rt.decoded.fidelity);
  out.scalar("decode_theta1", rt.decoded.theta1);
  out.scalar("decode_theta2", rt.decoded.theta2);
  out.scalar("entropy_initial", entanglement_entropy(rt.storage.trajectory.states.front()));
  out.scalar("entropy_stored", entanglement_entropy(rt.storage.trajectory.final_state()));
  out.summary("entangled: target_fidelity=" + fixed8(rt.stored_target.fidelity) +
              " F_bar=" + fixed8(rt.decoded.fidelity));
  return out.finish();
}

ResultBundle run_convergence(const ExperimentSpec& spec) {
  BundleBuilder out(spec);
  Curve c{"convergence", {"n_fock", "E0", "E1", "E2", "E3"}, {}};
  for (int n : spec.convergence_n_fock) {
    ModelParams p = spec.model;
    p.n_fock = n;
    const Spectrum s = stage("convergence", [&] { return eigendecompose(build_rabi(p, p.coupling_max), 4, p.dims()); });
    c.rows.push_back({static_cast<double>(n), s.energies(0), s.energies(1), s.energies(2), s.energies(3)});
  }
  double shift = 0.0;
  if (c.rows.size() >= 2) {
    const auto& a = c.rows[c.rows.size() - 2];
    const auto& b = c.rows.back();
    for (std::size_t j = 1; j < a.size(); ++j) shift = std::max(shift, std::abs(a[j] - b[j]));
  }
  out.curve(std::move(c));
  out.scalar("max_energy_shift", shift);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", shift);
  out.summary("convergence: max_energy_shift=" + std::string(buf));
  return out.finish();
}

}  // namespace

ExperimentKind parse_experiment_kind(const std::string& name) {
  static const std::vector<std::pair<std::string, ExperimentKind>> table{
      {"spectrum", ExperimentKind::Spectrum},       {"storage", ExperimentKind::Storage},
      {"retrieval", ExperimentKind::Retrieval},     {"roundtrip", ExperimentKind::RoundTrip},
      {"phase-map", ExperimentKind::PhaseMap},      {"noisy", ExperimentKind::Noisy},
      {"entangled", ExperimentKind::Entangled},     {"convergence", ExperimentKind::Convergence},
  };
  for (const auto& [key, kind] : table) {
    if (key == name) return kind;
  }
  throw ValidationError("unknown experiment '" + name + "'");
}

const char* experiment_kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Spectrum: return "spectrum";
    case ExperimentKind::Storage: return "storage";
    case ExperimentKind::Retrieval: return "retrieval";
    case ExperimentKind::RoundTrip: return "roundtrip";
    case ExperimentKind::PhaseMap: return "phase-map";
    case ExperimentKind::Noisy: return "noisy";
    case ExperimentKind::Entangled: return "entangled";
    case ExperimentKind::Convergence: return "convergence";
  }
  return "?";
}

void ExperimentSpec::validate() const {
  std::vector<std::string> problems;
  auto check = [&](bool ok, const char* msg) {
    if (!ok) problems.emplace_back(msg);
  };
  try {
    model.validate();
  } catch (const ValidationError& e) {
    problems.emplace_back(e.what());
  }
  check(n_fock_noisy >= 2, "n_fock_noisy must be >= 2");
  check(n_fock_two_cell >= 2, "n_fock_two_cell must be >= 2");
  check(total_time > 0.0, "T must be > 0");
  check(omega_start >= 0.0, "omega_start must be >= 0");
  check(steps >= 500, "steps must be >= 500 (dt <= T/500)");
  check(record_every >= 1, "record_every must be >= 1");
  check(std::abs(std::norm(input.alpha) + std::norm(input.beta) - 1.0) <= 1e-9,
        "|alpha_F|^2 + |beta_F|^2 must equal 1");
  check(theta_points >= 32, "theta_points must be >= 32");
  check(!landscape_times.empty(), "landscape_T must not be empty");
  for (double T : landscape_times) check(T > 0.0, "landscape_T entries must be > 0");
  for (double T : scan_times) check(T > 0.0, "scan_T entries must be > 0");
  check(noise.gamma_x >= 0 && noise.gamma_y >= 0 && noise.gamma_z >= 0 && noise.gamma_r >= 0,
        "noise rates must be >= 0");
  check(rate_model == "flat" || rate_model == "ohmic", "rate_model must be flat or ohmic");
  check(k_levels >= 1 && k_levels <= 2 * n_fock_noisy, "k_levels must lie in [1, 2 n_fock_noisy]");
  check(refresh_every >= 1, "refresh_every must be >= 1");
  check(!convergence_n_fock.empty(), "n_fock_grid must not be empty");
  for (int n : convergence_n_fock) check(n >= 2, "n_fock_grid entries must be >= 2");
  check(spectrum_levels >= 1 && spectrum_levels <= 2 * model.n_fock,
        "spectrum_levels must lie in [1, 2 n_fock]");
  check(spectrum_points >= 2, "spectrum_points must be >= 2");
  check(f_cav_hz > 0.0, "f_cav_hz must be > 0");
  if (!problems.empty()) {
    std::ostringstream msg;
    msg << "invalid experiment '" << name << "':";
    for (const auto& p : problems) msg << "\n  - " << p;
    throw ValidationError(msg.str());
  }
}

std::string ExperimentSpec::canonical_text() const {
  std::ostringstream s;
  auto kv = [&](const char* key, const std::string& value) { s << key << " = " << value << "\n"; };
  auto num = [&](const char* key, double v) { kv(key, format_number(v)); };
  kv("experiment", experiment_kind_name(kind));
  num("omega_cav", model.omega_cav);
  num("omega_eg", model.omega_eg);
  num("Omega0", model.coupling_max);
  kv("n_fock", std::to_string(model.n_fock));
  kv("n_fock_noisy", std::to_string(n_fock_noisy));
  kv("n_fock_two_cell", std::to_string(n_fock_two_cell));
  num("T", total_time);
  num("omega_start", omega_start);
  kv("steps", std::to_string(steps));
  kv("record_every", std::to_string(record_every));
  num("alpha_F", std::abs(input.alpha));
  num("alpha_phase", std::arg(input.alpha));
  num("beta_F", std::abs(input.beta));
  num("beta_phase", std::arg(input.beta));
  kv("theta", fixed_theta ? format_number(*fixed_theta) : "optimize");
  kv("theta_points", std::to_string(theta_points));
  kv("landscape_T", join(landscape_times));
  kv("scan_T", join(scan_times));
  num("gamma_x", noise.gamma_x);
  num("gamma_y", noise.gamma_y);
  num("gamma_z", noise.gamma_z);
  num("gamma_r", noise.gamma_r);
  kv("rate_model", rate_model);
  kv("k_levels", std::to_string(k_levels));
  kv("refresh_every", std::to_string(refresh_every));
  kv("n_fock_grid", join(convergence_n_fock));
  kv("spectrum_levels", std::to_string(spectrum_levels));
  kv("spectrum_points", std::to_string(spectrum_points));
  num("f_cav_hz", f_cav_hz);
  return s.str();
}

std::string ExperimentSpec::hash() const { return sha256_hex(canonical_text()); }

const Scalar* ResultBundle::find_scalar(const std::string& name) const {
  for (const auto& s : scalars) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

ResultBundle run_experiment(const ExperimentSpec& spec) {
  stage("validate", [&] { spec.validate(); });
  switch (spec.kind) {
    case ExperimentKind::Spectrum: return run_spectrum(spec);
    case ExperimentKind::Storage: return run_storage(spec);
    case ExperimentKind::Retrieval: return run_retrieval(spec);
    case ExperimentKind::RoundTrip: return run_round_trip(spec);
    case ExperimentKind::PhaseMap: return run_phase_map(spec);
    case ExperimentKind::Noisy: return run_noisy(spec);
    case ExperimentKind::Entangled: return run_entangled(spec);
    case ExperimentKind::Convergence: return run_convergence(spec);
  }
  throw ValidationError("unhandled experiment kind");
}

}  // namespace uscmem
