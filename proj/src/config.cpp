#include "uscmem/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "uscmem/errors.hpp"

namespace uscmem {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v) {
  const std::string t = trim(v);
  char* end = nullptr;
  const double x = std::strtod(t.c_str(), &end);
  if (t.empty() || *end != '\0') throw ValidationError("expected a number, got '" + t + "'");
  if (!std::isfinite(x)) throw ValidationError("expected a finite number, got '" + t + "'");
  return x;
}

long to_long(const std::string& v) {
  const std::string t = trim(v);
  long x = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ValidationError("expected an integer, got '" + t + "'");
  }
  return x;
}

int to_int(const std::string& v) {
  const long x = to_long(v);
  if (x < -2147483647L || x > 2147483647L) throw ValidationError("integer out of range");
  return static_cast<int>(x);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!trim(item).empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> to_doubles(const std::string& v) {
  std::vector<double> out;
  for (const auto& s : split_list(v)) out.push_back(to_double(s));
  return out;
}

std::vector<int> to_ints(const std::string& v) {
  std::vector<int> out;
  for (const auto& s : split_list(v)) out.push_back(to_int(s));
  return out;
}

struct Pending {
  RunConfig cfg;
  double alpha_f = std::numbers::sqrt2 / 2.0;
  double beta_f = std::numbers::sqrt2 / 2.0;
  double alpha_phase = 0.0;
  double beta_phase = 0.0;
  std::optional<std::string> experiment;
  std::optional<double> gamma_x, gamma_y, gamma_z, gamma_r;
};

using Setter = std::function<void(Pending&, const std::string&)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> table{
      {"experiment", [](Pending& p, const std::string& v) { p.experiment = trim(v); }},
      {"omega_cav", [](Pending& p, const std::string& v) { p.cfg.spec.model.omega_cav = to_double(v); }},
      {"omega_eg", [](Pending& p, const std::string& v) { p.cfg.spec.model.omega_eg = to_double(v); }},
      {"Omega0", [](Pending& p, const std::string& v) { p.cfg.spec.model.coupling_max = to_double(v); }},
      {"n_fock", [](Pending& p, const std::string& v) { p.cfg.spec.model.n_fock = to_int(v); }},
      {"n_fock_noisy", [](Pending& p, const std::string& v) { p.cfg.spec.n_fock_noisy = to_int(v); }},
      {"n_fock_two_cell", [](Pending& p, const std::string& v) { p.cfg.spec.n_fock_two_cell = to_int(v); }},
      {"T", [](Pending& p, const std::string& v) { p.cfg.spec.total_time = to_double(v); }},
      {"omega_start", [](Pending& p, const std::string& v) { p.cfg.spec.omega_start = to_double(v); }},
      {"steps", [](Pending& p, const std::string& v) { p.cfg.spec.steps = to_int(v); }},
      {"record_every", [](Pending& p, const std::string& v) { p.cfg.spec.record_every = to_int(v); }},
      {"alpha_F", [](Pending& p, const std::string& v) {
         p.alpha_f = to_double(v);
         if (p.alpha_f < 0.0) throw ValidationError("magnitude must be >= 0");
       }},
      {"alpha_phase", [](Pending& p, const std::string& v) { p.alpha_phase = to_double(v); }},
      {"beta_F", [](Pending& p, const std::string& v) {
         p.beta_f = to_double(v);
         if (p.beta_f < 0.0) throw ValidationError("magnitude must be >= 0");
       }},
      {"beta_phase", [](Pending& p, const std::string& v) { p.beta_phase = to_double(v); }},
      {"theta",
       [](Pending& p, const std::string& v) {
         if (trim(v) == "optimize") {
           p.cfg.spec.fixed_theta.reset();
         } else {
           p.cfg.spec.fixed_theta = to_double(v);
         }
       }},
      {"theta_points", [](Pending& p, const std::string& v) { p.cfg.spec.theta_points = to_int(v); }},
      {"landscape_T", [](Pending& p, const std::string& v) { p.cfg.spec.landscape_times = to_doubles(v); }},
      {"scan_T", [](Pending& p, const std::string& v) { p.cfg.spec.scan_times = to_doubles(v); }},
      {"gamma_x", [](Pending& p, const std::string& v) { p.gamma_x = to_double(v); }},
      {"gamma_y", [](Pending& p, const std::string& v) { p.gamma_y = to_double(v); }},
      {"gamma_z", [](Pending& p, const std::string& v) { p.gamma_z = to_double(v); }},
      {"gamma_r", [](Pending& p, const std::string& v) { p.gamma_r = to_double(v); }},
      {"rate_model",
       [](Pending& p, const std::string& v) {
         const std::string t = trim(v);
         if (t != "flat" && t != "ohmic") throw ValidationError("expected flat or ohmic, got '" + t + "'");
         p.cfg.spec.rate_model = t;
       }},
      {"k_levels", [](Pending& p, const std::string& v) { p.cfg.spec.k_levels = to_int(v); }},
      {"refresh_every", [](Pending& p, const std::string& v) { p.cfg.spec.refresh_every = to_int(v); }},
      {"n_fock_grid", [](Pending& p, const std::string& v) { p.cfg.spec.convergence_n_fock = to_ints(v); }},
      {"spectrum_levels", [](Pending& p, const std::string& v) { p.cfg.spec.spectrum_levels = to_int(v); }},
      {"spectrum_points", [](Pending& p, const std::string& v) { p.cfg.spec.spectrum_points = to_int(v); }},
      {"f_cav_hz", [](Pending& p, const std::string& v) { p.cfg.spec.f_cav_hz = to_double(v); }},
      {"out", [](Pending& p, const std::string& v) { p.cfg.output_dir = trim(v); }},
      {"seed",
       [](Pending& p, const std::string& v) {
         const long x = to_long(v);
         if (x < 0) throw ValidationError("seed must be >= 0");
         p.cfg.seed = static_cast<unsigned long>(x);
       }},
      {"verbosity", [](Pending& p, const std::string& v) { p.cfg.verbosity = to_int(v); }},
  };
  return table;
}

void apply(Pending& p, const std::string& line, const std::string& where,
           std::vector<std::string>& problems) {
  const auto eq = line.find('=');
  if (eq == std::string::npos) {
    problems.push_back(where + ": expected key = value, got '" + trim(line) + "'");
    return;
  }
  const std::string key = trim(line.substr(0, eq));
  const std::string value = trim(line.substr(eq + 1));
  for (const auto& [name, set] : setters()) {
    if (name != key) continue;
    try {
      set(p, value);
    } catch (const ValidationError& e) {
      problems.push_back(where + ": key '" + key + "': " + e.what());
    }
    return;
  }
  problems.push_back(where + ": unknown key '" + key + "'");
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& entry : setters()) k.push_back(entry.first);
    return k;
  }();
  return keys;
}

RunConfig parse_config(const std::string& text, const std::string& experiment,
                       const std::vector<std::string>& overrides) {
  std::vector<std::string> problems;
  Pending p;
  try {
    p.cfg.spec.kind = parse_experiment_kind(experiment);
    p.cfg.spec.name = experiment_kind_name(p.cfg.spec.kind);
  } catch (const ValidationError& e) {
    problems.push_back(e.what());
  }

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    apply(p, line, "line " + std::to_string(lineno), problems);
  }
  for (const auto& o : overrides) apply(p, o, "--set '" + o + "'", problems);

  ExperimentSpec& spec = p.cfg.spec;
  if (p.experiment) {
    try {
      if (parse_experiment_kind(*p.experiment) != spec.kind) {
        problems.push_back("key 'experiment': document is for '" + *p.experiment +
                           "' but the run is '" + experiment + "'");
      }
    } catch (const ValidationError& e) {
      problems.push_back(std::string("key 'experiment': ") + e.what());
    }
  }
  spec.input.alpha = std::polar(p.alpha_f, p.alpha_phase);
  spec.input.beta = std::polar(p.beta_f, p.beta_phase);
  const NoiseRates ref = NoiseRates::reference(spec.model.omega_eg);
  spec.noise.gamma_x = p.gamma_x.value_or(ref.gamma_x);
  spec.noise.gamma_y = p.gamma_y.value_or(ref.gamma_y);
  spec.noise.gamma_z = p.gamma_z.value_or(ref.gamma_z);
  spec.noise.gamma_r = p.gamma_r.value_or(ref.gamma_r);

  try {
    spec.validate();
  } catch (const ValidationError& e) {
    problems.push_back(e.what());
  }
  if (!problems.empty()) {
    std::string msg = "configuration rejected:";
    for (std::string s : problems) {
      for (auto pos = s.find('\n'); pos != std::string::npos; pos = s.find('\n', pos + 3)) {
        s.replace(pos, 1, "\n  ");
      }
      msg += "\n  " + s;
    }
    throw ValidationError(msg);
  }
  return p.cfg;
}

}  // namespace uscmem
