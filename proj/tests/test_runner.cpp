#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "uscmem/config.hpp"
#include "uscmem/errors.hpp"
#include "uscmem/report.hpp"

using namespace uscmem;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("uscmem_test_" + name);
  fs::remove_all(d);
  return d;
}

std::string error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, EmptyDocumentGivesDefaults) {
  const RunConfig c = parse_config("", "roundtrip");
  EXPECT_EQ(c.spec.kind, ExperimentKind::RoundTrip);
  EXPECT_DOUBLE_EQ(c.spec.model.omega_cav, 1.0);
  EXPECT_DOUBLE_EQ(c.spec.model.omega_eg, 0.1);
  EXPECT_DOUBLE_EQ(c.spec.model.coupling_max, 1.0);
  EXPECT_DOUBLE_EQ(c.spec.total_time, 105.0);
  EXPECT_EQ(c.spec.steps, 2000);
  EXPECT_FALSE(c.spec.fixed_theta.has_value());
}

TEST(Config, OverridesAndComments) {
  const RunConfig c = parse_config("# sweep\nT = 120   # slower\n\nn_fock=24\nlandscape_T = 90, 100\n", "phase-map",
                                   {"theta=0.5", "omega_eg=0.2"});
  EXPECT_DOUBLE_EQ(c.spec.total_time, 120.0);
  EXPECT_EQ(c.spec.model.n_fock, 24);
  EXPECT_EQ(c.spec.landscape_times, (std::vector<double>{90.0, 100.0}));
  ASSERT_TRUE(c.spec.fixed_theta);
  EXPECT_DOUBLE_EQ(*c.spec.fixed_theta, 0.5);
  EXPECT_DOUBLE_EQ(c.spec.noise.gamma_x, 2e-4);
  EXPECT_DOUBLE_EQ(c.spec.noise.gamma_r, 2e-5);
}

TEST(Config, OverridesWinOverDocument) {
  EXPECT_DOUBLE_EQ(parse_config("T = 80\n", "storage", {"T=90"}).spec.total_time, 90.0);
}

TEST(Config, ExplicitRatesAreKept) {
  const RunConfig c = parse_config("gamma_z = 0\nrate_model = ohmic\n", "noisy");
  EXPECT_DOUBLE_EQ(c.spec.noise.gamma_z, 0.0);
  EXPECT_DOUBLE_EQ(c.spec.noise.gamma_x, 1e-4);
  EXPECT_EQ(c.spec.rate_model, "ohmic");
}

TEST(Config, NegativeFockCutoffIsRejected) {
  const std::string msg = error_of([] { parse_config("n_fock = -3\n", "roundtrip"); });
  EXPECT_NE(msg.find("n_fock"), std::string::npos);
  EXPECT_THROW(parse_config("n_fock = -3\n", "roundtrip"), ValidationError);
}

TEST(Config, ReportsEveryProblemWithContext) {
  const std::string msg = error_of([] {
    parse_config("T = fast\nbogus = 1\nsteps 10\n", "roundtrip", {"n_fock=1.5", "rate_model=warm"});
  });
  EXPECT_NE(msg.find("line 1: key 'T'"), std::string::npos) << msg;
  EXPECT_NE(msg.find("line 2: unknown key 'bogus'"), std::string::npos) << msg;
  EXPECT_NE(msg.find("line 3: expected key = value"), std::string::npos) << msg;
  EXPECT_NE(msg.find("--set 'n_fock=1.5'"), std::string::npos) << msg;
  EXPECT_NE(msg.find("rate_model"), std::string::npos) << msg;
}

TEST(Config, UnknownExperimentAndMismatch) {
  EXPECT_THROW(parse_config("", "fig9"), ValidationError);
  EXPECT_THROW(parse_config("experiment = noisy\n", "roundtrip"), ValidationError);
  EXPECT_EQ(parse_config("", "noisy").spec.kind, ExperimentKind::Noisy);
}

TEST(Config, ManifestParamsRoundTrip) {
  const RunConfig a = parse_config("T = 99\nscan_T = 50,60\nbeta_phase = 0.3\n", "roundtrip");
  const RunConfig b = parse_config(a.spec.canonical_text(), "roundtrip");
  EXPECT_EQ(a.spec.canonical_text(), b.spec.canonical_text());
  EXPECT_EQ(a.spec.hash(), b.spec.hash());
  EXPECT_NE(a.spec.hash(), parse_config("T = 98\n", "roundtrip").spec.hash());
}

TEST(Config, EveryKeyIsAccepted) {
  for (const auto& key : config_keys()) {
    if (key == "experiment") continue;
    std::string msg = error_of([&] { parse_config(key + " = x\n", "roundtrip"); });
    EXPECT_EQ(msg.find("unknown key"), std::string::npos) << key;
  }
}

TEST(Report, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Report, SeventeenDigits) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(105.0), "105");
  EXPECT_EQ(curve_csv({"c", {"t", "F_s"}, {{0.0, 1.0}, {0.5, 0.25}}}), "t,F_s\n0,1\n0.5,0.25\n");
}

TEST(Report, RoundTripBundleFiles) {
  RunConfig c = parse_config("n_fock = 16\nsteps = 500\nrecord_every = 50\nT = 40\n", "roundtrip");
  const ResultBundle b = run_experiment(c.spec);
  const fs::path dir = scratch_dir("rt");
  const auto files = emit_csv(b, dir);
  const std::string storage = slurp(dir / "storage.csv");
  EXPECT_EQ(storage.rfind("t,omega,F_s,F_G,F_E\n0,0,", 0), 0u) << storage.substr(0, 80);
  EXPECT_EQ(slurp(dir / "retrieval.csv").rfind("t,omega,F_s\n40,1,", 0), 0u);
  EXPECT_EQ(storage.find('\r'), std::string::npos);
  const std::string manifest = slurp(dir / "manifest.txt");
  for (const auto& f : files) {
    if (f.path.filename() == "manifest.txt") continue;
    EXPECT_EQ(f.sha256, sha256_hex(slurp(f.path)));
    EXPECT_NE(manifest.find(f.path.filename().string() + " sha256=" + f.sha256), std::string::npos);
  }
  EXPECT_NE(manifest.find("T = 40\n"), std::string::npos);
  EXPECT_NE(b.find_scalar("F_s"), nullptr);
  EXPECT_NE(b.summary_line.find("F_s="), std::string::npos);
  EXPECT_NE(b.summary_line.find("theta_opt="), std::string::npos);

  const auto again = emit_csv(run_experiment(c.spec), scratch_dir("rt2"));
  ASSERT_EQ(again.size(), files.size());
  for (std::size_t i = 0; i < files.size(); ++i) EXPECT_EQ(files[i].sha256, again[i].sha256);
}

TEST(Report, LandscapeRowCount) {
  RunConfig c = parse_config("n_fock = 16\nsteps = 500\nrecord_every = 100\nlandscape_T = 40\ntheta_points = 32\n",
                             "phase-map");
  const ResultBundle b = run_experiment(c.spec);
  ASSERT_EQ(b.landscapes.size(), 1u);
  const fs::path dir = scratch_dir("pm");
  emit_csv(b, dir);
  const std::string land = slurp(dir / "landscape_T40.csv");
  EXPECT_EQ(std::count(land.begin(), land.end(), '\n'), 1 + 6 * 32);
  EXPECT_EQ(land.rfind("omega,theta,fidelity\n", 0), 0u);
  const std::string ridge = slurp(dir / "theta_opt_T40.csv");
  EXPECT_EQ(std::count(ridge.begin(), ridge.end(), '\n'), 1 + 6);
}

TEST(Report, IoErrorNamesPath) {
  const fs::path file = scratch_dir("blocker");
  std::ofstream(file) << "x";
  ResultBundle b;
  b.curves.push_back({"c", {"t"}, {{0.0}}});
  const std::string msg = error_of([&] { emit_csv(b, file / "sub"); });
  EXPECT_NE(msg.find(file.string()), std::string::npos) << msg;
}

TEST(Experiments, SpectrumAndConvergence) {
  const ResultBundle s = run_experiment(parse_config("spectrum_points = 11\n", "spectrum").spec);
  ASSERT_EQ(s.curves.size(), 1u);
  EXPECT_EQ(s.curves[0].rows.size(), 11u);
  EXPECT_NEAR(s.find_scalar("ground_energy")->value, -1.007577105013750, 1e-10);
  const ResultBundle c = run_experiment(parse_config("", "convergence").spec);
  EXPECT_LT(c.find_scalar("max_energy_shift")->value, 1e-8);
}

TEST(Experiments, ErrorsCarryStageAndType) {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::Spectrum;
  spec.model.n_fock = 3;
  spec.spectrum_levels = 2;
  const std::string msg = error_of([&] { run_experiment(spec); });
  EXPECT_NE(msg.find("stage '"), std::string::npos) << msg;
  EXPECT_THROW(run_experiment(spec), NumericalError);
  spec.total_time = -1;
  EXPECT_THROW(run_experiment(spec), ValidationError);
}
