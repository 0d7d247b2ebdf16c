// uscmem_cli <subcommand> [--config path] [--set key=value]... [--out dir]
//
// Exit codes: 0 success, 1 validation error, 2 runtime or numerical error.
// USCMEM_OUT_DIR overrides the default output directory (results/<subcommand>).

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "uscmem/config.hpp"
#include "uscmem/errors.hpp"
#include "uscmem/report.hpp"

namespace {

const std::pair<const char*, const char*> kSubcommands[] = {
    {"spectrum", "lowest dressed levels versus coupling"},
    {"storage", "adiabatic storage sweep with cat-state diagnostics"},
    {"retrieval", "retrieve an ideal stored cat superposition"},
    {"roundtrip", "store, retrieve and phase-correct a qubit"},
    {"phase-map", "fidelity versus correction phase along the sweep"},
    {"noisy", "round trip under the dressed-basis master equation"},
    {"entangled", "two-cell storage of a split single photon"},
    {"convergence", "Fock truncation convergence of the spectrum"},
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw uscmem::ValidationError("cannot read config file '" + path + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

struct Args {
  std::string config;
  std::vector<std::string> sets;
  std::string out;
};

int run(const std::string& name, const Args& args) {
  try {
    const std::string text = args.config.empty() ? std::string() : read_file(args.config);
    uscmem::RunConfig cfg = uscmem::parse_config(text, name, args.sets);
    std::string out = args.out;
    if (out.empty()) out = cfg.output_dir;
    if (out.empty()) {
      const char* env = std::getenv("USCMEM_OUT_DIR");
      out = env && *env ? std::string(env) + "/" + name : "results/" + name;
    }
    if (cfg.verbosity > 1) std::cerr << cfg.spec.canonical_text();
    const uscmem::ResultBundle bundle = uscmem::run_experiment(cfg.spec);
    const auto files = uscmem::emit_csv(bundle, out);
    std::cout << bundle.summary_line << "\n";
    if (cfg.verbosity > 0) {
      for (const auto& f : files) std::cout << "  wrote " << f.path.string() << "\n";
    }
    return 0;
  } catch (const uscmem::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parity-protected quantum memory simulations"};
  app.require_subcommand(1);
  Args args;
  std::string chosen;
  bool known = argc < 2 || argv[1][0] == '-';
  for (const auto& [name, description] : kSubcommands) {
    auto* sub = app.add_subcommand(name, description);
    sub->add_option("--config", args.config, "key = value configuration file");
    sub->add_option("--set", args.sets, "override key=value (repeatable)")->allow_extra_args(false);
    sub->add_option("--out", args.out, "output directory");
    sub->callback([&chosen, n = name] { chosen = n; });
    known = known || std::string(argv[1]) == name;
  }
  if (!known) {
    std::cerr << "error: unknown subcommand '" << argv[1] << "'\n" << app.help();
    return 1;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 1;
  }
  return run(chosen, args);
}
