#pragma once

// CSV / summary / manifest serialization of result bundles.
//
// Curve files:      header drawn from t,omega,F_s,F_G,F_E (absent columns omitted)
// Landscape files:  omega,theta,fidelity   (time-major, theta ascending)
// Phase ridge:      omega,theta_opt
// Numbers use 17 significant digits, lines end in LF.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "uscmem/experiment.hpp"

namespace uscmem {

std::string format_number(double v);

std::string curve_csv(const Curve& curve);
std::string landscape_csv(const PhaseLandscape& landscape);
std::string theta_opt_csv(const PhaseLandscape& landscape);
std::string summary_text(const ResultBundle& bundle);

std::string sha256_hex(std::string_view data);

struct EmittedFile {
  std::filesystem::path path;
  std::string sha256;
};

/// Writes <curve>.csv, landscape_<name>.csv, theta_opt_<name>.csv and
/// summary.txt under `dir` (created if needed), then manifest.txt listing the
/// resolved parameters and the hash of every other file. Throws
/// std::runtime_error naming the path on I/O failure.
std::vector<EmittedFile> emit_csv(const ResultBundle& bundle, const std::filesystem::path& dir);

}  // namespace uscmem
