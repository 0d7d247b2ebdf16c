#include "uscmem/report.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace uscmem {

namespace fs = std::filesystem;

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string curve_csv(const Curve& curve) {
  std::ostringstream s;
  for (std::size_t j = 0; j < curve.columns.size(); ++j) s << (j ? "," : "") << curve.columns[j];
  s << "\n";
  for (const auto& row : curve.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) s << (j ? "," : "") << format_number(row[j]);
    s << "\n";
  }
  return s.str();
}

std::string landscape_csv(const PhaseLandscape& landscape) {
  std::ostringstream s;
  s << "omega,theta,fidelity\n";
  for (std::size_t i = 0; i < landscape.coupling_grid.size(); ++i) {
    for (std::size_t j = 0; j < landscape.theta_grid.size(); ++j) {
      s << format_number(landscape.coupling_grid[i]) << ',' << format_number(landscape.theta_grid[j])
        << ',' << format_number(landscape.fidelity[i][j]) << "\n";
    }
  }
  return s.str();
}

std::string theta_opt_csv(const PhaseLandscape& landscape) {
  std::ostringstream s;
  s << "omega,theta_opt\n";
  for (std::size_t i = 0; i < landscape.coupling_grid.size(); ++i) {
    s << format_number(landscape.coupling_grid[i]) << ',' << format_number(landscape.theta_opt[i])
      << "\n";
  }
  return s.str();
}

std::string summary_text(const ResultBundle& bundle) {
  std::ostringstream s;
  s << bundle.summary_line << "\n";
  s << "spec_hash = " << bundle.spec_hash << "\n";
  for (const auto& sc : bundle.scalars) s << sc.name << " = " << format_number(sc.value) << "\n";
  return s.str();
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << content;
  f.close();
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

std::vector<EmittedFile> emit_csv(const ResultBundle& bundle, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

  std::vector<EmittedFile> files;
  auto emit = [&](const std::string& name, const std::string& content) {
    const fs::path p = dir / name;
    write_file(p, content);
    files.push_back({p, sha256_hex(content)});
  };
  for (const auto& c : bundle.curves) emit(c.name + ".csv", curve_csv(c));
  for (const auto& l : bundle.landscapes) {
    emit("landscape_" + l.name + ".csv", landscape_csv(l.data));
    emit("theta_opt_" + l.name + ".csv", theta_opt_csv(l.data));
  }
  emit("summary.txt", summary_text(bundle));

  std::ostringstream m;
  m << "experiment = " << bundle.experiment << "\n";
  m << "spec_hash = " << bundle.spec_hash << "\n";
  m << "[params]\n" << bundle.canonical_spec;
  m << "[files]\n";
  for (const auto& f : files) m << f.path.filename().string() << " sha256=" << f.sha256 << "\n";
  const std::string manifest = m.str();
  write_file(dir / "manifest.txt", manifest);
  files.push_back({dir / "manifest.txt", sha256_hex(manifest)});
  return files;
}

}  // namespace uscmem
