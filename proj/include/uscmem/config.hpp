#pragma once

// key = value configuration documents for the command-line runner.
//
//   # comment
//   T = 120
//   landscape_T = 105, 120
//
// Unknown keys are rejected. Command-line overrides use the same syntax and
// are applied after the document.

#include <string>
#include <vector>

#include "uscmem/experiment.hpp"

namespace uscmem {

struct RunConfig {
  ExperimentSpec spec;
  std::string output_dir;  ///< empty: caller chooses
  unsigned long seed = 0;  ///< reserved; every pipeline is deterministic
  int verbosity = 1;
};

/// Every accepted key, in documentation order.
const std::vector<std::string>& config_keys();

/// Parses `text` then `overrides` ("key=value" each) for experiment `experiment`.
/// Throws ValidationError listing every problem with its line or override.
RunConfig parse_config(const std::string& text, const std::string& experiment,
                       const std::vector<std::string>& overrides = {});

}  // namespace uscmem
