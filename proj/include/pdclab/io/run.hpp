#pragma once

#include <ostream>
#include <string>

#include "pdclab/io/config.hpp"

namespace pdclab::io {

/// Environment variable naming the default output root.
inline constexpr const char *kOutDirEnv = "PDCLAB_OUT_DIR";

/// $PDCLAB_OUT_DIR, else "runs".
std::string default_output_root();

/// FNV-1a 64 hex digest of the canonical {version, command, inputs} document.
std::string run_id_for(const std::string &command, const Json &resolved_inputs);

struct RunOutcome {
  std::string run_dir;
  std::string csv;
  Json summary;
  bool reused = false; ///< the run directory already held identical output
};

/// Resolves, executes and writes one run to <out_root>/<group>-<name>-<run id>/.
/// An existing run directory is only read: identical CSV leaves it untouched,
/// different CSV raises NumericalFailure.
RunOutcome run_command(const std::string &command, const Json &config_inputs,
                       const Json &overrides, bool plot, const std::string &out_root);

/// Command-line entry point. Prints the JSON summary on success; returns
/// 0 on success, 1 for invalid input, 2 for numerical failure.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace pdclab::io
