#pragma once

// ebflow front end: list | verify | trace | sweep.
//
// Exit codes: 0 success, 1 verification failure, 2 malformed input or a
// construction error. Every verify/trace/sweep run writes manifest.json
// into its output directory; `--manifest FILE` re-executes a run from it.

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace ebflow {

enum ExitCode { kPass = 0, kVerificationFailed = 1, kBadInput = 2 };

/// EBFLOW_PRESET_DIR if set, otherwise the presets directory of the source
/// tree.
std::filesystem::path preset_dir();
/// Contents of <preset_dir>/<name>.json.
nlohmann::json load_preset(const std::string& name);

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ebflow
