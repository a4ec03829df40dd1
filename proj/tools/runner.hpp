#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"

namespace nhtopo::cli {

/// Maps an error to the process exit code: 2 for invalid input, 3 for
/// numerical failures.
int exit_code(ErrorCode code) noexcept;

/// Runs every requested task, writes the artifacts plus manifest.json into
/// the output directory, and returns the files written (relative names).
std::vector<std::string> execute(const RunConfig& rc, std::ostream& log);

/// Full pipeline from a config path and "--set" overrides to an exit code.
int run(const std::string& config_path, const std::vector<std::string>& overrides,
        const std::string& out_dir_override, std::ostream& log);

}  // namespace nhtopo::cli
