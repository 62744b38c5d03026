#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "rotenberg/config.hpp"

namespace rotenberg {

inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 1;
inline constexpr int exit_numerical = 2;
inline constexpr int exit_usage = 64;

std::string usage();

bool is_command(const std::string& name);

/// Runs one command against a parsed config and returns the paths written
/// (relative to the output directory). Throws ValidationError /
/// NumericalError on failure.
std::vector<std::string> run_command(const std::string& command, const ExperimentConfig& config,
                                     std::ostream& log);

/// Full command line handling: argument parsing, config loading, exit codes.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rotenberg
