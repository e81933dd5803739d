#pragma once

#include "xxz/cli/config.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace xxz::cli {

struct RunOutcome {
  // One flat row of headline numbers; keys match summary_columns(protocol).
  std::vector<std::pair<std::string, std::string>> summary;
  std::vector<std::string> warnings;
  std::vector<std::string> files;  // relative to the output directory
  nlohmann::json details = nlohmann::json::object();
};

std::vector<std::string> summary_columns(Protocol protocol);

// Runs the protocol and writes its CSVs into `out_dir` (created if needed).
RunOutcome run_protocol(const RunConfig& config, const std::filesystem::path& out_dir);

// manifest.json: resolved config, version, wall time, warnings, outputs.
void write_manifest(const std::filesystem::path& out_dir, const RunConfig& config,
                    const RunOutcome& outcome, double wall_time_s);

std::string version();

}  // namespace xxz::cli
