#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace xxz::cli {

// Sets the value at a dotted path ("couplings.jz_hz", "options.theta_deg").
// Intermediate objects are created; a non-object on the way throws ConfigError.
void set_path(nlohmann::json& config, const std::string& path, double value);

std::size_t worker_count(std::size_t jobs);  // honours XXZ_SIM_THREADS

struct SweepReport {
  std::size_t points = 0;
  std::size_t failed = 0;
};

// Runs the base config once per value, concurrently, each point writing into
// out_dir/point_NNN. sweep.csv holds one row per value in input order:
//   index,<param>,status,message,<protocol summary columns>
// A failing point is recorded (status "config_error" / "numerical_error" /
// "error") and the sweep continues.
SweepReport run_sweep(const nlohmann::json& base, const std::string& path,
                      const std::vector<double>& values, const std::filesystem::path& out_dir);

}  // namespace xxz::cli
