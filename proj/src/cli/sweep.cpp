#include "xxz/cli/sweep.hpp"

#include "xxz/cli/config.hpp"
#include "xxz/cli/runner.hpp"
#include "xxz/csv.hpp"
#include "xxz/errors.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <thread>

namespace xxz::cli {

namespace fs = std::filesystem;
using nlohmann::json;

void set_path(json& config, const std::string& path, double value) {
  if (path.empty()) throw ConfigError("sweep: empty parameter path");
  json* node = &config;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ConfigError("sweep: malformed parameter path '" + path + "'");
    if (!node->is_object()) {
      if (!node->is_null()) throw ConfigError("sweep: '" + path + "' does not name an object member");
      *node = json::object();
    }
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

std::size_t worker_count(std::size_t jobs) {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("XXZ_SIM_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap >= 1) n = std::min(n, static_cast<std::size_t>(cap));
  }
  return std::max<std::size_t>(1, std::min(n, jobs));
}

namespace {

struct PointResult {
  std::string status = "ok";
  std::string message;
  std::vector<std::pair<std::string, std::string>> summary;
};

PointResult run_point(json config, const std::string& path, double value, const fs::path& dir) {
  PointResult r;
  try {
    set_path(config, path, value);
    config["output_dir"] = dir.string();
    const RunConfig cfg = parse_config(config);
    const auto t0 = std::chrono::steady_clock::now();
    const RunOutcome outcome = run_protocol(cfg, dir);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(dir, cfg, outcome, wall);
    r.summary = outcome.summary;
  } catch (const ConfigError& e) {
    r.status = "config_error";
    r.message = e.what();
  } catch (const NumericalError& e) {
    r.status = "numerical_error";
    r.message = e.what();
  } catch (const std::exception& e) {
    r.status = "error";
    r.message = e.what();
  }
  return r;
}

}  // namespace

SweepReport run_sweep(const json& base, const std::string& path, const std::vector<double>& values,
                      const fs::path& out_dir) {
  // Validate the path and the base config before launching anything.
  json probe = base;
  set_path(probe, path, values.empty() ? 0.0 : values.front());
  const RunConfig resolved = parse_config(probe);
  const std::vector<std::string> columns = summary_columns(resolved.protocol);

  fs::create_directories(out_dir);
  std::vector<PointResult> results(values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      char name[32];
      std::snprintf(name, sizeof name, "point_%03zu", i);
      results[i] = run_point(base, path, values[i], out_dir / name);
    }
  };
  std::vector<std::thread> pool;
  const std::size_t workers = worker_count(values.size());
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  if (!values.empty()) worker();
  for (std::thread& t : pool) t.join();

  std::ofstream out(out_dir / "sweep.csv", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + (out_dir / "sweep.csv").string());
  std::vector<std::string> header = {"index", path, "status", "message"};
  header.insert(header.end(), columns.begin(), columns.end());
  CsvWriter csv(out, header);
  SweepReport report;
  report.points = values.size();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const PointResult& r = results[i];
    if (r.status != "ok") ++report.failed;
    std::vector<std::string> row = {std::to_string(i), format_double(values[i]), r.status, r.message};
    for (const std::string& col : columns) {
      auto it = std::find_if(r.summary.begin(), r.summary.end(),
                             [&](const auto& kv) { return kv.first == col; });
      row.push_back(it == r.summary.end() ? std::string() : it->second);
    }
    csv.row(row);
  }
  return report;
}

}  // namespace xxz::cli
