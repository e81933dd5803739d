#include "xxz/cli/app.hpp"

#include "xxz/cli/config.hpp"
#include "xxz/cli/runner.hpp"
#include "xxz/cli/sweep.hpp"
#include "xxz/csv.hpp"
#include "xxz/errors.hpp"
#include "xxz/exact_quantum.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>

namespace xxz::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  if (text.find_first_not_of(" \t") == std::string::npos) return out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("--values: '" + item + "' is not a number");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos || !std::isfinite(v))
      throw ConfigError("--values: '" + item + "' is not a number");
    out.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
}

int run_config_protocol(const std::string& name, const std::string& config_path,
                        const std::string& out_override, std::ostream& out) {
  json j = read_json(config_path);
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  if (j.contains("protocol") && j["protocol"] != name)
    throw ConfigError("config protocol '" + j["protocol"].dump() + "' does not match subcommand '" + name + "'");
  j["protocol"] = name;
  if (!out_override.empty()) j["output_dir"] = out_override;
  const RunConfig cfg = parse_config(j);

  const auto t0 = std::chrono::steady_clock::now();
  const RunOutcome outcome = run_protocol(cfg, cfg.output_dir);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(cfg.output_dir, cfg, outcome, wall);

  for (const auto& [k, v] : outcome.summary) out << k << ' ' << v << '\n';
  for (const std::string& w : outcome.warnings) out << "warning: " << w << '\n';
  return kExitOk;
}

struct SpectrumArgs {
  int n = 2;
  double jxy = 0.0, jz = 0.0, hx = 0.0, hz = 0.0;
  std::vector<double> weights;
  std::string out_dir;
};

int run_spectrum(const SpectrumArgs& a, std::ostream& out) {
  const QuantumSystem sys = build_system(a.n, a.weights);
  CouplingSet c;
  c.j_xy = hz_to_angular(a.jxy);
  c.j_z = hz_to_angular(a.jz);
  c.h_x = hz_to_angular(a.hx);
  c.h_z = hz_to_angular(a.hz);
  const SpectrumResult spec = spectrum(sys, hamiltonian_matrix(sys, c));

  if (!a.out_dir.empty()) {
    fs::create_directories(a.out_dir);
    std::ofstream f(fs::path(a.out_dir) / "spectrum.csv", std::ios::binary);
    if (!f) throw std::runtime_error("cannot write spectrum.csv");
    CsvWriter csv(f, {"index", "energy_hz", "F_label", "m_label"});
    for (Eigen::Index i = 0; i < spec.energies.size(); ++i) {
      const auto k = static_cast<std::size_t>(i);
      csv.row({std::to_string(i), format_double(angular_to_hz(spec.energies(i))),
               spec.total_spin_conserved ? format_double(spec.total_spin[k]) : std::string(),
               format_optional(spec.magnetic[k])});
    }
  }

  out << "ground_energy_hz " << format_double(angular_to_hz(spec.energies(0))) << '\n';
  const bool gap_defined = c.j_xy < 0.0 && c.j_z == 0.0 && c.h_x == 0.0 && c.h_z == 0.0 &&
                           sys.uniform_weights();
  if (gap_defined) {
    out << "gap_hz " << format_double(angular_to_hz(protection_gap(sys, c.j_xy))) << '\n';
  } else {
    out << "gap_hz n/a (needs uniform weights, jxy < 0 and no other terms)\n";
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mean-field and exact simulator for cavity-mediated XXZ spin models", "xxz_sim"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::map<std::string, CLI::App*> protocol_cmds;
  for (const char* name : {"evolve", "tomography", "susceptibility", "phase-diagram", "dephase"}) {
    CLI::App* cmd = app.add_subcommand(name, std::string("run the ") + name + " protocol from a JSON config");
    cmd->add_option("--config", config_path, "JSON run configuration")->required();
    cmd->add_option("--out", out_dir, "output directory (overrides output_dir)");
    protocol_cmds[name] = cmd;
  }

  SpectrumArgs sa;
  CLI::App* spec_cmd = app.add_subcommand("spectrum", "exact spectrum of N <= 6 spin-1 atoms");
  spec_cmd->add_option("--n", sa.n, "number of atoms")->required()->check(CLI::Range(1, kMaxQuantumAtoms));
  spec_cmd->add_option("--jxy", sa.jxy, "J_xy in Hz");
  spec_cmd->add_option("--jz", sa.jz, "J_z in Hz");
  spec_cmd->add_option("--hx", sa.hx, "h_x in Hz");
  spec_cmd->add_option("--hz", sa.hz, "h_z in Hz");
  spec_cmd->add_option("--weights", sa.weights, "per-atom coupling weights")->delimiter(',');
  spec_cmd->add_option("--out", sa.out_dir, "directory for spectrum.csv");

  CLI::App* self_cmd = app.add_subcommand("selftest", "run the built-in invariant checks");

  std::string param, values_text;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a config over a list of parameter values");
  sweep_cmd->add_option("--config", config_path, "base JSON run configuration")->required();
  sweep_cmd->add_option("--param", param, "dotted path, e.g. couplings.jz_hz")->required();
  sweep_cmd->add_option("--values", values_text, "comma-separated values (may be empty)")->required();
  sweep_cmd->add_option("--out", out_dir, "output directory (overrides output_dir)");

  std::vector<std::string> argv_store = {"xxz_sim"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& s : argv_store) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    for (const auto& [name, cmd] : protocol_cmds)
      if (cmd->parsed()) return run_config_protocol(name, config_path, out_dir, out);

    if (spec_cmd->parsed()) return run_spectrum(sa, out);

    if (self_cmd->parsed()) {
      bool all = true;
      for (const SelftestLine& line : run_selftest()) {
        out << (line.pass ? "PASS " : "FAIL ") << line.name;
        if (!line.detail.empty()) out << "  (" << line.detail << ')';
        out << '\n';
        all = all && line.pass;
      }
      return all ? kExitOk : kExitNumerical;
    }

    if (sweep_cmd->parsed()) {
      json base = read_json(config_path);
      if (!base.is_object()) throw ConfigError("config must be a JSON object");
      const std::vector<double> values = parse_values(values_text);
      fs::path dir = out_dir.empty() ? fs::path(base.value("output_dir", std::string("xxz_out")))
                                     : fs::path(out_dir);
      const SweepReport report = run_sweep(base, param, values, dir);
      out << "points " << report.points << '\n' << "failed " << report.failed << '\n';
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitConfig;
}

}  // namespace xxz::cli
