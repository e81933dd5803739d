#pragma once

// JSON run configuration. Frequencies are ordinary Hz in the file and are
// converted to angular frequency on parse; to_json converts back, so a
// resolved config round-trips.

#include "xxz/hamiltonian.hpp"
#include "xxz/protocols.hpp"
#include "xxz/spin_core.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace xxz::cli {

enum class Protocol { Evolve, Tomography, Susceptibility, PhaseDiagram, Dephase };

std::string to_string(Protocol p);
Protocol protocol_from_string(const std::string& name);

struct EnsembleConfig {
  double atoms = 1e5;
  int sites = 25;
  CloudSpec cloud;
  CouplingProfile profile = CouplingProfile::lorentzian();
  double contrast = 1.0;
  double rayleigh_range_m = 1.4e-3;
  double spin_noise = 0.0;  // rms tilt (rad) of each initial spin, drawn from `seed`
};

struct EvolveSettings {
  std::string initial = "polarized";  // polarized | texture
  Vec3 direction = Vec3::UnitX();     // polarized direction or texture alpha
  double duration = 1e-3;
  double max_step_angle = 1e-3;
  std::vector<double> probes;  // zeta positions recorded as single-site regions
  std::optional<double> winding_length;
};

struct TomographySettings {
  std::vector<double> theta_deg;  // empty -> physical.theta_deg
  std::vector<int> delta_signs = {+1};
  TomographyOptions options;
};

struct SusceptibilitySettings {
  SusceptibilityOptions options;
  // When non-empty, one scan per value; the couplings' J of `curve_axis`
  // is replaced by lambda_eff h_x / (2 C_0 N) (sign-adjusted for "xy").
  std::vector<double> curve_lambda_eff_over_hx;
  std::string curve_axis = "z";  // z | xy
};

struct PhaseDiagramSettings {
  std::vector<double> lambda_z_over_hx;
  std::vector<double> lambda_xy_over_hx;
  std::optional<double> cut_lambda0_over_hx;
  std::vector<double> cut_theta_deg;
};

struct DephaseSettings {
  DephasingOptions options;  // gradient and scattering come from couplings
};

struct RunConfig {
  Protocol protocol = Protocol::Evolve;
  PhysicalParams physical;
  EnsembleConfig ensemble;
  CouplingSet couplings;
  EvolveSettings evolve;
  TomographySettings tomography;
  SusceptibilitySettings susceptibility;
  PhaseDiagramSettings phase_diagram;
  DephaseSettings dephase;
  std::filesystem::path output_dir = "xxz_out";
  std::uint64_t seed = 0;
  double sample_dt = 1e-5;
};

// Throws ConfigError on schema violations, including unknown keys.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

// Every resolved value, defaults included, in file units.
nlohmann::json to_json(const RunConfig& config);

// Builds the site ensemble (spins zero). spin_noise is applied by the evolve
// protocol once the initial state is set.
EnsembleState build_ensemble(const RunConfig& config);

}  // namespace xxz::cli
