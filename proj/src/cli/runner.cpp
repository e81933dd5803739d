#include "xxz/cli/runner.hpp"

#include "xxz/csv.hpp"
#include "xxz/errors.hpp"
#include "xxz/meanfield.hpp"
#include "xxz/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>

#ifndef XXZ_VERSION
#define XXZ_VERSION "0.0.0"
#endif

namespace xxz::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::ofstream open_csv(const fs::path& dir, const std::string& name, RunOutcome& outcome) {
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
  outcome.files.push_back(name);
  return out;
}

std::string fmt(double x) { return format_double(x); }

// Small random tilt of every spin, keeping its length.
void apply_spin_noise(EnsembleState& state, double rms, std::uint64_t seed) {
  if (rms == 0.0) return;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, rms);
  for (Site& s : state.sites) {
    const double len = s.f.norm();
    if (len == 0.0) continue;
    const Vec3 u = s.f / len;
    Vec3 a = u.unitOrthogonal();
    Vec3 b = u.cross(a);
    const double ta = normal(rng), tb = normal(rng);
    s.f = len * (u + ta * a + tb * b).normalized();
  }
}

RunOutcome run_evolve(const RunConfig& cfg, const fs::path& dir) {
  RunOutcome outcome;
  const EvolveSettings& e = cfg.evolve;
  EnsembleState state = build_ensemble(cfg);
  if (e.initial == "texture") {
    state = prepare_texture(state, e.direction, cfg.ensemble.contrast);
  } else {
    const Region all = Region::make("all", state.support_lo,
                                    std::nextafter(state.support_hi, state.support_hi + 1.0));
    state = prepare_polarized(state, all, e.direction, cfg.ensemble.contrast);
  }
  apply_spin_noise(state, cfg.ensemble.spin_noise, cfg.seed);

  EvolveOptions eo;
  eo.max_step_angle = e.max_step_angle;
  eo.winding_length = e.winding_length;
  for (std::size_t i = 0; i < e.probes.size(); ++i)
    eo.regions.push_back(probe_region(state, e.probes[i], "probe" + std::to_string(i)));

  const Schedule schedule(cfg.couplings, e.duration);
  const double e0 = energy(state, cfg.couplings);
  const Trajectory traj = evolve(state, schedule, cfg.sample_dt, eo);
  const EnsembleState& final_state = traj.states.back();

  {
    std::ofstream out = open_csv(dir, "trajectory.csv", outcome);
    write_trajectory_csv(out, traj);
  }
  {
    std::ofstream out = open_csv(dir, "initial_state.csv", outcome);
    write_state_csv(out, state);
  }
  {
    std::ofstream out = open_csv(dir, "final_state.csv", outcome);
    write_state_csv(out, final_state);
  }
  const double e1 = energy(final_state, cfg.couplings);
  outcome.summary = {{"final_Cg", fmt(traj.observables.back().contrast)},
                     {"energy_initial_hz", fmt(angular_to_hz(e0))},
                     {"energy_final_hz", fmt(angular_to_hz(e1))},
                     {"steps", std::to_string(traj.steps)},
                     {"renormalizations", std::to_string(traj.renormalizations)}};
  outcome.details = {{"internal_dt_s", traj.internal_dt}};
  return outcome;
}

RunOutcome run_tomography_protocol(const RunConfig& cfg, const fs::path& dir) {
  RunOutcome outcome;
  EnsembleState ensemble = build_ensemble(cfg);
  std::vector<TomographyResult> rows;
  json points = json::array();
  for (double th : cfg.tomography.theta_deg) {
    for (int sign : cfg.tomography.delta_signs) {
      PhysicalParams p = cfg.physical;
      p.theta = th * kDeg;
      TomographyOptions o = cfg.tomography.options;
      o.delta_sign = sign;
      TomographyResult r = run_tomography(ensemble, p, o);
      for (const std::string& w : r.warnings)
        if (std::find(outcome.warnings.begin(), outcome.warnings.end(), w) == outcome.warnings.end())
          outcome.warnings.push_back(w);
      points.push_back({{"theta_deg", th},
                        {"delta_sign", sign},
                        {"input_jz_hz", angular_to_hz(r.input.j_z)},
                        {"input_jxy_hz", angular_to_hz(r.input.j_xy)},
                        {"ising_probe_consistency", r.ising_consistency},
                        {"xy_probe_consistency", r.xy_consistency}});
      rows.push_back(std::move(r));
    }
  }
  {
    std::ofstream out = open_csv(dir, "tomography.csv", outcome);
    write_tomography_csv(out, rows);
  }
  const TomographyResult& first = rows.front();
  outcome.summary = {{"theta_deg", fmt(first.theta / kDeg)},
                     {"delta_sign", std::to_string(first.delta_sign)},
                     {"Jz_hz", fmt(angular_to_hz(first.j_z))},
                     {"Jz_err", fmt(angular_to_hz(first.j_z_error))},
                     {"Jxy_hz", fmt(angular_to_hz(first.j_xy))},
                     {"Jxy_err", fmt(angular_to_hz(first.j_xy_error))}};
  outcome.details = {{"points", points},
                     {"bare_coupling_hz",
                      angular_to_hz(bare_coupling(cfg.physical.n_photons, cfg.physical.omega_per_photon,
                                                  std::abs(cfg.physical.drive_detuning)))}};
  return outcome;
}

RunOutcome run_susceptibility_protocol(const RunConfig& cfg, const fs::path& dir) {
  RunOutcome outcome;
  const EnsembleState ensemble = build_ensemble(cfg);
  const SusceptibilitySettings& s = cfg.susceptibility;
  const double h_x = cfg.couplings.h_x;

  auto summarize = [&](const SusceptibilityScan& scan) {
    const double x = 2.0 * scan.lambda_eff / h_x;
    const Susceptibility a = susceptibility_analytic(scan.lambda_eff, h_x);
    return std::vector<std::pair<std::string, std::string>>{
        {"lambda_eff_over_hx", fmt(scan.lambda_eff / h_x)},
        {"chi", fmt(scan.chi)},
        {"chi_analytic", fmt(a.chi)},
        {"phase", to_string(a.phase)},
        {"capped", scan.capped ? "1" : "0"},
        {"x", fmt(x)}};
  };
  auto collect = [&](const SusceptibilityScan& scan) {
    for (const std::string& w : scan.warnings) outcome.warnings.push_back(w);
  };

  if (s.curve_lambda_eff_over_hx.empty()) {
    const SusceptibilityScan scan = run_susceptibility(ensemble, cfg.couplings, s.options);
    collect(scan);
    std::ofstream out = open_csv(dir, "scan.csv", outcome);
    write_scan_csv(out, scan);
    outcome.summary = summarize(scan);
    return outcome;
  }

  // Curve mode: J on the chosen axis follows Lambda_eff = J_eff |F| with
  // |F| = C_0 N at h_z = 0.
  const double F = cfg.ensemble.contrast * total_weight(ensemble);
  fs::create_directories(dir / "scans");
  std::ofstream curve_out = open_csv(dir, "curve.csv", outcome);
  CsvWriter curve(curve_out, {"jz_hz", "jxy_hz", "lambda_eff_over_hx", "chi", "chi_analytic",
                              "cap_flag"});
  for (std::size_t i = 0; i < s.curve_lambda_eff_over_hx.size(); ++i) {
    const double lam = s.curve_lambda_eff_over_hx[i] * h_x;
    CouplingSet c = cfg.couplings;
    if (s.curve_axis == "z") c.j_z = c.j_xy + lam / F;
    else c.j_xy = c.j_z - lam / F;
    const SusceptibilityScan scan = run_susceptibility(ensemble, c, s.options);
    collect(scan);
    char name[32];
    std::snprintf(name, sizeof name, "scans/scan_%03zu.csv", i);
    {
      std::ofstream out = open_csv(dir, name, outcome);
      write_scan_csv(out, scan);
    }
    const Susceptibility a = susceptibility_analytic(scan.lambda_eff, h_x);
    curve.row({fmt(angular_to_hz(c.j_z)), fmt(angular_to_hz(c.j_xy)), fmt(scan.lambda_eff / h_x),
               fmt(scan.chi), fmt(a.chi), scan.capped ? "1" : "0"});
    if (i == 0) outcome.summary = summarize(scan);
  }
  return outcome;
}

RunOutcome run_phase_diagram_protocol(const RunConfig& cfg, const fs::path& dir) {
  RunOutcome outcome;
  const PhaseDiagramSettings& p = cfg.phase_diagram;
  const auto points = phase_diagram(p.lambda_z_over_hx, p.lambda_xy_over_hx);
  {
    std::ofstream out = open_csv(dir, "phase_diagram.csv", outcome);
    write_phase_diagram_csv(out, points);
  }
  if (p.cut_lambda0_over_hx) {
    std::vector<double> thetas;
    for (double th : p.cut_theta_deg) thetas.push_back(th * kDeg);
    const auto cut = phase_diagram_angle_cut(*p.cut_lambda0_over_hx, thetas);
    std::ofstream out = open_csv(dir, "phase_cut.csv", outcome);
    write_phase_diagram_csv(out, cut);
  }
  std::size_t ordered = 0;
  for (const auto& pt : points)
    if (pt.phase != MagneticPhase::Paramagnet) ++ordered;
  outcome.summary = {{"points", std::to_string(points.size())},
                     {"ordered_points", std::to_string(ordered)}};
  return outcome;
}

RunOutcome run_dephase_protocol(const RunConfig& cfg, const fs::path& dir) {
  RunOutcome outcome;
  const EnsembleState ensemble = build_ensemble(cfg);
  const DephasingOptions& o = cfg.dephase.options;
  const DephasingResult r = run_dephasing(ensemble, o);
  {
    std::ofstream out = open_csv(dir, "dephasing.csv", outcome);
    write_dephasing_csv(out, r);
  }
  {
    std::ofstream out = open_csv(dir, "trajectory.csv", outcome);
    write_trajectory_csv(out, r.trajectory);
  }
  double excursion = 0.0;
  std::optional<double> first;
  for (const auto& w : r.winding) {
    if (!w) continue;
    if (!first) first = *w;
    excursion = std::max(excursion, std::abs(*w - *first));
  }
  double c_half = r.contrast.front();
  for (std::size_t i = 0; i < r.times.size(); ++i)
    if (r.times[i] <= 0.5 * o.duration + 1e-12) c_half = r.contrast[i];
  const bool fitted = !r.winding_fit.parameters.empty();
  outcome.summary = {{"lambda_over_muL", fmt(r.lambda_over_muL)},
                     {"phiL_slope_rad_per_s", fitted ? fmt(r.winding_fit.value("slope")) : ""},
                     {"phiL_excursion_rad", fmt(excursion)},
                     {"Cg_half_duration", fmt(c_half)},
                     {"Cg_final", fmt(r.contrast.back())}};
  outcome.details = {{"muL_hz", angular_to_hz(o.gradient * o.window_length)},
                     {"hx_pre_hz", angular_to_hz(r.hx_pre)}};
  return outcome;
}

}  // namespace

std::string version() { return XXZ_VERSION; }

std::vector<std::string> summary_columns(Protocol protocol) {
  switch (protocol) {
    case Protocol::Evolve:
      return {"final_Cg", "energy_initial_hz", "energy_final_hz", "steps", "renormalizations"};
    case Protocol::Tomography:
      return {"theta_deg", "delta_sign", "Jz_hz", "Jz_err", "Jxy_hz", "Jxy_err"};
    case Protocol::Susceptibility:
      return {"lambda_eff_over_hx", "chi", "chi_analytic", "phase", "capped", "x"};
    case Protocol::PhaseDiagram:
      return {"points", "ordered_points"};
    case Protocol::Dephase:
      return {"lambda_over_muL", "phiL_slope_rad_per_s", "phiL_excursion_rad", "Cg_half_duration",
              "Cg_final"};
  }
  return {};
}

RunOutcome run_protocol(const RunConfig& config, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  RunOutcome outcome;
  switch (config.protocol) {
    case Protocol::Evolve: outcome = run_evolve(config, out_dir); break;
    case Protocol::Tomography: outcome = run_tomography_protocol(config, out_dir); break;
    case Protocol::Susceptibility: outcome = run_susceptibility_protocol(config, out_dir); break;
    case Protocol::PhaseDiagram: outcome = run_phase_diagram_protocol(config, out_dir); break;
    case Protocol::Dephase: outcome = run_dephase_protocol(config, out_dir); break;
  }
  if (config.protocol != Protocol::PhaseDiagram && config.protocol != Protocol::Tomography)
    for (const std::string& w : config.physical.validity_warnings()) outcome.warnings.push_back(w);
  return outcome;
}

void write_manifest(const fs::path& out_dir, const RunConfig& config, const RunOutcome& outcome,
                    double wall_time_s) {
  json summary = json::object();
  for (const auto& [k, v] : outcome.summary) summary[k] = v;
  json m = {{"version", version()},
            {"protocol", to_string(config.protocol)},
            {"config", to_json(config)},
            {"summary", summary},
            {"details", outcome.details},
            {"warnings", outcome.warnings},
            {"outputs", outcome.files},
            {"wall_time_s", wall_time_s}};
  fs::create_directories(out_dir);
  std::ofstream out(out_dir / "manifest.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest in " + out_dir.string());
  out << m.dump(2) << '\n';
}

}  // namespace xxz::cli
