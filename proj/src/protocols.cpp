#include "xxz/protocols.hpp"

#include "xxz/csv.hpp"
#include "xxz/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

namespace xxz {

namespace {

constexpr double kPi = std::numbers::pi;

double unwrap_next(double previous, double phase) {
  return previous + std::remainder(phase - previous, 2.0 * kPi);
}

double relative_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

}  // namespace

// ---------------------------------------------------------------------------
// Equilibrium model

Equilibrium equilibrium_magnetization(double lambda_eff, double h_x, double h_z) {
  if (!std::isfinite(lambda_eff) || !std::isfinite(h_x) || !std::isfinite(h_z))
    throw ConfigError("equilibrium: parameters must be finite");
  if (h_x < 0.0) throw ConfigError("equilibrium: h_x must be non-negative");

  // m = sin(u), u in [-pi/2, pi/2]
  auto E = [&](double u) {
    const double s = std::sin(u);
    return lambda_eff * s * s - h_x * std::cos(u) + h_z * s;
  };
  auto dE = [&](double u) {
    return lambda_eff * std::sin(2.0 * u) + h_x * std::sin(u) + h_z * std::cos(u);
  };

  constexpr int kGrid = 4000;
  const double lo = -0.5 * kPi;
  const double h = kPi / kGrid;
  std::vector<double> energies(kGrid + 1);
  for (int i = 0; i <= kGrid; ++i) energies[static_cast<std::size_t>(i)] = E(lo + i * h);

  struct Candidate {
    double u;
    double e;
  };
  std::vector<Candidate> minima;
  for (int i = 0; i <= kGrid; ++i) {
    const double e = energies[static_cast<std::size_t>(i)];
    const bool left_ok = i == 0 || e <= energies[static_cast<std::size_t>(i - 1)];
    const bool right_ok = i == kGrid || e < energies[static_cast<std::size_t>(i + 1)];
    if (!left_ok || !right_ok) continue;
    double a = lo + std::max(0, i - 1) * h;
    double b = lo + std::min(kGrid, i + 1) * h;
    double u = lo + i * h;
    if (dE(a) < 0.0 && dE(b) > 0.0) {
      for (int it = 0; it < 200 && b - a > 1e-16; ++it) {
        const double mid = 0.5 * (a + b);
        (dE(mid) < 0.0 ? a : b) = mid;
      }
      u = 0.5 * (a + b);
    }
    minima.push_back({u, E(u)});
  }

  auto best = std::min_element(minima.begin(), minima.end(),
                               [](const Candidate& x, const Candidate& y) { return x.e < y.e; });
  Equilibrium eq{std::sin(best->u), best->e, false};
  const double scale = std::abs(lambda_eff) + h_x + std::abs(h_z) + 1e-300;
  for (const Candidate& c : minima) {
    if (std::abs(std::sin(c.u) - eq.m) > 1e-6 && std::abs(c.e - best->e) <= 1e-12 * scale) {
      eq.degenerate = true;
      eq.m = std::min(eq.m, std::sin(c.u));
    }
  }
  return eq;
}

std::string to_string(MagneticPhase phase) {
  switch (phase) {
    case MagneticPhase::Paramagnet: return "PM";
    case MagneticPhase::Critical: return "critical";
    case MagneticPhase::Ferromagnet: return "FM";
  }
  return "?";
}

Susceptibility susceptibility_analytic(double lambda_eff, double h_x) {
  if (!(h_x > 0.0)) throw ConfigError("susceptibility: h_x must be positive");
  const double denom = 2.0 * lambda_eff / h_x + 1.0;
  if (std::abs(denom) <= 1e-12) return {std::numeric_limits<double>::infinity(), MagneticPhase::Critical};
  return {1.0 / denom, denom > 0.0 ? MagneticPhase::Paramagnet : MagneticPhase::Ferromagnet};
}

double ordered_susceptibility(double lambda_eff, double h_x) {
  if (!(h_x > 0.0)) throw ConfigError("susceptibility: h_x must be positive");
  const double x = 2.0 * lambda_eff / h_x;
  if (!(x < -1.0)) throw ConfigError("ordered susceptibility needs 2 Lambda_eff / h_x < -1");
  return 1.0 / (std::abs(x) * (x * x - 1.0));
}

// ---------------------------------------------------------------------------
// Ground-state preparation

GroundState prepare_ground_state(EnsembleState state, const CouplingSet& couplings,
                                 double tolerance, int max_iterations) {
  couplings.validate();
  if (!couplings.inhom.empty() && couplings.inhom.size() != state.sites.size())
    throw ConfigError("inhomogeneous field table must have one entry per site");

  const std::size_t n = state.sites.size();
  std::vector<double> lengths(n);
  for (std::size_t k = 0; k < n; ++k) lengths[k] = state.sites[k].f.norm();

  GroundState gs;
  double mixing = 1.0;
  double last_change = std::numeric_limits<double>::infinity();
  std::vector<Vec3> next(n);
  for (int it = 1; it <= max_iterations; ++it) {
    const Vec3 W = weighted_collective_spin(state);
    double change = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const Site& s = state.sites[k];
      double hz = couplings.h_z + couplings.gradient * s.zeta;
      if (!couplings.inhom.empty()) hz += couplings.inhom[k];
      const Vec3 B(2.0 * couplings.j_xy * s.c * W.x() + couplings.h_x,
                   2.0 * couplings.j_xy * s.c * W.y(), 2.0 * couplings.j_z * s.c * W.z() + hz);
      const double b = B.norm();
      if (b == 0.0 || lengths[k] == 0.0) {
        next[k] = s.f;
        continue;
      }
      const Vec3 target = -lengths[k] * B / b;
      Vec3 mixed = (1.0 - mixing) * s.f + mixing * target;
      if (mixed.norm() == 0.0) mixed = target;
      next[k] = lengths[k] * mixed.normalized();
      change = std::max(change, (target - s.f).norm());
    }
    for (std::size_t k = 0; k < n; ++k) state.sites[k].f = next[k];
    gs.iterations = it;
    gs.residual = change;
    if (change <= tolerance) {
      gs.converged = true;
      break;
    }
    if (change > last_change) mixing = std::max(mixing * 0.5, 1e-3);
    last_change = change;
  }
  gs.state = std::move(state);
  return gs;
}

// ---------------------------------------------------------------------------
// Susceptibility

SusceptibilityScan run_susceptibility(const EnsembleState& ensemble, const CouplingSet& couplings,
                                      const SusceptibilityOptions& options) {
  couplings.validate();
  if (!(couplings.h_x > 0.0)) throw ConfigError("susceptibility scan needs h_x > 0");
  if (!(options.epsilon > 0.0 && options.epsilon < 1.0))
    throw ConfigError("susceptibility epsilon must lie in (0, 1)");
  if (options.ramp_knots < 2) throw ConfigError("ramp needs at least two knots");

  SusceptibilityScan scan;
  const double eps = options.epsilon;
  const double h_x = couplings.h_x;
  scan.hz = {-eps * h_x, -0.5 * eps * h_x, 0.5 * eps * h_x, eps * h_x};

  const double contrast = ensemble.initial_contrast;
  for (double hz : scan.hz) {
    // Paramagnetic ground state of h_x F_x + h_z F_z: antiparallel to the field.
    const Vec3 direction = -Vec3(h_x, 0.0, hz).normalized();
    EnsembleState state = ensemble;
    for (Site& s : state.sites) s.f = contrast * direction;
    if (hz == scan.hz[2])
      scan.lambda_eff = effective_ising(couplings.j_xy, couplings.j_z) *
                        weighted_collective_spin(state).norm();

    CouplingSet base = couplings;
    base.h_z = hz;
    base.j_xy = 0.0;
    base.j_z = 0.0;
    Schedule schedule(base, options.ramp_duration);
    std::vector<Knot> jxy, jz;
    for (int i = 0; i < options.ramp_knots; ++i) {
      const double u = static_cast<double>(i) / (options.ramp_knots - 1);
      const double s = std::sin(0.5 * kPi * u);
      const double ramp = s * s;
      jxy.push_back({u * options.ramp_duration, ramp * couplings.j_xy});
      jz.push_back({u * options.ramp_duration, ramp * couplings.j_z});
    }
    schedule.set_profile(Parameter::JXY, std::move(jxy));
    schedule.set_profile(Parameter::JZ, std::move(jz));

    EvolveOptions eo;
    eo.max_step_angle = options.max_step_angle;
    eo.keep_states = true;
    const Trajectory traj = evolve(state, schedule, std::min(options.sample_dt, options.ramp_duration), eo);
    const EnsembleState& final = traj.states.back();

    double fz = 0.0, length = 0.0;
    for (const Site& s : final.sites) {
      fz += s.w * s.f.z();
      length += s.w * s.f.norm();
    }
    scan.m.push_back(length > 0.0 ? fz / length : 0.0);

    CouplingSet final_couplings = schedule.at(options.ramp_duration);
    const double e_final = energy(final, final_couplings);
    const GroundState eq = prepare_ground_state(final, final_couplings);
    const double e_eq = energy(eq.state, final_couplings);
    if (e_final - e_eq > 0.05 * std::abs(e_eq))
      scan.warnings.push_back("ramp not adiabatic at h_z = " +
                              format_double(angular_to_hz(hz)) + " Hz: final energy exceeds "
                              "equilibrium by more than 5%");
  }

  // m is odd in h_z with negative slope; chi = -dm/d(h_z/h_x).
  const double d_full = -(scan.m[3] - scan.m[0]) / (2.0 * eps);
  const double d_half = -(scan.m[2] - scan.m[1]) / eps;
  scan.chi = (4.0 * d_half - d_full) / 3.0;

  const double zero_plus = 2.0 * scan.m[2] - scan.m[3];
  const double zero_minus = 2.0 * scan.m[1] - scan.m[0];
  const double spontaneous = 0.5 * (zero_minus - zero_plus);
  const double jump_scale = 0.5 * 0.5 * (std::abs(scan.m[3]) + std::abs(scan.m[0]));
  const double cap = 1.0 / eps;
  if (std::abs(spontaneous) > jump_scale || scan.chi >= cap) {
    scan.capped = true;
    scan.chi = cap;
  }
  return scan;
}

void write_scan_csv(std::ostream& out, const SusceptibilityScan& scan) {
  CsvWriter csv(out, {"h_z_hz", "m_avg", "chi", "cap_flag"});
  for (std::size_t i = 0; i < scan.hz.size(); ++i)
    csv.row({format_double(angular_to_hz(scan.hz[i])), format_double(scan.m[i]),
             format_double(scan.chi), scan.capped ? "1" : "0"});
}

// ---------------------------------------------------------------------------
// Tomography

namespace {

struct QuenchRun {
  EnsembleState initial;
  Trajectory trajectory;
  Vec3 weighted = Vec3::Zero();
};

QuenchRun run_quench(const EnsembleState& ensemble, const Vec3& alpha, const CouplingSet& couplings,
                     double duration, int samples, const std::vector<Region>& probes,
                     double max_step_angle) {
  QuenchRun run;
  run.initial = prepare_texture(ensemble, alpha, ensemble.initial_contrast);
  run.weighted = weighted_collective_spin(run.initial);
  Schedule schedule(couplings, duration);
  EvolveOptions eo;
  eo.regions = probes;
  eo.keep_states = false;
  eo.max_step_angle = max_step_angle;
  run.trajectory = evolve(run.initial, schedule, duration / (samples - 1), eo);
  return run;
}

double probe_c(const EnsembleState& state, const Region& r) {
  for (const Site& s : state.sites)
    if (r.contains(s.zeta)) return s.c;
  throw ConfigError("probe region holds no site");
}

}  // namespace

TomographyResult run_tomography(const EnsembleState& ensemble, const PhysicalParams& params,
                                const TomographyOptions& options) {
  params.validate();
  if (options.delta_sign != 1 && options.delta_sign != -1)
    throw ConfigError("delta sign must be +1 or -1");
  if (options.samples < 6) throw ConfigError("tomography needs at least six samples");

  TomographyResult result;
  result.theta = params.theta;
  result.delta_sign = options.delta_sign;
  result.warnings = params.validity_warnings();

  const double j0 = bare_coupling(params.n_photons, params.omega_per_photon,
                                  options.delta_sign * std::abs(params.drive_detuning));
  result.input = couplings_from_angle(j0, params.theta);
  CouplingSet couplings;
  couplings.j_xy = result.input.j_xy;
  couplings.j_z = result.input.j_z;

  const TextureRegions regions = default_texture_regions(ensemble);
  const double zb = options.probe_b.value_or(0.5 * (regions.b.lo + regions.b.hi));
  const double zc = options.probe_c.value_or(0.5 * (regions.c.lo + regions.c.hi));
  const std::vector<Region> probes = {probe_region(ensemble, zb, "B"), probe_region(ensemble, zc, "C")};
  if (!regions.b.contains(probes[0].lo) || !regions.c.contains(probes[1].lo))
    throw ConfigError("tomography probes must sit inside regions B and C");
  const double c_probe[2] = {probe_c(ensemble, probes[0]), probe_c(ensemble, probes[1])};

  // Expected rates fix the default observation windows.
  const EnsembleState ising_texture =
      prepare_texture(ensemble, -Vec3::UnitZ(), ensemble.initial_contrast);
  const EnsembleState xy_texture =
      prepare_texture(ensemble, -Vec3::UnitY(), ensemble.initial_contrast);
  const double c_max = std::max(c_probe[0], c_probe[1]);
  const double c_min = std::min(c_probe[0], c_probe[1]);
  const double rate_z =
      2.0 * std::abs(couplings.j_z) * c_max * std::abs(weighted_collective_spin(ising_texture).z());
  const double rate_xy =
      2.0 * std::abs(couplings.j_xy) * c_min * std::abs(weighted_collective_spin(xy_texture).y());
  const double rate_any = std::max(rate_z, rate_xy);
  if (!(rate_any > 0.0)) throw ConfigError("tomography: both couplings vanish");
  double t_ising = options.duration_ising;
  double t_xy = options.duration_xy;
  if (t_ising <= 0.0) t_ising = 1.0 / (rate_z > 0.02 * rate_any ? rate_z : rate_any);
  if (t_xy <= 0.0) t_xy = 0.6 * 2.0 * kPi / (rate_xy > 0.02 * rate_any ? rate_xy : rate_any);

  // Ising: probes precess about F^A ~ -z; phi_dot = 2 J_z c F_z.
  {
    const QuenchRun run = run_quench(ensemble, -Vec3::UnitZ(), couplings, t_ising, options.samples,
                                     probes, options.max_step_angle);
    const double Fz = run.weighted.z();
    for (std::size_t p = 0; p < 2; ++p) {
      std::vector<double> t, phi;
      for (std::size_t i = 0; i < run.trajectory.times.size(); ++i) {
        const PhaseReading& r = run.trajectory.observables[i].phases[p];
        if (!r.defined) throw NumericalError("tomography: probe " + probes[p].label + " depolarized");
        t.push_back(run.trajectory.times[i]);
        phi.push_back(phi.empty() ? r.phase : unwrap_next(phi.back(), r.phase));
      }
      ProbeEstimate est;
      est.zeta = probes[p].lo;
      est.c = c_probe[p];
      est.fit = fit_linear(t, phi);
      const double denom = 2.0 * est.c * Fz;
      est.j = est.fit.value("slope") / denom;
      est.error = est.fit.error("slope") / std::abs(denom);
      result.ising_probes.push_back(est);
    }
  }

  // XY: probes rotate about F^A ~ -y; <f_z> oscillates at 2 J_xy c F_y.
  {
    const QuenchRun run = run_quench(ensemble, -Vec3::UnitY(), couplings, t_xy, options.samples,
                                     probes, options.max_step_angle);
    const double Fy = run.weighted.y();
    for (std::size_t p = 0; p < 2; ++p) {
      std::vector<double> t, fz;
      for (std::size_t i = 0; i < run.trajectory.times.size(); ++i) {
        t.push_back(run.trajectory.times[i]);
        fz.push_back(run.trajectory.observables[i].fz_mean[p]);
      }
      const Vec3 f0 = region_mean_spin(run.initial, probes[p]);
      const double length = f0.norm();
      const double cos_phi0 = f0.x() / length;

      ProbeEstimate est;
      est.zeta = probes[p].lo;
      est.c = c_probe[p];
      est.fit = fit_sinusoid(t, fz);
      if (est.fit.degenerate) {
        est.j = 0.0;
        est.error = 0.0;
      } else {
        if (!est.fit.converged)
          throw NumericalError("tomography: sinusoid fit failed for probe " + probes[p].label +
                               " (" + est.fit.note + ")");
        const double A = est.fit.value("amplitude");
        const double w = 2.0 * kPi * est.fit.value("frequency");
        const double ph = est.fit.value("phase");
        // df_z/dt(0) = -b |f| cos(phi0) with b = 2 J_xy c F_y.
        const double slope0 = A * w * std::cos(ph);
        const double b = -slope0 / (length * cos_phi0);
        const double denom = 2.0 * est.c * Fy;
        est.j = b / denom;
        const double rel = std::hypot(est.fit.error("amplitude") / A,
                                      est.fit.error("frequency") / est.fit.value("frequency"));
        const double phase_term = std::abs(std::tan(ph)) * est.fit.error("phase");
        est.error = std::abs(est.j) * std::hypot(rel, phase_term);
      }
      result.xy_probes.push_back(est);
    }
  }

  auto combine = [](const std::vector<ProbeEstimate>& ps, double& value, double& error,
                    double& consistency) {
    value = 0.5 * (ps[0].j + ps[1].j);
    const double spread = 0.5 * std::abs(ps[0].j - ps[1].j);
    error = std::hypot(0.5 * std::hypot(ps[0].error, ps[1].error), spread);
    consistency = relative_gap(ps[0].j, ps[1].j);
  };
  combine(result.ising_probes, result.j_z, result.j_z_error, result.ising_consistency);
  combine(result.xy_probes, result.j_xy, result.j_xy_error, result.xy_consistency);
  return result;
}

void write_tomography_csv(std::ostream& out, const std::vector<TomographyResult>& rows) {
  CsvWriter csv(out, {"theta_deg", "delta_sign", "Jz_hz", "Jz_err", "Jxy_hz", "Jxy_err"});
  for (const TomographyResult& r : rows)
    csv.row({format_double(r.theta * 180.0 / kPi), std::to_string(r.delta_sign),
             format_double(angular_to_hz(r.j_z)), format_double(angular_to_hz(r.j_z_error)),
             format_double(angular_to_hz(r.j_xy)), format_double(angular_to_hz(r.j_xy_error))});
}

// ---------------------------------------------------------------------------
// Dephasing

DephasingResult run_dephasing(const EnsembleState& ensemble, const DephasingOptions& options) {
  if (!(options.window_length > 0.0)) throw ConfigError("winding window must be positive");
  if (!(options.duration > 0.0) || !(options.sample_dt > 0.0))
    throw ConfigError("duration and sample_dt must be positive");
  if (options.interaction == InteractionKind::None && options.lambda_over_muL != 0.0)
    throw ConfigError("lambda given without an interaction kind");

  DephasingResult result;
  const double muL = options.gradient * options.window_length;
  const double lambda = options.lambda_over_muL * muL;

  double hx = 0.0;
  if (options.hx_pre) {
    hx = *options.hx_pre;
  } else {
    for (const Site& s : ensemble.sites) hx = std::max(hx, std::abs(options.gradient * s.zeta));
  }
  if (!(hx > 0.0)) throw ConfigError("aligning field h_x must be positive");
  result.hx_pre = hx;

  CouplingSet pre;
  pre.h_x = hx;
  pre.gradient = options.gradient;
  pre.scattering = options.scattering;

  EnsembleState state = ensemble;
  for (Site& s : state.sites) s.f = -ensemble.initial_contrast * Vec3::UnitX();

  auto set_j = [&](CouplingSet& c, double j) {
    if (options.interaction == InteractionKind::XY) c.j_xy = j;
    if (options.interaction == InteractionKind::Ising) c.j_z = j;
  };

  GroundState gs = prepare_ground_state(state, pre);
  if (options.interaction != InteractionKind::None) {
    // Lambda = J |F| with |F| of the prepared state; a few passes settle J.
    for (int pass = 0; pass < 4; ++pass) {
      const double length = weighted_collective_spin(gs.state).norm();
      if (!(length > 0.0)) throw NumericalError("dephasing: prepared state has no collective spin");
      set_j(pre, lambda / length);
      gs = prepare_ground_state(gs.state, pre);
    }
  }
  if (!gs.converged)
    throw NumericalError("dephasing: ground-state preparation did not converge (residual " +
                         format_double(gs.residual) + ")");
  if (muL != 0.0) {
    const double J = options.interaction == InteractionKind::XY ? pre.j_xy : pre.j_z;
    result.lambda_over_muL = J * weighted_collective_spin(gs.state).norm() / muL;
  }

  CouplingSet post = pre;
  post.h_x = 0.0;
  result.couplings = post;
  Schedule schedule(post, options.duration);
  EvolveOptions eo;
  eo.max_step_angle = options.max_step_angle;
  eo.winding_length = options.window_length;
  eo.keep_states = false;
  result.trajectory = evolve(gs.state, schedule, options.sample_dt, eo);
  result.prepared = std::move(gs.state);

  std::vector<double> t_fit, phi_fit;
  for (std::size_t i = 0; i < result.trajectory.times.size(); ++i) {
    const SampleObservables& obs = result.trajectory.observables[i];
    result.times.push_back(result.trajectory.times[i]);
    result.winding.push_back(obs.winding);
    result.contrast.push_back(obs.contrast);
    if (obs.winding) {
      t_fit.push_back(result.trajectory.times[i]);
      phi_fit.push_back(*obs.winding);
    }
  }
  if (t_fit.size() >= 2) result.winding_fit = fit_linear(t_fit, phi_fit);
  return result;
}

void write_dephasing_csv(std::ostream& out, const DephasingResult& result) {
  CsvWriter csv(out, {"t_s", "phiL_rad", "Cg", "lambda_over_muL"});
  for (std::size_t i = 0; i < result.times.size(); ++i)
    csv.row({format_double(result.times[i]), format_optional(result.winding[i]),
             format_double(result.contrast[i]), format_double(result.lambda_over_muL)});
}

// ---------------------------------------------------------------------------
// Phase diagram

namespace {

PhaseDiagramPoint diagram_point(double lz, double lxy) {
  PhaseDiagramPoint p;
  p.lambda_z = lz;
  p.lambda_xy = lxy;
  p.lambda_eff = effective_ising(lxy, lz);
  const Susceptibility s = susceptibility_analytic(p.lambda_eff, 1.0);
  p.phase = s.phase;
  switch (s.phase) {
    case MagneticPhase::Paramagnet: p.log_chi = std::log(s.chi); break;
    case MagneticPhase::Critical: p.log_chi = std::numeric_limits<double>::infinity(); break;
    case MagneticPhase::Ferromagnet: p.log_chi = std::log(ordered_susceptibility(p.lambda_eff, 1.0)); break;
  }
  return p;
}

}  // namespace

std::vector<PhaseDiagramPoint> phase_diagram(const std::vector<double>& lambda_z_over_hx,
                                             const std::vector<double>& lambda_xy_over_hx) {
  std::vector<PhaseDiagramPoint> out;
  out.reserve(lambda_z_over_hx.size() * lambda_xy_over_hx.size());
  for (double lz : lambda_z_over_hx) {
    for (double lxy : lambda_xy_over_hx) {
      if (!std::isfinite(lz) || !std::isfinite(lxy)) throw ConfigError("phase diagram grid must be finite");
      out.push_back(diagram_point(lz, lxy));
    }
  }
  return out;
}

std::vector<PhaseDiagramPoint> phase_diagram_angle_cut(double lambda0_over_hx,
                                                       const std::vector<double>& thetas) {
  std::vector<PhaseDiagramPoint> out;
  for (double th : thetas) {
    const XxzCouplings j = couplings_from_angle(lambda0_over_hx, th);
    PhaseDiagramPoint p = diagram_point(j.j_z, j.j_xy);
    p.theta = th;
    out.push_back(p);
  }
  return out;
}

void write_phase_diagram_csv(std::ostream& out, const std::vector<PhaseDiagramPoint>& points) {
  CsvWriter csv(out, {"theta_deg", "lambda_z_over_hx", "lambda_xy_over_hx", "lambda_eff_over_hx",
                      "log_chi", "phase"});
  for (const PhaseDiagramPoint& p : points)
    csv.row({p.theta ? format_double(*p.theta * 180.0 / kPi) : std::string(),
             format_double(p.lambda_z), format_double(p.lambda_xy), format_double(p.lambda_eff),
             format_double(p.log_chi), to_string(p.phase)});
}

}  // namespace xxz
