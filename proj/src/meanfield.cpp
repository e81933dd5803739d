#include "xxz/meanfield.hpp"

#include "xxz/csv.hpp"
#include "xxz/errors.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace xxz {

namespace {

std::size_t index_of(Parameter p) { return static_cast<std::size_t>(p); }

double site_hz(const CouplingSet& c, const EnsembleState& state, std::size_t k) {
  double h = c.h_z + c.gradient * state.sites[k].zeta;
  if (!c.inhom.empty()) h += c.inhom[k];
  return h;
}

Vec3 field_from(const Vec3& weighted, const CouplingSet& c, double ck, double hz) {
  return Vec3(2.0 * c.j_xy * ck * weighted.x() + c.h_x, 2.0 * c.j_xy * ck * weighted.y(),
              2.0 * c.j_z * ck * weighted.z() + hz);
}

void check_inhom(const EnsembleState& state, const CouplingSet& c) {
  if (!c.inhom.empty() && c.inhom.size() != state.sites.size())
    throw ConfigError("inhomogeneous field table must have one entry per site");
}

// df_k/dt for all sites given spins `f`.
void rhs(const EnsembleState& state, const CouplingSet& c, const std::vector<Vec3>& f,
         std::vector<Vec3>& out) {
  Vec3 weighted = Vec3::Zero();
  for (std::size_t k = 0; k < f.size(); ++k) weighted += (state.sites[k].w * state.sites[k].c) * f[k];
  for (std::size_t k = 0; k < f.size(); ++k) {
    Vec3 B = field_from(weighted, c, state.sites[k].c, site_hz(c, state, k));
    out[k] = B.cross(f[k]);
  }
}

struct Workspace {
  std::vector<Vec3> f0, k1, k2, k3, k4, tmp;
  explicit Workspace(std::size_t n) : f0(n), k1(n), k2(n), k3(n), k4(n), tmp(n) {}
};

// RK4 step with couplings evaluated at t, t + dt/2, t + dt, then norm guard
// and scattering (scattering rate taken at t + dt/2).
void advance(EnsembleState& state, const CouplingSet& c0, const CouplingSet& cmid,
             const CouplingSet& c1, double dt, Workspace& ws, StepStats& stats) {
  const std::size_t n = state.sites.size();
  for (std::size_t k = 0; k < n; ++k) ws.f0[k] = state.sites[k].f;

  rhs(state, c0, ws.f0, ws.k1);
  for (std::size_t k = 0; k < n; ++k) ws.tmp[k] = ws.f0[k] + 0.5 * dt * ws.k1[k];
  rhs(state, cmid, ws.tmp, ws.k2);
  for (std::size_t k = 0; k < n; ++k) ws.tmp[k] = ws.f0[k] + 0.5 * dt * ws.k2[k];
  rhs(state, cmid, ws.tmp, ws.k3);
  for (std::size_t k = 0; k < n; ++k) ws.tmp[k] = ws.f0[k] + dt * ws.k3[k];
  rhs(state, c1, ws.tmp, ws.k4);

  const double decay = std::exp(-cmid.scattering * dt);
  for (std::size_t k = 0; k < n; ++k) {
    Vec3 f = ws.f0[k] + (dt / 6.0) * (ws.k1[k] + 2.0 * ws.k2[k] + 2.0 * ws.k3[k] + ws.k4[k]);
    const double before = ws.f0[k].norm();
    const double after = f.norm();
    if (std::abs(after - before) > 1e-12 && after > 0.0) {
      f *= before / after;
      ++stats.renormalized_sites;
    }
    state.sites[k].f = decay * f;
  }
}

double max_field(const EnsembleState& state, const CouplingSet& c) {
  const Vec3 weighted = weighted_collective_spin(state);
  double m = 0.0;
  for (std::size_t k = 0; k < state.sites.size(); ++k)
    m = std::max(m, field_from(weighted, c, state.sites[k].c, site_hz(c, state, k)).norm());
  return m;
}

double interpolate(const std::vector<Knot>& knots, double t) {
  if (t <= knots.front().t) return knots.front().value;
  if (t >= knots.back().t) return knots.back().value;
  auto hi = std::upper_bound(knots.begin(), knots.end(), t,
                             [](double x, const Knot& k) { return x < k.t; });
  auto lo = hi - 1;
  if (hi->t == lo->t) return hi->value;
  const double u = (t - lo->t) / (hi->t - lo->t);
  return lo->value + u * (hi->value - lo->value);
}

SampleObservables observe(const EnsembleState& state, const CouplingSet& c,
                          const std::vector<Region>& regions, const EvolveOptions& opts) {
  SampleObservables obs;
  for (const Region& r : regions) {
    obs.phases.push_back(local_phase(state, r));
    Vec3 mean = region_mean_spin(state, r);
    obs.fz_mean.push_back(mean.z());
  }
  obs.contrast = global_contrast(state);
  if (opts.winding_length) {
    try {
      obs.winding = phase_winding(state, *opts.winding_length, opts.winding);
    } catch (const NumericalError&) {
      obs.winding.reset();
    }
  }
  obs.energy = energy(state, c);
  return obs;
}

}  // namespace

double get(const CouplingSet& c, Parameter p) {
  switch (p) {
    case Parameter::JXY: return c.j_xy;
    case Parameter::JZ: return c.j_z;
    case Parameter::HX: return c.h_x;
    case Parameter::HZ: return c.h_z;
    case Parameter::Gradient: return c.gradient;
    case Parameter::Scattering: return c.scattering;
  }
  return 0.0;
}

void set(CouplingSet& c, Parameter p, double value) {
  switch (p) {
    case Parameter::JXY: c.j_xy = value; break;
    case Parameter::JZ: c.j_z = value; break;
    case Parameter::HX: c.h_x = value; break;
    case Parameter::HZ: c.h_z = value; break;
    case Parameter::Gradient: c.gradient = value; break;
    case Parameter::Scattering: c.scattering = value; break;
  }
}

Schedule::Schedule(CouplingSet base, double duration) : base_(std::move(base)), duration_(duration) {
  if (!(duration > 0.0) || !std::isfinite(duration))
    throw ConfigError("schedule duration must be positive");
  base_.validate();
}

void Schedule::set_profile(Parameter p, std::vector<Knot> knots) {
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i].t) || !std::isfinite(knots[i].value))
      throw ConfigError("schedule knots must be finite");
    if (i && knots[i].t < knots[i - 1].t) throw ConfigError("schedule knots must be time-ordered");
  }
  if (p == Parameter::Scattering)
    for (const Knot& k : knots)
      if (k.value < 0.0) throw ConfigError("scattering rate must be non-negative");
  profiles_[index_of(p)] = std::move(knots);
}

const std::vector<Knot>& Schedule::profile(Parameter p) const { return profiles_[index_of(p)]; }

CouplingSet Schedule::at(double t) const {
  CouplingSet c = base_;
  for (Parameter p : kAllParameters) {
    const auto& knots = profiles_[index_of(p)];
    if (!knots.empty()) set(c, p, interpolate(knots, t));
  }
  return c;
}

double Schedule::max_abs(Parameter p) const {
  const auto& knots = profiles_[index_of(p)];
  if (knots.empty()) return std::abs(get(base_, p));
  double m = std::max(std::abs(interpolate(knots, 0.0)), std::abs(interpolate(knots, duration_)));
  for (const Knot& k : knots)
    if (k.t > 0.0 && k.t < duration_) m = std::max(m, std::abs(k.value));
  return m;
}

Vec3 local_field(const EnsembleState& state, const CouplingSet& couplings, std::size_t k) {
  check_inhom(state, couplings);
  return field_from(weighted_collective_spin(state), couplings, state.sites.at(k).c,
                    site_hz(couplings, state, k));
}

double energy(const EnsembleState& state, const CouplingSet& c) {
  check_inhom(state, c);
  const Vec3 W = weighted_collective_spin(state);
  const Vec3 F = unweighted_collective_spin(state);
  double e = c.j_xy * (W.x() * W.x() + W.y() * W.y()) + c.j_z * W.z() * W.z() + c.h_x * F.x() +
             c.h_z * F.z();
  for (std::size_t k = 0; k < state.sites.size(); ++k) {
    const Site& s = state.sites[k];
    double hk = c.gradient * s.zeta;
    if (!c.inhom.empty()) hk += c.inhom[k];
    e += s.w * hk * s.f.z();
  }
  return e;
}

EnsembleState apply_scattering(EnsembleState state, double rate, double dt) {
  if (rate < 0.0) throw ConfigError("scattering rate must be non-negative");
  const double decay = std::exp(-rate * dt);
  for (Site& s : state.sites) s.f *= decay;
  return state;
}

EnsembleState step(EnsembleState state, const CouplingSet& couplings, double dt,
                   StepStats* stats) {
  if (!(dt > 0.0)) throw ConfigError("step: dt must be positive");
  couplings.validate();
  check_inhom(state, couplings);
  const double angle = dt * max_field(state, couplings);
  if (angle > 0.5)
    throw NumericalError("step: dt * max|B| = " + format_double(angle) + " rad exceeds 0.5");
  Workspace ws(state.sites.size());
  StepStats local;
  advance(state, couplings, couplings, couplings, dt, ws, local);
  if (stats) *stats = local;
  return state;
}

double field_bound(const EnsembleState& state, const Schedule& schedule) {
  double spin_sum = 0.0;
  double c_max = 0.0;
  double zeta_max = 0.0;
  for (const Site& s : state.sites) {
    spin_sum += s.w * s.c * s.f.norm();
    c_max = std::max(c_max, s.c);
    zeta_max = std::max(zeta_max, std::abs(s.zeta));
  }
  double inhom_max = 0.0;
  for (double h : schedule.base().inhom) inhom_max = std::max(inhom_max, std::abs(h));
  const double j_max =
      std::max(schedule.max_abs(Parameter::JXY), schedule.max_abs(Parameter::JZ));
  return schedule.max_abs(Parameter::HX) + schedule.max_abs(Parameter::HZ) +
         schedule.max_abs(Parameter::Gradient) * zeta_max + inhom_max +
         2.0 * j_max * c_max * spin_sum;
}

Trajectory evolve(const EnsembleState& initial, const Schedule& schedule, double sample_dt,
                  const EvolveOptions& options) {
  if (!(sample_dt > 0.0)) throw ConfigError("sample_dt must be positive");
  if (!(options.max_step_angle > 0.0 && options.max_step_angle <= 0.5))
    throw ConfigError("max_step_angle must lie in (0, 0.5]");
  check_inhom(initial, schedule.base());

  Trajectory traj;
  traj.regions = options.regions;
  if (traj.regions.empty())
    traj.regions.push_back(Region::make("all", initial.support_lo,
                                        std::nextafter(initial.support_hi, initial.support_hi + 1.0)));

  const double bound = field_bound(initial, schedule);
  double dt_cap = bound > 0.0 ? options.max_step_angle / bound : sample_dt;
  dt_cap = std::min(dt_cap, sample_dt);

  EnsembleState state = initial;
  Workspace ws(state.sites.size());
  StepStats stats;

  auto record = [&](double t) {
    traj.times.push_back(t);
    traj.observables.push_back(observe(state, schedule.at(t), traj.regions, options));
    if (options.keep_states) traj.states.push_back(state);
  };

  const double T = schedule.duration();
  const auto n_samples = static_cast<long long>(std::ceil(T / sample_dt - 1e-9));
  record(0.0);
  double t = 0.0;
  for (long long s = 1; s <= n_samples; ++s) {
    const double t_next = std::min(T, static_cast<double>(s) * sample_dt);
    const double span = t_next - t;
    const auto substeps = static_cast<long long>(std::ceil(span / dt_cap - 1e-9));
    const double dt = span / static_cast<double>(std::max<long long>(substeps, 1));
    traj.internal_dt = std::max(traj.internal_dt, dt);
    for (long long i = 0; i < substeps; ++i) {
      const double ta = t + static_cast<double>(i) * dt;
      advance(state, schedule.at(ta), schedule.at(ta + 0.5 * dt), schedule.at(ta + dt), dt, ws,
              stats);
      ++traj.steps;
    }
    t = t_next;
    record(t);
  }
  traj.renormalizations = stats.renormalized_sites;
  return traj;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  CsvWriter csv(out, {"t_s", "region", "phi_rad", "trans_len", "fz_mean", "Cg", "phiL_rad",
                      "energy"});
  for (std::size_t i = 0; i < trajectory.times.size(); ++i) {
    const SampleObservables& obs = trajectory.observables[i];
    for (std::size_t r = 0; r < trajectory.regions.size(); ++r) {
      const PhaseReading& ph = obs.phases[r];
      csv.row({format_double(trajectory.times[i]), trajectory.regions[r].label,
               ph.defined ? format_double(ph.phase) : std::string(),
               format_double(ph.transverse_length), format_double(obs.fz_mean[r]),
               format_double(obs.contrast), format_optional(obs.winding),
               format_double(angular_to_hz(obs.energy))});
    }
  }
}

}  // namespace xxz
