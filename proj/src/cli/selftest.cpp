#include "xxz/cli/app.hpp"

#include "xxz/csv.hpp"
#include "xxz/exact_quantum.hpp"
#include "xxz/fitting.hpp"
#include "xxz/meanfield.hpp"
#include "xxz/protocols.hpp"

#include <cmath>
#include <functional>
#include <numbers>

namespace xxz::cli {

namespace {

constexpr double kPi = std::numbers::pi;

Region whole(const EnsembleState& s) {
  return Region::make("all", s.support_lo, std::nextafter(s.support_hi, s.support_hi + 1.0));
}

EnsembleState polarized(int sites, const CouplingProfile& profile, const Vec3& dir) {
  CloudSpec cloud;
  EnsembleState s = make_ensemble(1000.0, sites, cloud, profile, 1.0);
  return prepare_polarized(s, whole(s), dir, 1.0);
}

SelftestLine check(const std::string& name, double error, double tolerance) {
  return {name, error <= tolerance,
          "error " + format_double(error) + ", tolerance " + format_double(tolerance)};
}

SelftestLine larmor() {
  const EnsembleState s = polarized(1, CouplingProfile::uniform(), Vec3::UnitX());
  CouplingSet c;
  c.h_z = hz_to_angular(1e3);
  const Trajectory t = evolve(s, Schedule(c, 0.25e-3), 0.25e-3);
  const Vec3 f = t.states.back().sites[0].f;
  return check("larmor precession turns x into y", (f - Vec3::UnitY()).norm(), 1e-9);
}

SelftestLine energy_conservation() {
  EnsembleState s = polarized(12, CouplingProfile::lorentzian(), Vec3(1, 0, 1).normalized());
  CouplingSet c;
  c.j_xy = -hz_to_angular(2e3) / 1000.0;
  c.j_z = hz_to_angular(1e3) / 1000.0;
  c.h_x = hz_to_angular(300.0);
  c.gradient = hz_to_angular(500.0);
  const double e0 = energy(s, c);
  const Trajectory t = evolve(s, Schedule(c, 1e-3), 1e-4);
  const double e1 = energy(t.states.back(), c);
  return check("energy conserved under static couplings", std::abs(e1 - e0) / std::abs(e0), 1e-6);
}

SelftestLine ising_shift() {
  const EnsembleState s = polarized(10, CouplingProfile::uniform(), Vec3(1, 0.3, -0.5).normalized());
  CouplingSet a;
  a.j_xy = hz_to_angular(1.0);
  a.j_z = hz_to_angular(-2.0);
  a.h_x = hz_to_angular(500.0);
  CouplingSet b = a;
  b.j_xy += hz_to_angular(3.0);
  b.j_z += hz_to_angular(3.0);
  EvolveOptions eo;
  eo.max_step_angle = 1e-3;
  const Trajectory ta = evolve(s, Schedule(a, 1e-3), 1e-4, eo);
  const Trajectory tb = evolve(s, Schedule(b, 1e-3), 1e-4, eo);
  double worst = 0.0;
  for (std::size_t i = 0; i < ta.states.size(); ++i)
    worst = std::max(worst, (unweighted_collective_spin(ta.states[i]) -
                             unweighted_collective_spin(tb.states[i])).norm() / 1000.0);
  // Different internal steps make this a discretization comparison.
  return check("uniform shift of J_xy and J_z leaves F(t) unchanged", worst, 1e-8);
}

SelftestLine equilibrium_odd() {
  double worst = 0.0;
  for (double lam : {-0.3, 0.0, 0.7, 2.0}) {
    for (double hz : {0.01, 0.2, 1.5}) {
      const double mp = equilibrium_magnetization(lam, 1.0, hz).m;
      const double mm = equilibrium_magnetization(lam, 1.0, -hz).m;
      worst = std::max(worst, std::abs(mp + mm));
    }
  }
  return check("equilibrium magnetization is odd in h_z", worst, 1e-12);
}

SelftestLine equilibrium_chi() {
  double worst = 0.0;
  for (double lam : {-0.3, 0.0, 0.5, 2.0}) {
    const double h = 1e-5;
    const double chi = -(equilibrium_magnetization(lam, 1.0, h).m -
                         equilibrium_magnetization(lam, 1.0, -h).m) / (2.0 * h);
    worst = std::max(worst, std::abs(chi - susceptibility_analytic(lam, 1.0).chi));
  }
  return check("equilibrium slope matches 1/(2 Lambda_eff/h_x + 1)", worst, 1e-6);
}

SelftestLine gap_law() {
  double worst = 0.0;
  for (int n = 2; n <= 4; ++n) {
    const QuantumSystem sys = build_system(n);
    worst = std::max(worst, std::abs(protection_gap(sys, -1.0) - 2.0 * n));
  }
  return check("protection gap equals 2|J_xy| N (N = 2..4)", worst, 1e-10);
}

SelftestLine light_shift() {
  const double w = vector_shift_per_photon(hz_to_angular(1.25e6), hz_to_angular(-11e9));
  return check("maximal vector light shift near 23.7 Hz", std::abs(angular_to_hz(w) - 23.674), 0.01);
}

SelftestLine sinusoid_fit() {
  std::vector<double> t, y;
  for (int i = 0; i <= 100; ++i) {
    t.push_back(i / 100.0);
    y.push_back(0.5 * std::sin(2.0 * kPi * 10.0 * t.back()));
  }
  const FitResult f = fit_sinusoid(t, y);
  const double err = std::max({std::abs(f.value("amplitude") - 0.5), std::abs(f.value("frequency") - 10.0),
                               std::abs(f.value("phase")), std::abs(f.value("offset"))});
  return check("noiseless sinusoid fit", f.converged ? err : 1.0, 1e-6);
}

}  // namespace

std::vector<SelftestLine> run_selftest() {
  const std::vector<std::function<SelftestLine()>> checks = {
      larmor, energy_conservation, ising_shift, equilibrium_odd, equilibrium_chi,
      gap_law, light_shift,        sinusoid_fit};
  std::vector<SelftestLine> out;
  for (const auto& c : checks) {
    try {
      out.push_back(c());
    } catch (const std::exception& e) {
      out.push_back({"(check threw)", false, e.what()});
    }
  }
  return out;
}

}  // namespace xxz::cli
