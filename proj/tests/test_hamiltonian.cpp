#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "xxz/errors.hpp"
#include "xxz/hamiltonian.hpp"

#include <cmath>
#include <limits>
#include <numbers>

using namespace xxz;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

EnsembleState polarized(double atoms, double contrast, const Vec3& dir) {
  EnsembleState s = make_ensemble(atoms, 5, CloudSpec{}, CouplingProfile::uniform(), contrast);
  for (Site& site : s.sites) site.f = contrast * dir;
  return s;
}

}  // namespace

TEST_CASE("vector light shift per photon") {
  const double g = hz_to_angular(1.25e6);
  const double delta = hz_to_angular(-11e9);
  const double w = vector_shift_per_photon(g, delta);
  // g^2 / (6 |Delta|) = (1.25e6)^2 / 66e9 Hz
  CHECK(angular_to_hz(w) == doctest::Approx(1.5625e12 / 66e9).epsilon(1e-12));
  CHECK(angular_to_hz(w) == doctest::Approx(23.7).epsilon(0.002));
  CHECK(vector_shift_per_photon(g, -delta) == doctest::Approx(-w));
  CHECK(vector_shift_per_photon(2 * g, delta) == doctest::Approx(4 * w));
  CHECK_THROWS_AS(vector_shift_per_photon(g, 0.0), ConfigError);
}

TEST_CASE("bare coupling") {
  const double omega = hz_to_angular(7.0);
  const double delta = hz_to_angular(5.3e6);
  const double j0 = bare_coupling(5000, omega, delta);
  CHECK(angular_to_hz(j0) == doctest::Approx(5000 * 49.0 / 5.3e6).epsilon(1e-12));
  CHECK(angular_to_hz(j0) == doctest::Approx(46.2e-3).epsilon(1e-3));
  CHECK(bare_coupling(5000, omega, -delta) == doctest::Approx(-j0));
  CHECK(bare_coupling(10000, omega, delta) == doctest::Approx(2 * j0));
  CHECK(bare_coupling(0, omega, delta) == 0.0);
  CHECK_THROWS_AS(bare_coupling(5000, omega, 0.0), ConfigError);
}

TEST_CASE("couplings from angle") {
  const double j0 = 2.0;
  XxzCouplings c = couplings_from_angle(j0, 0.0);
  CHECK(c.j_xy == doctest::Approx(0.0));
  CHECK(c.j_z == doctest::Approx(j0));
  c = couplings_from_angle(j0, 90 * kDeg);
  CHECK(c.j_xy == doctest::Approx(j0 / 2));
  CHECK(std::abs(c.j_z) <= 1e-15);
  c = couplings_from_angle(j0, 53 * kDeg);
  CHECK(c.j_xy / j0 == doctest::Approx(0.319).epsilon(2e-3));
  CHECK(c.j_z / j0 == doctest::Approx(0.362).epsilon(2e-3));
}

TEST_CASE("angle law: J_z/J_z(0) + 2 J_xy/J_z(0) = 1 and J_eff monotone over [-J0/2, J0]") {
  const double j0 = -0.7;
  double prev = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 90; ++i) {
    const XxzCouplings c = couplings_from_angle(j0, i * kDeg);
    CHECK(c.j_z / j0 + 2 * c.j_xy / j0 == doctest::Approx(1.0).epsilon(1e-14));
    // For J0 < 0 the effective Ising coupling rises from J0 to -J0/2.
    const double eff = effective_ising(c.j_xy, c.j_z);
    if (i > 0) CHECK(-eff < -prev + 1e-15);
    prev = eff;
    CHECK(eff >= j0 - 1e-15);
    CHECK(eff <= -j0 / 2 + 1e-15);
  }
}

TEST_CASE("effective Ising coupling") {
  CHECK(effective_ising(0.3, 0.3) == 0.0);
  CHECK(effective_ising(0.0, 1.5) == 1.5);
  const XxzCouplings c = couplings_from_angle(1.0, 90 * kDeg);
  CHECK(effective_ising(c.j_xy, c.j_z) == doctest::Approx(-0.5));
}

TEST_CASE("collective parameter") {
  const double j = hz_to_angular(46.2e-3);
  const CollectiveParameter p = collective_parameter(j, polarized(1e5, 0.67, Vec3::UnitX()));
  CHECK_FALSE(p.zero_spin);
  CHECK(angular_to_hz(p.lambda) == doctest::Approx(3.1e3).epsilon(0.01));
  CHECK(collective_parameter(0.0, polarized(1e5, 1.0, Vec3::UnitX())).lambda == 0.0);
  CHECK(collective_parameter(0.25, polarized(1e3, 1.0, Vec3::UnitY())).lambda == doctest::Approx(250.0));

  EnsembleState empty = make_ensemble(1e5, 4, CloudSpec{}, CouplingProfile::uniform(), 1.0);
  const CollectiveParameter z = collective_parameter(1.0, empty);
  CHECK(z.zero_spin);
  CHECK(z.lambda == 0.0);
}

TEST_CASE("birefringent splitting") {
  const double omega = hz_to_angular(7.0);
  const EnsembleState up = polarized(1e5, 1.0, Vec3::UnitZ());
  CHECK(angular_to_hz(birefringent_splitting(omega, up, 0.0)) == doctest::Approx(1.4e6));
  // F along x is perpendicular to the cavity axis at theta = 0.
  CHECK(std::abs(birefringent_splitting(omega, polarized(1e5, 1.0, Vec3::UnitX()), 0.0)) <= 1e-9);
  CHECK(birefringent_splitting(0.0, up, 0.3) == 0.0);
  CHECK(birefringent_splitting(omega, up, 60 * kDeg) == doctest::Approx(0.5 * birefringent_splitting(omega, up, 0.0)));
}

TEST_CASE("parameter validation") {
  PhysicalParams p;
  CHECK_NOTHROW(p.validate());
  CHECK(p.validity_warnings().empty() == false);  // |delta| = 5.3 MHz < 5 * 2.1 MHz

  PhysicalParams far = p;
  far.larmor = hz_to_angular(0.5e6);
  CHECK(far.validity_warnings().empty());

  PhysicalParams bad = p;
  bad.n_photons = -1;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = p;
  bad.kappa = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = p;
  bad.theta = 100 * kDeg;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = p;
  bad.g = std::nan("");
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  CouplingSet c;
  CHECK_NOTHROW(c.validate());
  c.scattering = -1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.scattering = 0.0;
  c.inhom = {0.0, std::numeric_limits<double>::infinity()};
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("unit conversion") {
  CHECK(hz_to_angular(1.0) == doctest::Approx(2 * std::numbers::pi));
  CHECK(angular_to_hz(hz_to_angular(123.4)) == doctest::Approx(123.4));
}
