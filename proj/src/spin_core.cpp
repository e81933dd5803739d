#include "xxz/spin_core.hpp"

#include "xxz/csv.hpp"
#include "xxz/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace xxz {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_phase(double phi) {
  // atan2 and remainder both land on [-pi, pi]; fold -pi onto +pi.
  phi = std::remainder(phi, 2.0 * kPi);
  if (phi <= -kPi) phi += 2.0 * kPi;
  return phi;
}

PhaseReading phase_of(const Vec3& mean, double tolerance) {
  PhaseReading r;
  r.transverse_length = std::hypot(mean.x(), mean.y());
  if (r.transverse_length > tolerance) {
    r.defined = true;
    r.phase = wrap_phase(std::atan2(mean.y(), mean.x()));
  }
  return r;
}

void require_unit(const Vec3& direction) {
  if (!direction.allFinite() || std::abs(direction.norm() - 1.0) > 1e-9)
    throw ConfigError("direction must be a unit vector");
}

void require_contrast(double contrast) {
  if (!(contrast > 0.0 && contrast <= 1.0)) throw ConfigError("contrast must lie in (0, 1]");
}

}  // namespace

Region Region::make(std::string label, double lo, double hi) {
  if (!(lo < hi)) throw ConfigError("region '" + label + "': need zeta_lo < zeta_hi");
  return Region{std::move(label), lo, hi};
}

CouplingProfile CouplingProfile::from_table(std::vector<std::pair<double, double>> knots) {
  if (knots.empty()) throw ConfigError("coupling table is empty");
  std::sort(knots.begin(), knots.end());
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!(knots[i].second > 0.0) || !std::isfinite(knots[i].second))
      throw ConfigError("coupling table values must be positive and finite");
    if (i && knots[i].first == knots[i - 1].first)
      throw ConfigError("coupling table has duplicate zeta");
  }
  return CouplingProfile{Kind::Table, std::move(knots)};
}

double CouplingProfile::operator()(double zeta) const {
  switch (kind) {
    case Kind::Uniform:
      return 1.0;
    case Kind::Lorentzian:
      return 1.0 / (1.0 + zeta * zeta);
    case Kind::Table: {
      if (zeta <= table.front().first) return table.front().second;
      if (zeta >= table.back().first) return table.back().second;
      auto hi = std::upper_bound(table.begin(), table.end(), zeta,
                                 [](double z, const auto& knot) { return z < knot.first; });
      auto lo = hi - 1;
      double u = (zeta - lo->first) / (hi->first - lo->first);
      return lo->second + u * (hi->second - lo->second);
    }
  }
  return 1.0;
}

EnsembleState make_ensemble(double atom_number, int n_sites, const CloudSpec& cloud,
                            const CouplingProfile& profile, double contrast) {
  if (!(atom_number > 0.0) || !std::isfinite(atom_number))
    throw ConfigError("atom number must be positive");
  if (n_sites < 1) throw ConfigError("need at least one site");
  require_contrast(contrast);
  if (!(cloud.zeta_min < cloud.zeta_max)) throw ConfigError("empty density support");
  if (cloud.shape == CloudShape::Gaussian && !(cloud.sigma > 0.0))
    throw ConfigError("empty density support: gaussian sigma must be positive");

  EnsembleState state;
  state.atom_number = atom_number;
  state.support_lo = cloud.zeta_min;
  state.support_hi = cloud.zeta_max;
  state.initial_contrast = contrast;
  state.sites.resize(static_cast<std::size_t>(n_sites));

  const double width = (cloud.zeta_max - cloud.zeta_min) / n_sites;
  double density_sum = 0.0;
  for (int k = 0; k < n_sites; ++k) {
    Site& s = state.sites[static_cast<std::size_t>(k)];
    s.zeta = cloud.zeta_min + (k + 0.5) * width;
    if (cloud.shape == CloudShape::Uniform) {
      s.w = 1.0;
    } else {
      double u = (s.zeta - cloud.center) / cloud.sigma;
      s.w = std::exp(-0.5 * u * u);
    }
    density_sum += s.w;
  }
  if (!(density_sum > 0.0)) throw ConfigError("empty density support");

  double wc = 0.0;
  for (Site& s : state.sites) {
    s.w *= atom_number / density_sum;
    s.c = profile(s.zeta);
    if (!(s.c > 0.0)) throw ConfigError("coupling profile must be positive on the cloud");
    wc += s.w * s.c;
  }
  const double mean_c = wc / atom_number;
  for (Site& s : state.sites) s.c /= mean_c;
  return state;
}

double raw_coupling_mean(const EnsembleState& state, const CouplingProfile& profile) {
  double acc = 0.0;
  for (const Site& s : state.sites) acc += s.w * profile(s.zeta);
  return acc / total_weight(state);
}

double total_weight(const EnsembleState& state) {
  double acc = 0.0;
  for (const Site& s : state.sites) acc += s.w;
  return acc;
}

Vec3 weighted_collective_spin(const EnsembleState& state) {
  Vec3 acc = Vec3::Zero();
  for (const Site& s : state.sites) acc += (s.w * s.c) * s.f;
  return acc;
}

Vec3 unweighted_collective_spin(const EnsembleState& state) {
  Vec3 acc = Vec3::Zero();
  for (const Site& s : state.sites) acc += s.w * s.f;
  return acc;
}

Vec3 region_mean_spin(const EnsembleState& state, const Region& region) {
  Vec3 acc = Vec3::Zero();
  double weight = 0.0;
  for (const Site& s : state.sites) {
    if (!region.contains(s.zeta)) continue;
    acc += s.w * s.f;
    weight += s.w;
  }
  return weight > 0.0 ? Vec3(acc / weight) : Vec3(Vec3::Zero());
}

PhaseReading local_phase(const EnsembleState& state, const Region& region, double tolerance) {
  return phase_of(region_mean_spin(state, region), tolerance);
}

double local_magnetization(const EnsembleState& state, const Region& region) {
  double acc = 0.0;
  double weight = 0.0;
  for (const Site& s : state.sites) {
    if (!region.contains(s.zeta)) continue;
    acc += s.w * s.f.z();
    weight += s.w;
  }
  if (!(weight > 0.0)) throw ConfigError("region '" + region.label + "' holds no atoms");
  return acc / weight;
}

double global_contrast(const EnsembleState& state) {
  Vec3 F = unweighted_collective_spin(state);
  return std::hypot(F.x(), F.y()) / state.atom_number;
}

double phase_winding(const EnsembleState& state, double length, const WindingOptions& opts) {
  if (!(length > 0.0)) throw ConfigError("winding length must be positive");
  if (opts.bins < 2) throw ConfigError("phase winding needs at least two bins");

  const double lo = opts.center - 0.5 * length;
  const double h = length / opts.bins;
  std::vector<Vec3> sums(static_cast<std::size_t>(opts.bins), Vec3::Zero());
  std::vector<double> weights(sums.size(), 0.0);
  std::vector<double> where(sums.size(), 0.0);  // weighted mean zeta, where the bin phase is read
  for (const Site& s : state.sites) {
    double u = (s.zeta - lo) / h;
    if (u < 0.0 || u >= opts.bins) continue;
    auto b = static_cast<std::size_t>(u);
    sums[b] += s.w * s.f;
    weights[b] += s.w;
    where[b] += s.w * s.zeta;
  }

  std::vector<double> unwrapped(sums.size());
  for (std::size_t b = 0; b < sums.size(); ++b) {
    Vec3 mean = weights[b] > 0.0 ? Vec3(sums[b] / weights[b]) : Vec3(Vec3::Zero());
    PhaseReading r = phase_of(mean, opts.tolerance);
    if (!r.defined)
      throw NumericalError("phase winding: phase undefined in bin " + std::to_string(b) + " of " +
                           std::to_string(opts.bins));
    where[b] /= weights[b];
    if (b == 0) {
      unwrapped[b] = r.phase;
    } else {
      unwrapped[b] = unwrapped[b - 1] + wrap_phase(r.phase - unwrapped[b - 1]);
    }
  }
  const std::size_t n = unwrapped.size();
  auto extrapolate = [&](std::size_t i, std::size_t j, double z) {
    if (where[j] == where[i]) return unwrapped[i];
    return unwrapped[i] + (unwrapped[j] - unwrapped[i]) * (z - where[i]) / (where[j] - where[i]);
  };
  return extrapolate(n - 2, n - 1, lo + length) - extrapolate(0, 1, lo);
}

EnsembleState prepare_polarized(EnsembleState state, const Region& region, const Vec3& direction,
                                double contrast) {
  require_unit(direction);
  require_contrast(contrast);
  for (Site& s : state.sites)
    if (region.contains(s.zeta)) s.f = contrast * direction;
  return state;
}

TextureRegions default_texture_regions(const EnsembleState& state) {
  const double lo = state.support_lo;
  const double third = (state.support_hi - state.support_lo) / 3.0;
  // The last region is closed on the right edge by nudging hi past the support.
  const double hi = std::nextafter(state.support_hi, state.support_hi + 1.0);
  return {Region::make("A", lo, lo + third), Region::make("B", lo + third, lo + 2.0 * third),
          Region::make("C", lo + 2.0 * third, hi)};
}

EnsembleState prepare_texture(EnsembleState state, const Vec3& alpha, double contrast,
                              const TextureRegions& regions) {
  require_unit(alpha);
  require_contrast(contrast);
  if (regions.a.overlaps(regions.b) || regions.a.overlaps(regions.c) ||
      regions.b.overlaps(regions.c))
    throw ConfigError("texture regions overlap");

  double sum_b = 0.0;
  double sum_c = 0.0;
  for (const Site& s : state.sites) {
    if (regions.b.contains(s.zeta)) sum_b += s.w * s.c;
    if (regions.c.contains(s.zeta)) sum_c += s.w * s.c;
  }
  if (!(sum_b > 0.0) || !(sum_c > 0.0)) throw ConfigError("texture probe region holds no atoms");
  const double common = std::min(sum_b, sum_c);

  state = prepare_polarized(std::move(state), regions.a, alpha, contrast);
  state = prepare_polarized(std::move(state), regions.b, Vec3::UnitX(), contrast * common / sum_b);
  state = prepare_polarized(std::move(state), regions.c, -Vec3::UnitX(), contrast * common / sum_c);
  return state;
}

EnsembleState prepare_texture(EnsembleState state, const Vec3& alpha, double contrast) {
  TextureRegions regions = default_texture_regions(state);
  return prepare_texture(std::move(state), alpha, contrast, regions);
}

Region probe_region(const EnsembleState& state, double zeta, std::string label) {
  if (state.sites.empty()) throw ConfigError("ensemble has no sites");
  auto nearest = std::min_element(state.sites.begin(), state.sites.end(),
                                  [zeta](const Site& a, const Site& b) {
                                    return std::abs(a.zeta - zeta) < std::abs(b.zeta - zeta);
                                  });
  const double z = nearest->zeta;
  return Region::make(std::move(label), z, std::nextafter(z, z + 1.0));
}

void write_state_csv(std::ostream& out, const EnsembleState& state) {
  CsvWriter csv(out, {"site_index", "zeta", "c", "w", "fx", "fy", "fz"});
  for (std::size_t k = 0; k < state.sites.size(); ++k) {
    const Site& s = state.sites[k];
    csv.row({std::to_string(k), format_double(s.zeta), format_double(s.c), format_double(s.w),
             format_double(s.f.x()), format_double(s.f.y()), format_double(s.f.z())});
  }
}

}  // namespace xxz
