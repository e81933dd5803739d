#pragma once

// Coarse-grained representation of an inhomogeneously coupled spin ensemble
// and the observables read off it.
//
// The physical cloud of N atoms is discretized into macro-sites along the
// cavity axis. Each site carries a population weight w (atoms represented),
// a coupling weight c to the cavity mode, and a classical spin vector f with
// |f| <= 1. Collective quantities are w-weighted sums, so their magnitude is
// that of the physical ensemble regardless of the number of sites.

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace xxz {

using Vec3 = Eigen::Vector3d;

struct Site {
  double zeta = 0.0;  // position along the cavity axis, units of z_R
  double c = 1.0;     // coupling weight, population-weighted mean 1
  double w = 0.0;     // atoms represented by this site
  Vec3 f = Vec3::Zero();
};

struct EnsembleState {
  std::vector<Site> sites;
  double atom_number = 0.0;
  double rayleigh_range_m = 1.4e-3;
  // Support of the density profile (sites sit at bin midpoints inside it).
  double support_lo = -0.5;
  double support_hi = 0.5;
  // Contrast that prepare_* operations use when none is given.
  double initial_contrast = 1.0;
};

// Half-open interval [lo, hi) in zeta.
struct Region {
  std::string label;
  double lo = 0.0;
  double hi = 0.0;

  static Region make(std::string label, double lo, double hi);
  bool contains(double zeta) const { return zeta >= lo && zeta < hi; }
  bool overlaps(const Region& other) const { return lo < other.hi && other.lo < hi; }
};

enum class CloudShape { Uniform, Gaussian };

struct CloudSpec {
  CloudShape shape = CloudShape::Uniform;
  double zeta_min = -0.5;
  double zeta_max = 0.5;
  // Gaussian only; density is truncated to [zeta_min, zeta_max].
  double center = 0.0;
  double sigma = 0.25;
};

// Coupling profile c(zeta) before normalization.
struct CouplingProfile {
  enum class Kind { Uniform, Lorentzian, Table };
  Kind kind = Kind::Lorentzian;
  // (zeta, c) knots, linearly interpolated and held constant past the ends.
  std::vector<std::pair<double, double>> table;

  static CouplingProfile uniform() { return {Kind::Uniform, {}}; }
  static CouplingProfile lorentzian() { return {Kind::Lorentzian, {}}; }
  static CouplingProfile from_table(std::vector<std::pair<double, double>> knots);

  double operator()(double zeta) const;
};

EnsembleState make_ensemble(double atom_number, int n_sites, const CloudSpec& cloud,
                            const CouplingProfile& profile, double contrast);

// The profile factor that make_ensemble divided out: population-weighted mean
// of the raw profile over the sites.
double raw_coupling_mean(const EnsembleState& state, const CouplingProfile& profile);

double total_weight(const EnsembleState& state);

// Sum_k w_k c_k f_k -- the spin the cavity mode couples to.
Vec3 weighted_collective_spin(const EnsembleState& state);
// Sum_k w_k f_k.
Vec3 unweighted_collective_spin(const EnsembleState& state);

struct PhaseReading {
  bool defined = false;
  double phase = 0.0;              // in (-pi, pi] when defined
  double transverse_length = 0.0;  // sqrt(<fx>^2 + <fy>^2)
};

inline constexpr double kTransverseTolerance = 1e-6;

PhaseReading local_phase(const EnsembleState& state, const Region& region,
                         double tolerance = kTransverseTolerance);

// Population-weighted mean f_z; throws ConfigError on an empty region.
double local_magnetization(const EnsembleState& state, const Region& region);

// Population-weighted mean spin vector over a region (zero if empty).
Vec3 region_mean_spin(const EnsembleState& state, const Region& region);

// (1/N) |F_perp| with the unweighted collective spin.
double global_contrast(const EnsembleState& state);

struct WindingOptions {
  double center = 0.0;
  int bins = 20;
  double tolerance = kTransverseTolerance;
};

// Unwrapped phase difference phi(center + L/2) - phi(center - L/2). Local
// phases are read in `bins` equal bins across the window, unwrapped bin to bin
// onto the nearest branch, and the window edges are reached by linear
// extrapolation from the two outermost bins, each placed at the mean zeta of
// its atoms. Throws NumericalError naming the first bin whose phase is
// undefined.
double phase_winding(const EnsembleState& state, double length, const WindingOptions& opts = {});

EnsembleState prepare_polarized(EnsembleState state, const Region& region, const Vec3& direction,
                                double contrast);

struct TextureRegions {
  Region a, b, c;
};

// Left, middle and right thirds of the cloud support.
TextureRegions default_texture_regions(const EnsembleState& state);

// |alpha>_A |x>_B |-x>_C. The contrast of whichever probe region has the
// larger sum of w*c is scaled down so the weighted collective spins of B and
// C cancel exactly.
EnsembleState prepare_texture(EnsembleState state, const Vec3& alpha, double contrast,
                              const TextureRegions& regions);
EnsembleState prepare_texture(EnsembleState state, const Vec3& alpha, double contrast);

// Region holding only the site nearest to zeta.
Region probe_region(const EnsembleState& state, double zeta, std::string label = "probe");

// CSV: site_index,zeta,c,w,fx,fy,fz
void write_state_csv(std::ostream& out, const EnsembleState& state);

}  // namespace xxz
