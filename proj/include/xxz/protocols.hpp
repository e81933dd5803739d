#pragma once

// Scripted reproductions of the three experiments (Hamiltonian tomography,
// magnetic susceptibility, dephasing under a field gradient) together with
// the large-spin equilibrium model they are compared against.

#include "xxz/fitting.hpp"
#include "xxz/hamiltonian.hpp"
#include "xxz/meanfield.hpp"
#include "xxz/spin_core.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace xxz {

// ---------------------------------------------------------------------------
// Large-|F| equilibrium model. With every spin sharing one direction,
//   E(m) / |F| = Lambda_eff m^2 - h_x sqrt(1 - m^2) + h_z m,   m = cos(theta_spin)
// (the transverse component sits antiparallel to h_x). The minimizer has the
// opposite sign to h_z, so the susceptibility is chi = -dm / d(h_z / h_x).

struct Equilibrium {
  double m = 0.0;
  double energy = 0.0;      // E / |F| at the minimizer
  bool degenerate = false;  // two minima of equal energy (h_z = 0 ferromagnet)
};

Equilibrium equilibrium_magnetization(double lambda_eff, double h_x, double h_z);

enum class MagneticPhase { Paramagnet, Critical, Ferromagnet };
std::string to_string(MagneticPhase phase);

struct Susceptibility {
  double chi = 0.0;  // +inf at the critical point
  MagneticPhase phase = MagneticPhase::Paramagnet;
};

// chi = 1 / (2 Lambda_eff / h_x + 1), the paramagnetic-branch law. Beyond the
// critical point the formula is still returned (negative) with the phase set
// to Ferromagnet; see ordered_susceptibility for the broken-symmetry branch.
Susceptibility susceptibility_analytic(double lambda_eff, double h_x);

// Zero-field susceptibility on the symmetry-broken branch, x = 2 Lambda_eff / h_x < -1:
//   chi = 1 / (|x| (x^2 - 1)).
double ordered_susceptibility(double lambda_eff, double h_x);

// ---------------------------------------------------------------------------
// Adiabatic preparation: every spin antiparallel to its local field, iterated
// to self-consistency with adaptive mixing. Spin lengths are kept.

struct GroundState {
  EnsembleState state;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;
};

GroundState prepare_ground_state(EnsembleState state, const CouplingSet& couplings,
                                 double tolerance = 1e-10, int max_iterations = 200000);

// ---------------------------------------------------------------------------
// Susceptibility scan.

struct SusceptibilityOptions {
  double epsilon = 0.05;      // largest |h_z| / h_x probed
  double ramp_duration = 5e-3;
  int ramp_knots = 200;       // sin^2 ramp sampled as a piecewise-linear profile
  double sample_dt = 1e-4;
  double max_step_angle = 1e-3;
};

struct SusceptibilityScan {
  std::vector<double> hz;  // angular frequency, symmetric about zero
  std::vector<double> m;   // density-weighted <f_z> / <|f|> after the ramp
  double chi = 0.0;
  double lambda_eff = 0.0;  // (J_z - J_xy) |F| at preparation
  bool capped = false;
  std::vector<std::string> warnings;
};

// Probes h_z in {-eps, -eps/2, +eps/2, +eps} h_x. chi combines the central
// differences at eps and eps/2 by Richardson extrapolation. The cap 1/eps is
// applied when that estimate exceeds it or when the curve extrapolates to a
// zero-field magnetization larger than half of m(eps) (a jump at h_z = 0).
SusceptibilityScan run_susceptibility(const EnsembleState& ensemble, const CouplingSet& couplings,
                                      const SusceptibilityOptions& options = {});

void write_scan_csv(std::ostream& out, const SusceptibilityScan& scan);

// ---------------------------------------------------------------------------
// Hamiltonian tomography.

struct TomographyOptions {
  int delta_sign = +1;
  double duration_ising = 0.0;  // 0 -> about one radian of probe precession
  double duration_xy = 0.0;     // 0 -> 0.6 of the slower probe's rotation period
  int samples = 41;
  std::optional<double> probe_b;  // default: centre of region B
  std::optional<double> probe_c;  // default: centre of region C
  double max_step_angle = 1e-3;
};

struct ProbeEstimate {
  double zeta = 0.0;
  double c = 0.0;
  double j = 0.0;
  double error = 0.0;
  FitResult fit;
};

struct TomographyResult {
  double theta = 0.0;
  int delta_sign = +1;
  XxzCouplings input;  // what the simulator was driven with
  double j_z = 0.0, j_z_error = 0.0;
  double j_xy = 0.0, j_xy_error = 0.0;
  std::vector<ProbeEstimate> ising_probes;
  std::vector<ProbeEstimate> xy_probes;
  // Relative disagreement between the two probes (0 when both vanish).
  double ising_consistency = 0.0;
  double xy_consistency = 0.0;
  std::vector<std::string> warnings;
};

TomographyResult run_tomography(const EnsembleState& ensemble, const PhysicalParams& params,
                                const TomographyOptions& options = {});

void write_tomography_csv(std::ostream& out, const std::vector<TomographyResult>& rows);

// ---------------------------------------------------------------------------
// Dephasing and gap protection.

enum class InteractionKind { None, Ising, XY };

struct DephasingOptions {
  double gradient = hz_to_angular(2.1e3);  // mu per unit zeta
  // Aligning field before the quench; unset -> the largest |mu zeta| on the cloud.
  std::optional<double> hx_pre;
  double duration = 1e-3;
  double sample_dt = 1e-5;
  double window_length = 0.714;  // L in units of z_R
  InteractionKind interaction = InteractionKind::None;
  double lambda_over_muL = 0.0;  // Lambda / (mu L), sign-carrying
  double scattering = 0.0;
  double max_step_angle = 1e-3;
};

struct DephasingResult {
  Trajectory trajectory;
  std::vector<double> times;
  std::vector<std::optional<double>> winding;  // phi_L(t)
  std::vector<double> contrast;                // C_g(t)
  double lambda_over_muL = 0.0;                // achieved, from the prepared |F|
  double hx_pre = 0.0;                         // aligning field actually used
  CouplingSet couplings;                       // post-quench
  EnsembleState prepared;                      // state at the quench
  FitResult winding_fit;                       // phi_L(t) linear fit
};

DephasingResult run_dephasing(const EnsembleState& ensemble, const DephasingOptions& options);

void write_dephasing_csv(std::ostream& out, const DephasingResult& result);

// ---------------------------------------------------------------------------
// Phase diagram of H_XXZ + h_x F_x in the collective-spin limit.

struct PhaseDiagramPoint {
  double lambda_z = 0.0;   // in units of h_x
  double lambda_xy = 0.0;  // in units of h_x
  double lambda_eff = 0.0;
  double log_chi = 0.0;    // +inf on the critical line
  MagneticPhase phase = MagneticPhase::Paramagnet;
  std::optional<double> theta;  // set on angle cuts
};

// log chi over the (Lambda^z, Lambda^xy) grid, using the paramagnetic law
// or the ordered-branch susceptibility as appropriate.
std::vector<PhaseDiagramPoint> phase_diagram(const std::vector<double>& lambda_z_over_hx,
                                             const std::vector<double>& lambda_xy_over_hx);

// Fixed drive power cut: Lambda_eff(theta) = Lambda_0 (cos^2 theta - sin^2 theta / 2).
std::vector<PhaseDiagramPoint> phase_diagram_angle_cut(double lambda0_over_hx,
                                                       const std::vector<double>& thetas);

void write_phase_diagram_csv(std::ostream& out, const std::vector<PhaseDiagramPoint>& points);

}  // namespace xxz
