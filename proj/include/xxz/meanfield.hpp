#pragma once

// Classical mean-field dynamics of the ensemble under
//   H_tot = J_xy (Fx^2 + Fy^2) + J_z Fz^2 + h_x F_x + h_z F_z + sum_k w_k h_kz f_kz
// Each spin precesses as  df_k/dt = B_k x f_k  with B_k the gradient of H
// per atom of site k. With this sign a positive h_z turns x into y.

#include "xxz/hamiltonian.hpp"
#include "xxz/spin_core.hpp"

#include <array>
#include <optional>
#include <vector>

namespace xxz {

enum class Parameter { JXY, JZ, HX, HZ, Gradient, Scattering };
inline constexpr std::array<Parameter, 6> kAllParameters = {
    Parameter::JXY,      Parameter::JZ,        Parameter::HX,
    Parameter::HZ,       Parameter::Gradient,  Parameter::Scattering};

struct Knot {
  double t = 0.0;
  double value = 0.0;
};

// Piecewise-linear time profiles for every CouplingSet entry. A parameter
// without knots keeps its base value; profiles are held constant outside
// their first and last knot. The per-site inhom table is static.
class Schedule {
 public:
  Schedule(CouplingSet base, double duration);

  void set_profile(Parameter p, std::vector<Knot> knots);
  const std::vector<Knot>& profile(Parameter p) const;

  CouplingSet at(double t) const;
  double duration() const { return duration_; }
  // Largest |value| the parameter takes anywhere in [0, duration].
  double max_abs(Parameter p) const;
  const CouplingSet& base() const { return base_; }

 private:
  CouplingSet base_;
  double duration_;
  std::array<std::vector<Knot>, kAllParameters.size()> profiles_;
};

double get(const CouplingSet& c, Parameter p);
void set(CouplingSet& c, Parameter p, double value);

// Field on one atom of site k; computes the weighted collective spin itself.
Vec3 local_field(const EnsembleState& state, const CouplingSet& couplings, std::size_t k);

double energy(const EnsembleState& state, const CouplingSet& couplings);

EnsembleState apply_scattering(EnsembleState state, double rate, double dt);

struct StepStats {
  int renormalized_sites = 0;  // sites whose norm drifted by more than 1e-12
};

// One RK4 step with static couplings, followed by scattering decay. Throws
// NumericalError when dt * max|B| exceeds 0.5 rad.
EnsembleState step(EnsembleState state, const CouplingSet& couplings, double dt,
                   StepStats* stats = nullptr);

struct SampleObservables {
  std::vector<PhaseReading> phases;  // one per region
  std::vector<double> fz_mean;       // one per region
  double contrast = 0.0;             // C_g
  std::optional<double> winding;     // phi_L, when requested and defined
  double energy = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<EnsembleState> states;
  std::vector<SampleObservables> observables;
  std::vector<Region> regions;
  double internal_dt = 0.0;
  long long steps = 0;
  long long renormalizations = 0;
};

struct EvolveOptions {
  double max_step_angle = 1e-3;  // rad per step at the field-magnitude bound
  std::vector<Region> regions;   // empty -> whole cloud as "all"
  std::optional<double> winding_length;
  WindingOptions winding;
  bool keep_states = true;
};

Trajectory evolve(const EnsembleState& initial, const Schedule& schedule, double sample_dt,
                  const EvolveOptions& options = {});

// Upper bound on |B_k| over the run, used to pick the internal step.
double field_bound(const EnsembleState& state, const Schedule& schedule);

// Columns t_s,region,phi_rad,trans_len,fz_mean,Cg,phiL_rad,energy (energy in Hz).
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

}  // namespace xxz
