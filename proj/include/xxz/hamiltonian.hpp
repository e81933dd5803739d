#pragma once

// Cavity-QED parameters -> coupling constants of the nonlocal XXZ model
//   H = J_xy (Fx^2 + Fy^2) + J_z Fz^2 + h_x F_x + h_z F_z + sum_i h_iz f_iz
// where the quadratic terms use the coupling-weighted collective spin.
//
// Every frequency here is an angular frequency (rad/s).

#include "xxz/spin_core.hpp"

#include <string>
#include <vector>

namespace xxz {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

inline constexpr double hz_to_angular(double hz) { return kTwoPi * hz; }
inline constexpr double angular_to_hz(double w) { return w / kTwoPi; }

struct PhysicalParams {
  double g = hz_to_angular(1.25e6);              // vacuum Rabi half-splitting
  double atom_detuning = hz_to_angular(-11e9);   // Delta, sign-carrying
  double drive_detuning = hz_to_angular(5.3e6);  // delta, sign-carrying
  double omega_per_photon = hz_to_angular(7.0);  // Omega, mean-atom vector shift
  double n_photons = 5000.0;
  double kappa = hz_to_angular(200e3);
  double larmor = hz_to_angular(2.1e6);  // omega_Z at |B| = 3 G
  double theta = 0.0;                    // field angle from the cavity axis, rad

  // Throws ConfigError on n < 0, kappa <= 0, theta outside [0, pi/2] or
  // non-finite entries.
  void validate() const;
  // Large-detuning checks |delta| >= 5 max(omega_Z, kappa); never fatal.
  std::vector<std::string> validity_warnings() const;
};

struct CouplingSet {
  double j_xy = 0.0;
  double j_z = 0.0;
  double h_x = 0.0;
  double h_z = 0.0;
  double gradient = 0.0;    // mu, per unit zeta: h_kz = mu * zeta_k
  double scattering = 0.0;  // isotropic contrast decay rate, 1/s
  std::vector<double> inhom;  // optional per-site extra h_z, empty or one per site

  void validate() const;
};

// Omega_0 = -g^2 / (6 Delta): maximal vector light shift per circularly
// polarized intracavity photon.
double vector_shift_per_photon(double g, double atom_detuning);

// J_0 = n Omega^2 / delta, the large-detuning coupling scale.
double bare_coupling(double n_photons, double omega, double drive_detuning);

struct XxzCouplings {
  double j_xy = 0.0;
  double j_z = 0.0;
};

// J_z = J_0 cos^2(theta), J_xy = (J_0 / 2) sin^2(theta).
XxzCouplings couplings_from_angle(double j0, double theta);

inline double effective_ising(double j_xy, double j_z) { return j_z - j_xy; }

struct CollectiveParameter {
  double lambda = 0.0;
  bool zero_spin = false;  // |F| vanished; lambda reported as 0
};

// Lambda = J |weighted collective spin|.
CollectiveParameter collective_parameter(double j, const EnsembleState& state);

// omega_{c+} - omega_{c-} = 2 Omega F.z_c with z_c = (sin theta, 0, cos theta)
// in the rotating-frame snapshot.
double birefringent_splitting(double omega, const EnsembleState& state, double theta);

}  // namespace xxz
