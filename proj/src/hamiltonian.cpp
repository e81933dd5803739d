#include "xxz/hamiltonian.hpp"

#include "xxz/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace xxz {

void PhysicalParams::validate() const {
  for (double v : {g, atom_detuning, drive_detuning, omega_per_photon, n_photons, kappa, larmor,
                   theta})
    if (!std::isfinite(v)) throw ConfigError("physical parameters must be finite");
  if (n_photons < 0.0) throw ConfigError("photon number must be non-negative");
  if (!(kappa > 0.0)) throw ConfigError("cavity linewidth must be positive");
  if (theta < 0.0 || theta > 0.5 * std::numbers::pi + 1e-12)
    throw ConfigError("field angle must lie in [0, 90] degrees");
}

std::vector<std::string> PhysicalParams::validity_warnings() const {
  std::vector<std::string> out;
  const double scale = std::max(larmor, kappa);
  if (std::abs(drive_detuning) < 5.0 * scale)
    out.push_back("large-detuning limit questionable: |delta| < 5 max(omega_Z, kappa)");
  return out;
}

void CouplingSet::validate() const {
  for (double v : {j_xy, j_z, h_x, h_z, gradient, scattering})
    if (!std::isfinite(v)) throw ConfigError("couplings must be finite");
  for (double v : inhom)
    if (!std::isfinite(v)) throw ConfigError("inhomogeneous field table must be finite");
  if (scattering < 0.0) throw ConfigError("scattering rate must be non-negative");
}

double vector_shift_per_photon(double g, double atom_detuning) {
  if (atom_detuning == 0.0) throw ConfigError("atomic detuning must be nonzero");
  return -g * g / (6.0 * atom_detuning);
}

double bare_coupling(double n_photons, double omega, double drive_detuning) {
  if (drive_detuning == 0.0) throw ConfigError("drive detuning must be nonzero");
  return n_photons * omega * omega / drive_detuning;
}

XxzCouplings couplings_from_angle(double j0, double theta) {
  if (theta < 0.0 || theta > 0.5 * std::numbers::pi + 1e-12)
    throw ConfigError("field angle must lie in [0, pi/2]");
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  return {0.5 * j0 * s * s, j0 * c * c};
}

CollectiveParameter collective_parameter(double j, const EnsembleState& state) {
  const double length = weighted_collective_spin(state).norm();
  if (length == 0.0) return {0.0, true};
  return {j * length, false};
}

double birefringent_splitting(double omega, const EnsembleState& state, double theta) {
  const Vec3 axis(std::sin(theta), 0.0, std::cos(theta));
  return 2.0 * omega * weighted_collective_spin(state).dot(axis);
}

}  // namespace xxz
