#pragma once

// Dense exact treatment of N <= 6 spin-1 atoms. Single-site basis order is
// m = +1, 0, -1; site 0 is the most significant tensor factor.

#include "xxz/hamiltonian.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <array>
#include <complex>
#include <map>
#include <optional>
#include <vector>

namespace xxz {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using SMatrix = Eigen::SparseMatrix<std::complex<double>>;

enum class Axis { X = 0, Y = 1, Z = 2 };

inline constexpr int kMaxQuantumAtoms = 6;

class QuantumSystem {
 public:
  QuantumSystem(int n_atoms, std::vector<double> weights);

  int atoms() const { return n_atoms_; }
  Eigen::Index dimension() const { return dim_; }
  const std::vector<double>& weights() const { return weights_; }
  bool uniform_weights() const;

  const SMatrix& site(int i, Axis a) const;
  const SMatrix& collective(Axis a) const;  // F = sum_i f_i
  const SMatrix& weighted(Axis a) const;    // sum_i c_i f_i
  const SMatrix& total_spin_squared() const { return f_squared_; }
  // Eigenvalue of F_z on each product basis state.
  const std::vector<int>& basis_m() const { return basis_m_; }

 private:
  int n_atoms_;
  Eigen::Index dim_;
  std::vector<double> weights_;
  std::vector<SMatrix> site_ops_;  // 3 per atom
  std::array<SMatrix, 3> collective_;
  std::array<SMatrix, 3> weighted_;
  SMatrix f_squared_;
  std::vector<int> basis_m_;
};

// Spin-1 angular momentum matrices.
CMatrix spin_one(Axis a);

// 1 <= N <= 6; weights normalized to mean 1 (empty -> uniform).
QuantumSystem build_system(int n_atoms, std::vector<double> weights = {});

// H = J_xy (Wx^2 + Wy^2) + J_z Wz^2 + h_x F_x + h_z F_z + sum_i h_iz f_iz with
// W the weighted collective spin and h_iz taken from couplings.inhom (one per
// atom). Atoms carry no positions, so a nonzero gradient is rejected.
CMatrix hamiltonian_matrix(const QuantumSystem& system, const CouplingSet& couplings);

struct SpectrumResult {
  Eigen::VectorXd energies;  // ascending
  CMatrix vectors;           // columns
  std::vector<double> total_spin;              // F from <F^2> = F(F+1)
  std::vector<std::optional<double>> magnetic;  // m, when [H, F_z] = 0
  bool total_spin_conserved = false;
  bool fz_conserved = false;
};

// Diagonalizes H. When H commutes with F^2 (and F_z) the eigenproblem is
// solved block by block inside the (F, m) sectors, so labels are exact even
// across degeneracies.
SpectrumResult spectrum(const QuantumSystem& system, const CMatrix& H);

double commutator_norm(const CMatrix& a, const SMatrix& b);

// Energy to leave the maximal total-spin manifold under
// H = J_xy (Fx^2 + Fy^2), J_xy < 0, uniform weights:
//   min_m [E_min(F = N-1, m) - E_min(F = N, m)].
// A single atom has no F = N - 1 manifold; there the lowest excitation inside
// the F = 1 manifold is returned.
double protection_gap(const QuantumSystem& system, double j_xy);

CVector coherent_product_state(const QuantumSystem& system, const Vec3& direction,
                               const std::map<int, Vec3>& overrides = {});

struct QuantumObservables {
  CVector psi;
  std::vector<Vec3> site_spin;  // <f_i>
  Vec3 collective = Vec3::Zero();
  double contrast = 0.0;  // |<F_x> + i<F_y>| / N
};

// Eigendecomposition of a Hermitian H reused across many evolution times.
class QuantumEvolver {
 public:
  QuantumEvolver(const QuantumSystem& system, const CMatrix& H);
  QuantumObservables at(const CVector& psi0, double t) const;

 private:
  const QuantumSystem& system_;
  Eigen::VectorXd energies_;
  CMatrix vectors_;
};

QuantumObservables evolve_quantum(const QuantumSystem& system, const CMatrix& H,
                                  const CVector& psi0, double t);

QuantumObservables measure(const QuantumSystem& system, const CVector& psi);

}  // namespace xxz
