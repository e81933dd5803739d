#include "xxz/exact_quantum.hpp"

#include "xxz/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <tuple>

namespace xxz {

namespace {

using cd = std::complex<double>;

// Builds I (x) ... (x) op (x) ... (x) I with op on `site`.
SMatrix embed(const CMatrix& op, int site, int n_atoms) {
  Eigen::Index dim = 1;
  for (int i = 0; i < n_atoms; ++i) dim *= 3;
  Eigen::Index stride = 1;
  for (int i = site + 1; i < n_atoms; ++i) stride *= 3;

  std::vector<Eigen::Triplet<cd>> entries;
  for (Eigen::Index col = 0; col < dim; ++col) {
    const Eigen::Index digit = (col / stride) % 3;
    const Eigen::Index rest = col - digit * stride;
    for (Eigen::Index d = 0; d < 3; ++d) {
      const cd v = op(d, digit);
      if (v != cd(0.0)) entries.emplace_back(rest + d * stride, col, v);
    }
  }
  SMatrix out(dim, dim);
  out.setFromTriplets(entries.begin(), entries.end());
  return out;
}

// Eigenvectors of a sector: `local` holds coefficients on the product basis
// states listed in `rows`.
struct Sector {
  std::vector<Eigen::Index> rows;
  CMatrix local;
  std::optional<double> F;
  std::optional<double> m;
};

CMatrix submatrix(const CMatrix& a, const std::vector<Eigen::Index>& rows) {
  const auto k = static_cast<Eigen::Index>(rows.size());
  CMatrix out(k, k);
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index i = 0; i < k; ++i) out(i, j) = a(rows[i], rows[j]);
  return out;
}

double total_spin_from_square(double f2) { return 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * std::max(f2, 0.0))); }

}  // namespace

CMatrix spin_one(Axis a) {
  const double s = 1.0 / std::sqrt(2.0);
  CMatrix m = CMatrix::Zero(3, 3);
  switch (a) {
    case Axis::X:
      m(0, 1) = m(1, 0) = m(1, 2) = m(2, 1) = s;
      break;
    case Axis::Y:
      m(0, 1) = cd(0, -s);
      m(1, 0) = cd(0, s);
      m(1, 2) = cd(0, -s);
      m(2, 1) = cd(0, s);
      break;
    case Axis::Z:
      m(0, 0) = 1.0;
      m(2, 2) = -1.0;
      break;
  }
  return m;
}

QuantumSystem::QuantumSystem(int n_atoms, std::vector<double> weights)
    : n_atoms_(n_atoms), dim_(1), weights_(std::move(weights)) {
  if (n_atoms < 1 || n_atoms > kMaxQuantumAtoms)
    throw ConfigError("exact oracle supports 1 to 6 atoms");
  if (weights_.empty()) weights_.assign(static_cast<std::size_t>(n_atoms), 1.0);
  if (weights_.size() != static_cast<std::size_t>(n_atoms))
    throw ConfigError("need one coupling weight per atom");
  double mean = 0.0;
  for (double c : weights_) {
    if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("coupling weights must be positive");
    mean += c;
  }
  mean /= n_atoms;
  for (double& c : weights_) c /= mean;

  for (int i = 0; i < n_atoms; ++i) dim_ *= 3;
  for (int a = 0; a < 3; ++a) {
    collective_[a] = SMatrix(dim_, dim_);
    weighted_[a] = SMatrix(dim_, dim_);
  }
  site_ops_.reserve(static_cast<std::size_t>(3 * n_atoms));
  for (int i = 0; i < n_atoms; ++i) {
    for (int a = 0; a < 3; ++a) {
      site_ops_.push_back(embed(spin_one(static_cast<Axis>(a)), i, n_atoms));
      collective_[a] += site_ops_.back();
      weighted_[a] += weights_[static_cast<std::size_t>(i)] * site_ops_.back();
    }
  }
  f_squared_ = SMatrix(collective_[0] * collective_[0]) + SMatrix(collective_[1] * collective_[1]) +
               SMatrix(collective_[2] * collective_[2]);
  f_squared_.prune(cd(0.0), 1e-12);

  basis_m_.assign(static_cast<std::size_t>(dim_), 0);
  for (Eigen::Index k = 0; k < dim_; ++k)
    basis_m_[static_cast<std::size_t>(k)] = static_cast<int>(std::lround(collective_[2].coeff(k, k).real()));
}

bool QuantumSystem::uniform_weights() const {
  return std::all_of(weights_.begin(), weights_.end(),
                     [](double c) { return std::abs(c - 1.0) <= 1e-14; });
}

const SMatrix& QuantumSystem::site(int i, Axis a) const {
  if (i < 0 || i >= n_atoms_) throw ConfigError("site index out of range");
  return site_ops_[static_cast<std::size_t>(3 * i + static_cast<int>(a))];
}

const SMatrix& QuantumSystem::collective(Axis a) const { return collective_[static_cast<int>(a)]; }
const SMatrix& QuantumSystem::weighted(Axis a) const { return weighted_[static_cast<int>(a)]; }

QuantumSystem build_system(int n_atoms, std::vector<double> weights) {
  return QuantumSystem(n_atoms, std::move(weights));
}

CMatrix hamiltonian_matrix(const QuantumSystem& system, const CouplingSet& c) {
  c.validate();
  if (c.gradient != 0.0)
    throw ConfigError("exact oracle: give inhomogeneous fields per atom, not as a gradient");
  if (!c.inhom.empty() && c.inhom.size() != static_cast<std::size_t>(system.atoms()))
    throw ConfigError("exact oracle: need one inhomogeneous field per atom");

  const SMatrix& wx = system.weighted(Axis::X);
  const SMatrix& wy = system.weighted(Axis::Y);
  const SMatrix& wz = system.weighted(Axis::Z);
  SMatrix H = c.j_xy * SMatrix(wx * wx + wy * wy) + c.j_z * SMatrix(wz * wz) +
              c.h_x * system.collective(Axis::X) + c.h_z * system.collective(Axis::Z);
  for (std::size_t i = 0; i < c.inhom.size(); ++i)
    H += c.inhom[i] * system.site(static_cast<int>(i), Axis::Z);
  return CMatrix(H);
}

double commutator_norm(const CMatrix& a, const SMatrix& b) {
  const CMatrix ab = a * b;
  const CMatrix ba = b * a;
  return (ab - ba).norm();
}

SpectrumResult spectrum(const QuantumSystem& system, const CMatrix& H) {
  const SMatrix& F2 = system.total_spin_squared();
  const SMatrix& Fz = system.collective(Axis::Z);
  const double scale = 1.0 + H.norm();
  const Eigen::Index dim = system.dimension();

  SpectrumResult result;
  result.total_spin_conserved = commutator_norm(H, F2) <= 1e-10 * scale * (1.0 + F2.norm());
  result.fz_conserved = commutator_norm(H, Fz) <= 1e-10 * scale * (1.0 + Fz.norm());

  // F_z is diagonal in the product basis and F^2 conserves it, so F^2 is
  // diagonalized one m block at a time.
  std::map<int, std::vector<Eigen::Index>> m_rows;
  for (Eigen::Index k = 0; k < dim; ++k) m_rows[system.basis_m()[static_cast<std::size_t>(k)]].push_back(k);

  std::vector<Sector> sectors;
  if (result.total_spin_conserved) {
    const CMatrix F2_dense(F2);
    std::map<int, Sector> by_f;  // used when only F^2 is conserved
    for (const auto& [m, rows] : m_rows) {
      Eigen::SelfAdjointEigenSolver<CMatrix> es(submatrix(F2_dense, rows));
      const Eigen::VectorXd& vals = es.eigenvalues();
      Eigen::Index start = 0;
      while (start < vals.size()) {
        const double F = std::round(total_spin_from_square(vals(start)));
        Eigen::Index end = start + 1;
        while (end < vals.size() && std::round(total_spin_from_square(vals(end))) == F) ++end;
        const CMatrix vecs = es.eigenvectors().middleCols(start, end - start);
        if (result.fz_conserved) {
          sectors.push_back({rows, vecs, F, static_cast<double>(m)});
        } else {
          Sector& s = by_f[static_cast<int>(F)];
          s.F = F;
          // Widen to the union of rows: blocks from different m are disjoint.
          const auto old_rows = static_cast<Eigen::Index>(s.rows.size());
          CMatrix grown = CMatrix::Zero(old_rows + static_cast<Eigen::Index>(rows.size()),
                                        s.local.cols() + vecs.cols());
          if (s.local.size() > 0) grown.topLeftCorner(old_rows, s.local.cols()) = s.local;
          grown.bottomRightCorner(static_cast<Eigen::Index>(rows.size()), vecs.cols()) = vecs;
          s.local = std::move(grown);
          s.rows.insert(s.rows.end(), rows.begin(), rows.end());
        }
        start = end;
      }
    }
    for (auto& [F, s] : by_f) sectors.push_back(std::move(s));
  } else if (result.fz_conserved) {
    for (const auto& [m, rows] : m_rows) {
      const auto k = static_cast<Eigen::Index>(rows.size());
      sectors.push_back({rows, CMatrix::Identity(k, k), std::nullopt, static_cast<double>(m)});
    }
  } else {
    std::vector<Eigen::Index> rows(static_cast<std::size_t>(dim));
    std::iota(rows.begin(), rows.end(), Eigen::Index{0});
    sectors.push_back({rows, CMatrix::Identity(dim, dim), std::nullopt, std::nullopt});
  }

  struct Level {
    double energy;
    double F;
    std::optional<double> m;
    CVector vec;
  };
  std::vector<Level> levels;
  levels.reserve(static_cast<std::size_t>(system.dimension()));
  for (const Sector& s : sectors) {
    const CMatrix restricted = s.local.adjoint() * submatrix(H, s.rows) * s.local;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(restricted);
    if (es.info() != Eigen::Success) throw NumericalError("sector diagonalization failed");
    const CMatrix local = s.local * es.eigenvectors();
    for (Eigen::Index j = 0; j < local.cols(); ++j) {
      CVector v = CVector::Zero(dim);
      for (std::size_t r = 0; r < s.rows.size(); ++r) v(s.rows[r]) = local(static_cast<Eigen::Index>(r), j);
      const double F = s.F ? *s.F : total_spin_from_square(v.dot(F2 * v).real());
      levels.push_back({es.eigenvalues()(j), F, s.m, std::move(v)});
    }
  }
  std::stable_sort(levels.begin(), levels.end(), [](const Level& a, const Level& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    if (a.F != b.F) return a.F < b.F;
    return a.m.value_or(0.0) < b.m.value_or(0.0);
  });

  const auto n = static_cast<Eigen::Index>(levels.size());
  result.energies.resize(n);
  result.vectors.resize(system.dimension(), n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Level& l = levels[static_cast<std::size_t>(j)];
    result.energies(j) = l.energy;
    result.vectors.col(j) = l.vec;
    result.total_spin.push_back(l.F);
    result.magnetic.push_back(l.m);
  }
  return result;
}

double protection_gap(const QuantumSystem& system, double j_xy) {
  if (!system.uniform_weights())
    throw ConfigError("protection gap needs uniform weights: F^2 is not conserved otherwise");
  if (!(j_xy < 0.0)) throw ConfigError("protection gap needs ferromagnetic XY coupling (J_xy < 0)");

  CouplingSet c;
  c.j_xy = j_xy;
  const SpectrumResult sp = spectrum(system, hamiltonian_matrix(system, c));
  const int n = system.atoms();

  if (n == 1) {
    const double e0 = sp.energies(0);
    for (Eigen::Index j = 1; j < sp.energies.size(); ++j)
      if (sp.energies(j) - e0 > 1e-12 * (1.0 + std::abs(e0))) return sp.energies(j) - e0;
    return 0.0;
  }

  std::map<std::pair<int, int>, double> lowest;
  for (Eigen::Index j = 0; j < sp.energies.size(); ++j) {
    const auto key = std::make_pair(static_cast<int>(sp.total_spin[j]),
                                    static_cast<int>(sp.magnetic[j].value_or(0.0)));
    auto it = lowest.find(key);
    if (it == lowest.end() || sp.energies(j) < it->second) lowest[key] = sp.energies(j);
  }
  double gap = std::numeric_limits<double>::infinity();
  for (int m = -(n - 1); m <= n - 1; ++m) {
    auto top = lowest.find({n, m});
    auto below = lowest.find({n - 1, m});
    if (top == lowest.end() || below == lowest.end())
      throw NumericalError("protection gap: missing total-spin sector");
    gap = std::min(gap, below->second - top->second);
  }
  return gap;
}

CVector coherent_product_state(const QuantumSystem& system, const Vec3& direction,
                               const std::map<int, Vec3>& overrides) {
  auto single = [](const Vec3& d) {
    if (!d.allFinite() || std::abs(d.norm() - 1.0) > 1e-9)
      throw ConfigError("coherent state direction must be a unit vector");
    const double theta = std::acos(std::clamp(d.z(), -1.0, 1.0));
    const double phi = std::atan2(d.y(), d.x());
    Eigen::Vector3cd amp;
    amp(0) = std::polar(0.5 * (1.0 + std::cos(theta)), -phi);
    amp(1) = std::sin(theta) / std::sqrt(2.0);
    amp(2) = std::polar(0.5 * (1.0 - std::cos(theta)), phi);
    return amp;
  };

  CVector psi = CVector::Ones(1);
  for (int i = 0; i < system.atoms(); ++i) {
    auto it = overrides.find(i);
    const Eigen::Vector3cd amp = single(it == overrides.end() ? direction : it->second);
    CVector next(psi.size() * 3);
    for (Eigen::Index j = 0; j < psi.size(); ++j)
      for (int d = 0; d < 3; ++d) next(3 * j + d) = psi(j) * amp(d);
    psi = std::move(next);
  }
  return psi;
}

QuantumObservables measure(const QuantumSystem& system, const CVector& psi) {
  QuantumObservables obs;
  obs.psi = psi;
  for (int i = 0; i < system.atoms(); ++i) {
    Vec3 f;
    for (int a = 0; a < 3; ++a) f(a) = psi.dot(system.site(i, static_cast<Axis>(a)) * psi).real();
    obs.site_spin.push_back(f);
    obs.collective += f;
  }
  obs.contrast = std::hypot(obs.collective.x(), obs.collective.y()) / system.atoms();
  return obs;
}

QuantumEvolver::QuantumEvolver(const QuantumSystem& system, const CMatrix& H) : system_(system) {
  if (H.rows() != system.dimension() || H.cols() != system.dimension())
    throw ConfigError("Hamiltonian dimension does not match the system");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(H);
  if (es.info() != Eigen::Success) throw NumericalError("Hamiltonian diagonalization failed");
  energies_ = es.eigenvalues();
  vectors_ = es.eigenvectors();
}

QuantumObservables QuantumEvolver::at(const CVector& psi0, double t) const {
  if (std::abs(psi0.norm() - 1.0) > 1e-10) throw ConfigError("initial state is not normalized");
  CVector coeff = vectors_.adjoint() * psi0;
  for (Eigen::Index j = 0; j < coeff.size(); ++j) coeff(j) *= std::polar(1.0, -energies_(j) * t);
  return measure(system_, vectors_ * coeff);
}

QuantumObservables evolve_quantum(const QuantumSystem& system, const CMatrix& H,
                                  const CVector& psi0, double t) {
  return QuantumEvolver(system, H).at(psi0, t);
}

}  // namespace xxz
