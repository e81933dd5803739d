#include "xxz/fitting.hpp"

#include "xxz/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace xxz {

namespace {

constexpr double kPi = std::numbers::pi;

const FitParameter& find(const std::vector<FitParameter>& ps, const std::string& name) {
  for (const FitParameter& p : ps)
    if (p.name == name) return p;
  throw std::out_of_range("fit has no parameter '" + name + "'");
}

void require_same_size(std::span<const double> t, std::span<const double> y) {
  if (t.size() != y.size()) throw ConfigError("fit: abscissae and ordinates differ in length");
  for (std::size_t i = 0; i < t.size(); ++i)
    if (!std::isfinite(t[i]) || !std::isfinite(y[i])) throw ConfigError("fit: non-finite data");
}

double wrap(double phi) {
  phi = std::remainder(phi, 2.0 * kPi);
  if (phi <= -kPi) phi += 2.0 * kPi;
  return phi;
}

// Linear least squares for y ~ a sin(w tau) + b cos(w tau) + d at fixed w.
struct LinearSine {
  double a = 0.0, b = 0.0, d = 0.0, rss = 0.0;
};

LinearSine solve_at(const Eigen::VectorXd& tau, const Eigen::VectorXd& y, double w) {
  const Eigen::Index n = tau.size();
  Eigen::MatrixXd X(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    X(i, 0) = std::sin(w * tau(i));
    X(i, 1) = std::cos(w * tau(i));
    X(i, 2) = 1.0;
  }
  const Eigen::Vector3d beta = X.colPivHouseholderQr().solve(y);
  LinearSine s{beta(0), beta(1), beta(2), (y - X * beta).squaredNorm()};
  return s;
}

}  // namespace

double FitResult::value(const std::string& name) const { return find(parameters, name).value; }
double FitResult::error(const std::string& name) const { return find(parameters, name).error; }

FitResult fit_linear(std::span<const double> t, std::span<const double> y,
                     std::optional<double> sigma) {
  require_same_size(t, y);
  const std::size_t n = t.size();
  if (n < 2) throw ConfigError("linear fit needs at least two points");
  if (sigma && !(*sigma >= 0.0)) throw ConfigError("linear fit: sigma must be non-negative");

  double t_mean = 0.0, y_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    t_mean += t[i];
    y_mean += y[i];
  }
  t_mean /= static_cast<double>(n);
  y_mean /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (t[i] - t_mean) * (t[i] - t_mean);
    sxy += (t[i] - t_mean) * (y[i] - y_mean);
  }
  const double t_scale = std::max(std::abs(t_mean), 1e-300);
  if (!(sxx > 1e-24 * t_scale * t_scale * static_cast<double>(n)))
    throw ConfigError("linear fit: degenerate abscissae");

  const double slope = sxy / sxx;
  const double intercept = y_mean - slope * t_mean;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (slope * t[i] + intercept);
    rss += r * r;
  }

  double s = 0.0;
  if (sigma) {
    s = *sigma;
  } else if (n > 2) {
    s = std::sqrt(rss / static_cast<double>(n - 2));
  }
  const double slope_err = s / std::sqrt(sxx);
  const double intercept_err = s * std::sqrt(1.0 / static_cast<double>(n) + t_mean * t_mean / sxx);

  FitResult fit;
  fit.parameters = {{"slope", slope, slope_err}, {"intercept", intercept, intercept_err}};
  fit.residual_norm = std::sqrt(rss);
  fit.converged = true;
  fit.iterations = 1;
  return fit;
}

FitResult fit_sinusoid(std::span<const double> t, std::span<const double> y,
                       const SinusoidOptions& options) {
  require_same_size(t, y);
  const auto n = static_cast<Eigen::Index>(t.size());
  if (n < 6) throw ConfigError("sinusoid fit needs at least six points");
  if (options.oversample < 1) throw ConfigError("sinusoid fit: oversample must be >= 1");

  const auto [t_lo_it, t_hi_it] = std::minmax_element(t.begin(), t.end());
  const double t0 = *t_lo_it;
  const double span = *t_hi_it - t0;
  if (!(span > 0.0)) throw ConfigError("sinusoid fit: degenerate abscissae");

  Eigen::VectorXd tau(n), obs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    tau(i) = (t[static_cast<std::size_t>(i)] - t0) / span;
    obs(i) = y[static_cast<std::size_t>(i)];
  }

  FitResult fit;
  const double mean = obs.mean();
  const double spread = std::sqrt((obs.array() - mean).square().mean());
  if (spread <= 1e-12 * std::max(1.0, std::abs(mean))) {
    fit.parameters = {{"amplitude", 0.0, 0.0},
                      {"frequency", 0.0, 0.0},
                      {"phase", 0.0, 0.0},
                      {"offset", mean, 0.0}};
    fit.residual_norm = std::sqrt((obs.array() - mean).square().sum());
    fit.degenerate = true;
    fit.note = "constant data: amplitude consistent with zero";
    return fit;
  }

  // Starting point: periodogram peak, or the supplied prior.
  double w = 0.0;
  if (options.frequency_prior) {
    if (!(*options.frequency_prior > 0.0)) throw ConfigError("sinusoid fit: prior must be positive");
    w = 2.0 * kPi * *options.frequency_prior * span;
  } else {
    const double step = 1.0 / options.oversample;
    const double top = 0.5 * static_cast<double>(n - 1);
    double best = std::numeric_limits<double>::infinity();
    for (double cycles = 0.25; cycles <= top + 1e-12; cycles += step) {
      const double rss = solve_at(tau, obs, 2.0 * kPi * cycles).rss;
      if (rss < best * (1.0 - 1e-12)) {
        best = rss;
        w = 2.0 * kPi * cycles;
      }
    }
  }
  const LinearSine start = solve_at(tau, obs, w);

  // Parameters: amplitude, angular frequency in tau, phase, offset.
  Eigen::Vector4d p(std::hypot(start.a, start.b), w, std::atan2(start.b, start.a), start.d);
  auto residuals = [&](const Eigen::Vector4d& q) {
    Eigen::VectorXd r(n);
    for (Eigen::Index i = 0; i < n; ++i) r(i) = obs(i) - (q(0) * std::sin(q(1) * tau(i) + q(2)) + q(3));
    return r;
  };
  auto jacobian = [&](const Eigen::Vector4d& q) {
    Eigen::MatrixXd J(n, 4);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double arg = q(1) * tau(i) + q(2);
      J(i, 0) = std::sin(arg);
      J(i, 1) = q(0) * std::cos(arg) * tau(i);
      J(i, 2) = q(0) * std::cos(arg);
      J(i, 3) = 1.0;
    }
    return J;
  };

  double lambda = 1e-3;
  Eigen::VectorXd r = residuals(p);
  double cost = r.squaredNorm();
  const double data_scale = obs.squaredNorm() + 1e-300;
  bool converged = false;
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    const Eigen::MatrixXd J = jacobian(p);
    const Eigen::Matrix4d JtJ = J.transpose() * J;
    const Eigen::Vector4d g = J.transpose() * r;
    if (cost <= 1e-30 * data_scale) {
      converged = true;
      break;
    }
    bool accepted = false;
    for (int tries = 0; tries < 30 && !accepted; ++tries) {
      Eigen::Matrix4d A = JtJ;
      A.diagonal() += lambda * JtJ.diagonal().cwiseMax(1e-12);
      const Eigen::Vector4d delta = A.ldlt().solve(g);
      const Eigen::Vector4d trial = p + delta;
      const Eigen::VectorXd r_trial = residuals(trial);
      const double c_trial = r_trial.squaredNorm();
      if (c_trial < cost) {
        const double improvement = cost - c_trial;
        const bool small_step = delta.norm() <= 1e-12 * (p.norm() + 1e-12);
        p = trial;
        r = r_trial;
        cost = c_trial;
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
        if (improvement <= 1e-15 * cost + 1e-30 * data_scale || small_step) converged = true;
      } else {
        lambda *= 4.0;
      }
    }
    if (!accepted) {
      // No downhill step exists at machine precision: a minimum.
      converged = true;
      break;
    }
    if (converged) {
      ++it;
      break;
    }
  }

  if (p(0) < 0.0) {
    p(0) = -p(0);
    p(2) += kPi;
  }
  if (p(1) < 0.0) {
    // sin(-w tau + phi) = -sin(w tau - phi) = sin(w tau - phi + pi)
    p(1) = -p(1);
    p(2) = kPi - p(2);
  }

  // Covariance in (A, w, phi_tau, d), then map to (A, frequency, phase at t = 0, d).
  const Eigen::MatrixXd J = jacobian(p);
  const double dof = std::max<double>(1.0, static_cast<double>(n - 4));
  Eigen::Matrix4d cov = Eigen::Matrix4d::Zero();
  const Eigen::Matrix4d JtJ = J.transpose() * J;
  Eigen::FullPivLU<Eigen::Matrix4d> lu(JtJ);
  if (lu.isInvertible()) cov = (cost / dof) * lu.inverse();

  const double freq = p(1) / (2.0 * kPi * span);
  const double phase = p(2) - p(1) * t0 / span;
  Eigen::Matrix4d T = Eigen::Matrix4d::Identity();
  T(1, 1) = 1.0 / (2.0 * kPi * span);
  T(2, 1) = -t0 / span;
  const Eigen::Matrix4d cov_out = T * cov * T.transpose();

  fit.parameters = {{"amplitude", p(0), std::sqrt(std::max(0.0, cov_out(0, 0)))},
                    {"frequency", freq, std::sqrt(std::max(0.0, cov_out(1, 1)))},
                    {"phase", wrap(phase), std::sqrt(std::max(0.0, cov_out(2, 2)))},
                    {"offset", p(3), std::sqrt(std::max(0.0, cov_out(3, 3)))}};
  fit.residual_norm = std::sqrt(cost);
  fit.iterations = it;
  fit.converged = converged;
  if (!converged) fit.note = "Levenberg-Marquardt did not converge";
  if (!options.frequency_prior && freq * span < 0.5) {
    fit.converged = false;
    fit.note = "data span less than half a period and no frequency prior";
  }
  if (p(0) <= 1e-12 * std::max(1.0, std::abs(p(3)))) {
    fit.degenerate = true;
    fit.note = "amplitude consistent with zero";
  }
  return fit;
}

}  // namespace xxz
