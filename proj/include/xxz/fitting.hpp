#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace xxz {

struct FitParameter {
  std::string name;
  double value = 0.0;
  double error = 0.0;  // 1 sigma
};

struct FitResult {
  std::vector<FitParameter> parameters;
  double residual_norm = 0.0;
  bool converged = false;
  bool degenerate = false;  // data carry no information about the model
  int iterations = 0;
  std::string note;

  double value(const std::string& name) const;
  double error(const std::string& name) const;
};

// Ordinary least squares y = slope * t + intercept. With `sigma` the
// per-point noise is taken as known; otherwise it is estimated from the
// residuals (n > 2) or reported as zero (n == 2).
FitResult fit_linear(std::span<const double> t, std::span<const double> y,
                     std::optional<double> sigma = std::nullopt);

struct SinusoidOptions {
  std::optional<double> frequency_prior;  // cycles per unit t
  int max_iterations = 200;
  int oversample = 16;  // periodogram frequency oversampling
};

// y = amplitude * sin(2 pi frequency t + phase) + offset, amplitude >= 0,
// phase in (-pi, pi]. The starting frequency is the peak of a least-squares
// periodogram (ties go to the lower frequency), refined by Levenberg-Marquardt.
FitResult fit_sinusoid(std::span<const double> t, std::span<const double> y,
                       const SinusoidOptions& options = {});

}  // namespace xxz
