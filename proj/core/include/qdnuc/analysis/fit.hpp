#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace qdnuc::analysis {

struct FitParameter {
  std::string name;
  std::string unit;
  double value = 0.0;
  double uncertainty = 0.0;  // from the curvature of the residual; approximate
  double lower = 0.0;
  double upper = 0.0;
};

struct FitResult {
  std::string model;
  std::vector<FitParameter> params;
  double rss = 0.0;
  bool converged = false;
  int iterations = 0;
  // e.g. "at_bound:t2star", "unidentifiable:tau".
  std::vector<std::string> flags;

  double value(const std::string& name) const;
  std::vector<double> values() const;
  bool has_flag(const std::string& prefix) const;
};

struct FitOptions {
  int restarts = 5;
  std::uint64_t seed = 1;
  int max_iterations = 20000;
  double size_tolerance = 1e-9;  // simplex size in the bounded coordinates
};

struct GaussianPeak {
  double amplitude;
  double center;
  double sigma;
};

// Bounded least squares on a generic model; used by the three fit families.
struct ModelSpec {
  std::string name;
  std::vector<FitParameter> params;  // value holds the initial guess
  std::function<double(const std::vector<double>& p, double x)> eval;
};

FitResult fit_model(const ModelSpec& spec, const std::vector<double>& x, const std::vector<double>& y,
                    const FitOptions& options = {});

// sum_i A_i exp(-(x - c_i)^2 / (2 s_i^2)); parameters named amplitude_i,
// center_i, sigma_i in the order of `initial`.
FitResult fit_gaussian_sum(const std::vector<double>& x, const std::vector<double>& y,
                           const std::vector<GaussianPeak>& initial, const FitOptions& options = {});

// Default initial guesses for k peaks: centers 0, +w, -w, +2w, -2w, ...
std::vector<GaussianPeak> default_peak_guesses(const std::vector<double>& x, const std::vector<double>& y,
                                               int k, double spacing, double sigma);

// exp(-(x / t2star)^alpha). alpha fixed when given.
FitResult fit_stretched_exponential(const std::vector<double>& x, const std::vector<double>& y,
                                    std::optional<double> fixed_alpha = std::nullopt,
                                    const FitOptions& options = {});

// 1 - a exp(-x / tau).
FitResult fit_exponential_relaxation(const std::vector<double>& x, const std::vector<double>& y,
                                     const FitOptions& options = {});

// Dominant oscillation frequency (MHz for x in us) of a time series: the
// mean-removed periodogram is evaluated on a grid 8x finer than 1/span
// between f_min and f_max, and the peak refined by a parabola through the
// three bins around it. f_max <= 0 selects the Nyquist frequency.
double extract_oscillation_frequency(const std::vector<double>& t, const std::vector<double>& y,
                                     double f_min = 0.0, double f_max = 0.0);

}  // namespace qdnuc::analysis
