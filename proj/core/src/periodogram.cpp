#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "qdnuc/analysis/fit.hpp"
#include "qdnuc/core/error.hpp"
#include "qdnuc/core/units.hpp"

namespace qdnuc::analysis {

double extract_oscillation_frequency(const std::vector<double>& t, const std::vector<double>& y,
                                     double f_min, double f_max) {
  if (t.size() != y.size() || t.size() < 4) throw DomainError("need at least 4 equal-length samples");
  const auto [tmn, tmx] = std::minmax_element(t.begin(), t.end());
  const double span = *tmx - *tmn;
  if (!(span > 0.0)) throw DomainError("degenerate time axis");
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double var = 0.0;
  for (double v : y) var += (v - mean) * (v - mean);
  if (!(var > 1e-20 * static_cast<double>(y.size())))
    throw NumericalError("no-peak", "flat series has no oscillation");

  if (f_max <= 0.0) f_max = 0.5 * static_cast<double>(t.size() - 1) / span;
  const double df = 1.0 / (8.0 * span);
  const double lo = std::max(f_min, df);
  const auto bins = static_cast<std::size_t>(std::floor((f_max - lo) / df)) + 1;
  if (bins < 3 || !(f_max > lo)) throw DomainError("frequency window is empty");

  auto power = [&](double f) {
    std::complex<double> s = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) s += (y[i] - mean) * std::polar(1.0, -kTwoPi * f * (t[i] - *tmn));
    return std::norm(s);
  };
  std::vector<double> p(bins);
  for (std::size_t k = 0; k < bins; ++k) p[k] = power(lo + df * static_cast<double>(k));
  const auto peak = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
  if (peak == 0 || peak + 1 == bins) throw NumericalError("no-peak", "periodogram maximum lies on the window edge");

  const double a = p[peak - 1], b = p[peak], c = p[peak + 1];
  const double denom = a - 2.0 * b + c;
  const double shift = denom != 0.0 ? 0.5 * (a - c) / denom : 0.0;
  return lo + df * (static_cast<double>(peak) + std::clamp(shift, -0.5, 0.5));
}

}  // namespace qdnuc::analysis
