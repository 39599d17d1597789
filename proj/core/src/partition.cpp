#include "qdnuc/thermometry/partition.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "qdnuc/core/error.hpp"
#include "qdnuc/core/units.hpp"

namespace qdnuc::thermometry {

namespace {

void check(double beta, long n) {
  if (!(beta > kMinBeta)) throw DomainError("beta must exceed 0.5 (truncation validity domain)");
  if (n < 1 || n > kMaxNuclei) throw DomainError("n_nuclei must lie in [1, 1e6]");
}

// log C(n,k) - beta*k for k = 0..floor(n/2); I_z = k - 3n/2.
std::vector<double> log_terms(double beta, long n) {
  const long kmax = n / 2;
  std::vector<double> t(static_cast<std::size_t>(kmax + 1));
  const double lgn = std::lgamma(n + 1.0);
  for (long k = 0; k <= kmax; ++k)
    t[k] = lgn - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) - beta * static_cast<double>(k);
  return t;
}

}  // namespace

double log_partition(double beta, long n_nuclei) {
  check(beta, n_nuclei);
  const auto t = log_terms(beta, n_nuclei);
  double mx = -std::numeric_limits<double>::infinity();
  for (double v : t) mx = std::max(mx, v);
  double s = 0.0;
  for (double v : t) s += std::exp(v - mx);
  return mx + std::log(s) + 1.5 * beta * static_cast<double>(n_nuclei);
}

Moments thermal_moments(double beta, long n_nuclei) {
  check(beta, n_nuclei);
  const auto t = log_terms(beta, n_nuclei);
  double mx = -std::numeric_limits<double>::infinity();
  for (double v : t) mx = std::max(mx, v);
  std::vector<double> w(t.size());
  double z = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) z += (w[k] = std::exp(t[k] - mx));
  double mk = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) mk += w[k] * static_cast<double>(k);
  mk /= z;
  double var = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double d = static_cast<double>(k) - mk;
    var += w[k] * d * d;
  }
  var /= z;
  return {mk - 1.5 * static_cast<double>(n_nuclei), var};
}

double invert_variance(double target_variance, long n_nuclei) {
  if (!(target_variance > 0.0)) throw DomainError("target variance must be > 0");
  double lo = std::nextafter(kMinBeta, kMaxBeta), hi = kMaxBeta;
  const double vmax = thermal_moments(lo, n_nuclei).variance;
  const double vmin = thermal_moments(hi, n_nuclei).variance;
  if (target_variance > vmax || target_variance < vmin)
    throw DomainError("target variance outside achievable range [" + std::to_string(vmin) + ", " +
                      std::to_string(vmax) + "] for beta in [0.5, 50]");
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (thermal_moments(mid, n_nuclei).variance > target_variance)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double effective_temperature(double beta, double frequency_mhz) {
  if (!(beta > 0.0)) throw DomainError("beta must be > 0");
  if (std::isinf(beta)) return 0.0;
  return PhysicalConstants::planck_over_boltzmann * frequency_mhz / beta;
}

ThermalState thermal_state(double beta, long n_nuclei, double frequency_mhz) {
  ThermalState s;
  s.beta = beta;
  if (std::isinf(beta) && beta > 0.0) {
    s.mean_iz = -1.5 * static_cast<double>(n_nuclei);
    s.variance = 0.0;
  } else {
    const auto m = thermal_moments(beta, n_nuclei);
    s.mean_iz = m.mean_iz;
    s.variance = m.variance;
  }
  s.polarization_fraction = std::abs(s.mean_iz) / (1.5 * static_cast<double>(n_nuclei));
  s.temperature_mk = effective_temperature(beta, frequency_mhz);
  return s;
}

}  // namespace qdnuc::thermometry
