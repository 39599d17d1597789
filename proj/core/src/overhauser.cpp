#include "qdnuc/thermometry/overhauser.hpp"

#include <cmath>
#include <complex>

#include "qdnuc/core/error.hpp"

namespace qdnuc::thermometry {

OverhauserDistribution::OverhauserDistribution(std::vector<double> iz, std::vector<double> prob,
                                               double overhauser_scale)
    : iz_(std::move(iz)), prob_(std::move(prob)), scale_(overhauser_scale) {
  if (iz_.empty() || iz_.size() != prob_.size())
    throw DomainError("distribution needs matching, non-empty iz and probability arrays");
  double total = 0.0;
  for (double p : prob_) {
    if (!(p >= 0.0)) throw DomainError("probabilities must be >= 0");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw DomainError("normalization error: probabilities must sum to 1");
}

OverhauserDistribution OverhauserDistribution::gaussian(double mean, double variance, int points,
                                                        double range, double a_c) {
  if (!(variance > 0.0) || points < 1 || !(range > 0.0))
    throw DomainError("gaussian distribution needs variance > 0, points >= 1, range > 0");
  const double sigma = std::sqrt(variance);
  std::vector<double> iz(points), p(points);
  double total = 0.0;
  for (int i = 0; i < points; ++i) {
    iz[i] = points == 1 ? mean : mean - range * sigma + 2.0 * range * sigma * i / (points - 1);
    const double u = (iz[i] - mean) / sigma;
    p[i] = std::exp(-0.5 * u * u);
    total += p[i];
  }
  for (double& v : p) v /= total;
  return OverhauserDistribution(std::move(iz), std::move(p), 2.0 * a_c);
}

OverhauserDistribution OverhauserDistribution::delta(double iz, double a_c) {
  return OverhauserDistribution({iz}, {1.0}, 2.0 * a_c);
}

double OverhauserDistribution::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < iz_.size(); ++i) m += prob_[i] * iz_[i];
  return m;
}

double OverhauserDistribution::variance() const {
  const double m = mean();
  double v = 0.0;
  for (std::size_t i = 0; i < iz_.size(); ++i) v += prob_[i] * (iz_[i] - m) * (iz_[i] - m);
  return v;
}

std::vector<double> coherence_function(const OverhauserDistribution& p, const std::vector<double>& tau) {
  std::vector<double> c;
  c.reserve(tau.size());
  const auto& iz = p.iz();
  const auto& w = p.prob();
  for (double t : tau) {
    std::complex<double> sum = 0.0;
    for (std::size_t i = 0; i < iz.size(); ++i)
      sum += w[i] * std::polar(1.0, -p.overhauser_scale() * iz[i] * t);
    c.push_back(std::abs(sum));
  }
  return c;
}

double variance_to_t2star(double variance, double a_c) {
  if (!(variance > 0.0) || !(a_c > 0.0)) throw DomainError("variance and a_c must be > 0");
  return 1.0 / (a_c * std::sqrt(2.0 * variance));
}

double t2star_to_variance(double t2star_us, double a_c) {
  if (!(t2star_us > 0.0) || !(a_c > 0.0)) throw DomainError("t2star and a_c must be > 0");
  const double x = a_c * t2star_us;
  return 1.0 / (2.0 * x * x);
}

}  // namespace qdnuc::thermometry
