#pragma once

#include <vector>

namespace qdnuc::thermometry {

// Discretized p(I_z). overhauser_scale is the ESR shift per unit I_z used
// by coherence_function (2 A_c).
class OverhauserDistribution {
 public:
  OverhauserDistribution(std::vector<double> iz, std::vector<double> prob, double overhauser_scale);

  // Gaussian sampled on `points` equally spaced values over mean +- range*sigma,
  // renormalized on the grid.
  static OverhauserDistribution gaussian(double mean, double variance, int points, double range,
                                         double a_c);
  static OverhauserDistribution delta(double iz, double a_c);

  const std::vector<double>& iz() const { return iz_; }
  const std::vector<double>& prob() const { return prob_; }
  double overhauser_scale() const { return scale_; }
  double mean() const;
  double variance() const;
  std::size_t size() const { return iz_.size(); }

 private:
  std::vector<double> iz_;
  std::vector<double> prob_;
  double scale_;
};

// |sum_i p_i exp(-i * overhauser_scale * I_z,i * tau)|, tau in us.
std::vector<double> coherence_function(const OverhauserDistribution& p, const std::vector<double>& tau);

// Gaussian decay relation: variance = 1 / (2 (a_c T2*)^2).
double variance_to_t2star(double variance, double a_c);
double t2star_to_variance(double t2star_us, double a_c);

}  // namespace qdnuc::thermometry
