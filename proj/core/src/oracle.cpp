#include "qdnuc/cooling/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qdnuc/core/error.hpp"
#include "qdnuc/thermometry/overhauser.hpp"

namespace qdnuc::cooling {

OracleResult stochastic_steady_state(const CoolingModel& model, OracleOptions options) {
  const auto& params = model.params();
  const double ni = params.max_polarization();
  const double c = params.spin_factor();
  const double center = std::round(model.steady_state().i0);
  const double half = std::ceil(options.half_width_sigmas * std::sqrt(params.thermal_variance()));
  const double lo = std::max(center - half, -std::floor(ni));
  const double hi = std::min(center + half, std::floor(ni));
  const auto n = static_cast<std::size_t>(hi - lo) + 1;

  std::vector<double> up(n), down(n), iz(n);
  for (std::size_t k = 0; k < n; ++k) {
    iz[k] = lo + static_cast<double>(k);
    const auto r = model.rates(iz[k]);
    const double x = iz[k] / ni;
    up[k] = c * (r.w_plus + 0.5 * r.gamma_d) * (1.0 - x / c);
    down[k] = c * (r.w_minus + 0.5 * r.gamma_d) * (1.0 + x / c);
  }

  std::vector<double> logp(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    if (!(up[k - 1] > 0.0) || !(down[k] > 0.0))
      throw DomainError("degenerate chain: zero transition rate inside the grid");
    logp[k] = logp[k - 1] + std::log(up[k - 1]) - std::log(down[k]);
  }
  const double mx = *std::max_element(logp.begin(), logp.end());
  std::vector<double> p(n);
  double z = 0.0;
  for (std::size_t k = 0; k < n; ++k) z += (p[k] = std::exp(logp[k] - mx));
  for (double& v : p) v /= z;

  OracleResult out;
  double m = 0.0;
  for (std::size_t k = 0; k < n; ++k) m += p[k] * iz[k];
  double var = 0.0;
  for (std::size_t k = 0; k < n; ++k) var += p[k] * (iz[k] - m) * (iz[k] - m);
  out.mean = m;
  out.edge_mass = p.front() + p.back();
  out.truncation_warning = out.edge_mass >= 1e-6;
  out.variance.thermal_variance = params.thermal_variance();
  out.variance.variance = var;
  out.variance.ratio = var / out.variance.thermal_variance;
  out.variance.performance = 1.0 / out.variance.ratio;
  out.variance.t2_star = thermometry::variance_to_t2star(var, params.a_c);

  if (options.samples > 0) {
    std::mt19937_64 rng(options.seed);
    std::discrete_distribution<std::size_t> dist(p.begin(), p.end());
    double s1 = 0.0, s2 = 0.0;
    for (long i = 0; i < options.samples; ++i) {
      const double v = iz[dist(rng)] - m;
      s1 += v;
      s2 += v * v;
    }
    const double ns = static_cast<double>(options.samples);
    out.sampled_variance = s2 / ns - (s1 / ns) * (s1 / ns);
  }
  out.iz = std::move(iz);
  out.prob = std::move(p);
  return out;
}

}  // namespace qdnuc::cooling
