#include "qdnuc/cooling/cooling_model.hpp"

#include <algorithm>
#include <cmath>

#include "qdnuc/cooling/rates.hpp"
#include "qdnuc/core/error.hpp"
#include "qdnuc/thermometry/overhauser.hpp"

namespace qdnuc::cooling {

namespace {

// H = d S_z + 2 Omega S_x has two-level Rabi frequency 2 Omega.
constexpr double kRabiFactor = 2.0;

}  // namespace

CoolingModel::CoolingModel(const ModelParams& params, const DriveSettings& drive,
                           CoolingOptions options)
    : params_(params), drive_(drive), options_(options) {
  params_.validate();
  drive_.validate();
  if (!(options_.rate_scale > 0.0)) throw DomainError("rate_scale must be > 0");
  gamma_eff_ = effective_linewidth(drive_.pump_rabi, params_.gamma0);
  gamma2_ = dephasing_rate(gamma_eff_, params_.t2(), drive_.pump_rabi, params_.gamma0,
                           params_.delta_omega_n);
  eta_ = params_.eta_at_field();
  gamma_em_ = options_.electron_mediated ? params_.gamma_em() : 0.0;
  omega_n_ = params_.omega_n();
}

CoolingModel CoolingModel::from_linewidth(const ModelParams& params, double rabi,
                                          double gamma_eff, double detuning,
                                          CoolingOptions options) {
  DriveSettings d;
  d.rabi = rabi;
  d.pump_rabi = pump_rabi_for_linewidth(gamma_eff, params.gamma0);
  d.detuning = detuning;
  return CoolingModel(params, d, options);
}

void CoolingModel::check_iz(double iz) const {
  if (!(std::abs(iz) <= params_.max_polarization()))
    throw DomainError("|iz| exceeds N*I");
}

double CoolingModel::sideband(double delta) const {
  if (gamma_eff_ == 0.0) {
    if (drive_.rabi > 0.0) throw DomainError("degenerate rate: zero linewidth with rabi > 0");
    return 0.0;
  }
  return eta_ * eta_ * raman_rate(delta, kRabiFactor * drive_.rabi, gamma_eff_, gamma2_);
}

OpticalRates CoolingModel::rates(double iz) const {
  check_iz(iz);
  const double d = drive_.detuning;
  const double ac = params_.a_c;
  const double k = options_.rate_scale;
  OpticalRates r;
  r.gamma_eff = gamma_eff_;
  r.gamma2 = gamma2_;
  r.eta_cool = eta_;
  r.w_plus = k * sideband(d - ac * (iz + 1.0) - omega_n_);
  r.w_minus = k * sideband(d - ac * (iz - 1.0) + omega_n_);
  r.gamma_nc = k * sideband(d - ac * iz);
  r.gamma_em = k * gamma_em_;
  r.gamma_d = r.gamma_nc + r.gamma_em;
  r.gamma_tot = r.w_plus + r.w_minus + r.gamma_d;
  return r;
}

double CoolingModel::drift(double iz) const {
  const auto r = rates(iz);
  const double x = iz / params_.max_polarization();
  return r.w_plus * (1.0 - x) - r.w_minus * (1.0 + x) - r.gamma_d * x;
}

CoolingValue CoolingModel::cooling_function(double iz) const {
  const auto r = rates(iz);
  if (r.gamma_tot == 0.0) return {0.0, true};
  return {params_.max_polarization() * (r.w_plus - r.w_minus) / r.gamma_tot, false};
}

double CoolingModel::polarization_fraction(double iz) const {
  const auto r = rates(iz);
  if (r.gamma_tot == 0.0) return 0.0;
  return params_.spin_factor() * (r.w_plus - r.w_minus) / r.gamma_tot;
}

SteadyState CoolingModel::steady_state() const {
  const double ni = params_.max_polarization();
  const double h = std::max(1.0, 1e-3 * std::sqrt(params_.thermal_variance()));
  auto damping_at = [&](double i0) {
    const double lo = std::max(-ni, i0 - h);
    const double hi = std::min(ni, i0 + h);
    return (cooling_function(hi).value - cooling_function(lo).value) / (hi - lo);
  };

  if (drive_.detuning == 0.0) return {0.0, damping_at(0.0)};

  auto g = [&](double iz) { return ni * polarization_fraction(iz) - iz; };

  // Walk outward from the naive fixed point d/A_c and take the nearest
  // downward crossing of g, which is the stable solution.
  const double center = params_.a_c > 0.0 ? std::clamp(drive_.detuning / params_.a_c, -ni, ni) : 0.0;
  const double step = std::max(0.5, gamma2_ / (8.0 * std::max(params_.a_c, 1e-12)));
  double lo = 0.0, hi = 0.0;
  bool found = false;
  for (long k = 0; !found; ++k) {
    const double up_lo = center + k * step, up_hi = std::min(ni, up_lo + step);
    const double dn_hi = center - k * step, dn_lo = std::max(-ni, dn_hi - step);
    const bool up_ok = up_lo < ni;
    const bool dn_ok = dn_hi > -ni;
    if (!up_ok && !dn_ok) break;
    if (up_ok && g(up_lo) >= 0.0 && g(up_hi) <= 0.0) {
      lo = up_lo, hi = up_hi, found = true;
    } else if (dn_ok && g(dn_lo) >= 0.0 && g(dn_hi) <= 0.0) {
      lo = dn_lo, hi = dn_hi, found = true;
    }
  }
  if (!found) throw ConvergenceError("steady_state: no stable fixed point in [-NI, NI]", -ni, ni);

  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= 1e-10 * std::max(1.0, std::abs(mid))) {
      return {mid, damping_at(mid)};
    }
    if (g(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  throw ConvergenceError("steady_state: bisection did not converge", lo, hi);
}

CoolingCurve CoolingModel::curve(const std::vector<double>& iz_grid) const {
  for (std::size_t i = 1; i < iz_grid.size(); ++i)
    if (!(iz_grid[i] > iz_grid[i - 1])) throw DomainError("iz grid must be strictly increasing");
  CoolingCurve c;
  c.iz_grid = iz_grid;
  c.drift.reserve(iz_grid.size());
  c.cooling_fn.reserve(iz_grid.size());
  for (double iz : iz_grid) {
    c.drift.push_back(drift(iz));
    c.cooling_fn.push_back(cooling_function(iz).value);
  }
  const auto ss = steady_state();
  c.i0 = ss.i0;
  c.damping = ss.damping;
  return c;
}

VarianceResult variance_reduction(double i0, double damping, const ModelParams& params) {
  const double c = params.spin_factor();
  const double denom = 1.0 - c * damping;
  if (!(denom > 0.0)) throw NumericalError("unphysical-damping", "variance denominator 1 - c f'(I0) <= 0");
  const double x = i0 / params.max_polarization() / c;
  VarianceResult v;
  v.thermal_variance = params.thermal_variance();
  v.ratio = (1.0 - x * x) / denom;
  v.variance = v.thermal_variance * v.ratio;
  if (!(v.variance > 0.0)) throw NumericalError("unphysical-damping", "non-positive variance");
  v.performance = 1.0 / v.ratio;
  v.t2_star = thermometry::variance_to_t2star(v.variance, params.a_c);
  return v;
}

}  // namespace qdnuc::cooling
