#include "qdnuc/cooling/rates.hpp"

#include <cmath>

#include "qdnuc/core/error.hpp"
#include "qdnuc/core/units.hpp"

namespace qdnuc::cooling {

double effective_linewidth(double pump_rabi, double gamma0) {
  if (gamma0 <= 0.0) return 0.0;
  const double x = 2.0 * (pump_rabi / gamma0) * (pump_rabi / gamma0);
  if (std::isinf(x)) return gamma0 / 4.0;
  return gamma0 / 4.0 * x / (1.0 + x);
}

double pump_rabi_for_linewidth(double gamma_eff, double gamma0) {
  if (gamma_eff < 0.0 || gamma0 <= 0.0 || gamma_eff >= gamma0 / 4.0)
    throw DomainError("linewidth must lie in [0, gamma0/4)");
  const double r = 4.0 * gamma_eff / gamma0;
  return gamma0 * std::sqrt(r / (1.0 - r) / 2.0);
}

double dephasing_rate(double gamma_eff, double t2_us, double pump_rabi, double gamma0,
                      double delta_omega_n) {
  if (!(t2_us > 0.0)) throw DomainError("t2 must be > 0");
  const double sat = gamma0 > 0.0 ? 2.0 * (pump_rabi / gamma0) * (pump_rabi / gamma0) : 0.0;
  return (gamma_eff / 2.0 + kTwoPi / t2_us) * std::sqrt(1.0 + sat) + delta_omega_n;
}

double raman_rate(double detuning, double rabi, double gamma_eff, double gamma2) {
  if (rabi == 0.0) return 0.0;
  if (!(gamma_eff > 0.0) || !(gamma2 > 0.0))
    throw DomainError("degenerate rate: raman_rate needs gamma_eff > 0 and gamma2 > 0");
  const double s = rabi * rabi / (gamma_eff * gamma2);
  const double d = detuning / gamma2;
  return gamma_eff / 2.0 * s / (1.0 + s + d * d);
}

}  // namespace qdnuc::cooling
