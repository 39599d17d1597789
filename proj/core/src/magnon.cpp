#include "qdnuc/dynamics/magnon.hpp"

#include <cmath>

#include "qdnuc/core/error.hpp"

namespace qdnuc::dynamics {

SidebandCouplings sideband_matrix_elements(const MagnonParams& magnon, double rabi) {
  magnon.validate();
  return {rabi, magnon.eta1 * rabi, magnon.eta2 * rabi};
}

double degeneracy_factor(long n_nuclei) {
  if (n_nuclei < 1) throw DomainError("n_nuclei must be >= 1");
  return std::sqrt(0.75 * static_cast<double>(n_nuclei));
}

double eta1_from_microscopic(long n_nuclei, double a_nc, double omega_n, double theta) {
  if (!(omega_n > 0.0)) throw DomainError("omega_n must be > 0");
  return degeneracy_factor(n_nuclei) * (a_nc / omega_n) * std::sin(2.0 * theta);
}

double eta2_from_microscopic(long n_nuclei, double a_nc, double omega_n, double theta) {
  if (!(omega_n > 0.0)) throw DomainError("omega_n must be > 0");
  const double c = std::cos(theta);
  return degeneracy_factor(n_nuclei) * (a_nc / omega_n) * c * c / 2.0;
}

double anharmonic_shift(double b_q, double theta) {
  const double s = std::sin(theta), c = std::cos(theta);
  return b_q * (2.0 * s * s - c * c);
}

double nuclear_broadening(double b_q, double theta, double alpha) {
  return 2.0 * (1.0 + alpha) * std::abs(anharmonic_shift(b_q, theta));
}

MagnonParams magnon_from_model(const ModelParams& params) {
  MagnonParams m;
  m.eta1 = eta1_from_microscopic(params.n_nuclei, params.a_nc_value(), params.omega_n(), params.theta);
  m.eta2 = eta2_from_microscopic(params.n_nuclei, params.a_nc_value(), params.omega_n(), params.theta);
  m.delta_q = anharmonic_shift(params.b_q, params.theta);
  m.gamma_n = nuclear_broadening(params.b_q, params.theta, params.alpha);
  return m;
}

}  // namespace qdnuc::dynamics
