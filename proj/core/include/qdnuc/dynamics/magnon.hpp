#pragma once

#include "qdnuc/core/params.hpp"

namespace qdnuc::dynamics {

using qdnuc::MagnonParams;

// Coupling amplitudes (MHz, linear) of the carrier and the two sidebands.
struct SidebandCouplings {
  double carrier;
  double first;   // I_z -> I_z +- 1
  double second;  // I_z -> I_z +- 2
};

SidebandCouplings sideband_matrix_elements(const MagnonParams& magnon, double rabi);

// Collective enhancement of a single flip in an unpolarized bath, sqrt(3N/4).
double degeneracy_factor(long n_nuclei);

// Sideband strengths from the microscopic quadrupolar mixing.
double eta1_from_microscopic(long n_nuclei, double a_nc, double omega_n, double theta);
double eta2_from_microscopic(long n_nuclei, double a_nc, double omega_n, double theta);

// Anharmonic shift B_Q (2 sin^2 theta - cos^2 theta).
double anharmonic_shift(double b_q, double theta);

// 2 (1 + alpha) |anharmonic shift|.
double nuclear_broadening(double b_q, double theta, double alpha);

// eta1, eta2 from the helpers (a_nc from params), gamma_n and delta_q from
// (b_q, theta, alpha).
MagnonParams magnon_from_model(const ModelParams& params);

}  // namespace qdnuc::dynamics
