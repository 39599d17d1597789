#pragma once

#include "qdnuc/core/params.hpp"
#include "qdnuc/dynamics/spin_algebra.hpp"

namespace qdnuc::dynamics {

// Driven electron (x) five-level nuclear Hamiltonian in the rotating frame,
// in MHz (linear):
//   d S_z + Omega S_x + w_n m - a_c (I_z + m) S_z
//   - Omega S_y (x) (eta1 X_1 + eta2 X_2) [+ (delta_q/2) m^2]
// With this normalization the bare carrier has P_down = sin^2(pi Omega t).
Operator hamiltonian_mhz(double iz_center, const DriveSettings& drive, const ModelParams& params,
                         const MagnonParams& magnon);

// Same operator in rad/us, as used by the master equation.
Operator build_hamiltonian(double iz_center, const DriveSettings& drive, const ModelParams& params,
                           const MagnonParams& magnon);

// Time-averaged transfer |up, 0> -> |down, order> of the closed system.
double mean_transfer(const Operator& h_mhz, int order);

// Detuning of the dressed |up, 0> <-> |down, order> resonance near
// order * omega_n, located by maximizing mean_transfer.
double sideband_resonance(const ModelParams& params, const MagnonParams& magnon, double rabi,
                          int order, double iz_center = 0.0);

}  // namespace qdnuc::dynamics
