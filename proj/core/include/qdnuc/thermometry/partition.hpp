#pragma once

namespace qdnuc::thermometry {

// Canonical ensemble of N spin-3/2 nuclei in the single-flip truncation:
// I_z runs from -3N/2 to -N with degeneracy C(N, I_z + 3N/2). beta is in
// units of the nuclear Zeeman energy and must exceed kMinBeta.
inline constexpr double kMinBeta = 0.5;
inline constexpr double kMaxBeta = 50.0;
inline constexpr long kMaxNuclei = 1000000;

struct ThermalState {
  double beta = 0.0;
  double mean_iz = 0.0;
  double variance = 0.0;
  double polarization_fraction = 0.0;
  double temperature_mk = 0.0;
};

double log_partition(double beta, long n_nuclei);

struct Moments {
  double mean_iz;
  double variance;
};
Moments thermal_moments(double beta, long n_nuclei);

// Bisection over [kMinBeta, kMaxBeta]. Throws DomainError naming the
// achievable variance range when the target is outside it.
double invert_variance(double target_variance, long n_nuclei);

// T = (h f / k_B) / beta with f in MHz, in mK. beta = inf gives 0.
double effective_temperature(double beta, double frequency_mhz);

ThermalState thermal_state(double beta, long n_nuclei, double frequency_mhz);

}  // namespace qdnuc::thermometry
