#pragma once

#include <cstdint>
#include <vector>

#include "qdnuc/cooling/cooling_model.hpp"

namespace qdnuc::cooling {

struct OracleOptions {
  std::uint64_t seed = 1;
  // When > 0, also draw this many samples from the stationary distribution
  // and report their variance.
  long samples = 0;
  double half_width_sigmas = 10.0;
};

struct OracleResult {
  VarianceResult variance;  // exact stationary moments of the chain
  double mean = 0.0;
  double edge_mass = 0.0;
  bool truncation_warning = false;
  double sampled_variance = 0.0;
  std::vector<double> iz;
  std::vector<double> prob;
};

// Stationary distribution of the birth-death chain on integer I_z with
//   up   = c (W+ + gamma_d/2) (1 - x/c)
//   down = c (W- + gamma_d/2) (1 + x/c),   x = I_z/NI, c = 2(I+1)/3,
// solved by the detailed-balance product over I0 +- half_width_sigmas *
// sqrt(thermal). For I = 1/2 this is the plain symmetric split of gamma_d.
OracleResult stochastic_steady_state(const CoolingModel& model, OracleOptions options = {});

}  // namespace qdnuc::cooling
