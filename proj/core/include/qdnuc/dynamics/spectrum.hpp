#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "qdnuc/core/config.hpp"
#include "qdnuc/dynamics/lindblad.hpp"
#include "qdnuc/dynamics/magnon.hpp"
#include "qdnuc/thermometry/overhauser.hpp"

namespace qdnuc::dynamics {

using thermometry::OverhauserDistribution;

// Uniform time grid tau_k = start + k * step, k < count.
struct TimeGrid {
  double start = 0.0;
  double step = 0.0;
  std::size_t count = 1;

  static TimeGrid from_axis(const SweepAxis& axis);
  std::vector<double> values() const;
};

// p-weighted sum of per-I_z observable vectors, accumulated in grid order.
template <class Fn>
std::vector<double> overhauser_average(const OverhauserDistribution& p, Fn&& per_iz) {
  std::vector<double> acc;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const std::vector<double> obs = per_iz(p.iz()[i]);
    if (acc.empty()) acc.assign(obs.size(), 0.0);
    for (std::size_t k = 0; k < obs.size(); ++k) acc[k] += p.prob()[i] * obs[k];
  }
  return acc;
}

// chi = sum_i p_i rho_i for states listed in the grid order of p.
DensityMatrix average_density(const OverhauserDistribution& p, const std::vector<DensityMatrix>& states);

struct SpectrumMap {
  std::vector<double> detuning;  // MHz
  std::vector<double> tau;       // us
  Eigen::MatrixXd p_down;        // rows detuning, cols tau; raw populations
  Eigen::MatrixXd p_sideband;    // spin-down population with the nuclear level changed
  double readout_scale = 0.6;

  // Mean raw P_down over lo <= tau <= hi for every detuning.
  std::vector<double> slice(double tau_lo, double tau_hi) const;
};

// Conditional trajectories from |up, I_z> for every (detuning, I_z) pair,
// averaged over p. T2 is params.t2().
SpectrumMap spectrum_map(const std::vector<double>& detuning, const TimeGrid& tau, double rabi,
                         const ModelParams& params, const MagnonParams& magnon,
                         const OverhauserDistribution& p, const IntegratorSettings& integrator = {},
                         double readout_scale = 0.6, int workers = 1);

struct RabiTrace {
  double rabi = 0.0;
  double detuning = 0.0;
  int order = -2;
  std::vector<double> tau;
  std::vector<double> p_down;
  std::vector<double> p_magnon;  // |down, order>
};

// Conditional on I_z = 0, starting in |up, 0>.
RabiTrace rabi_trace(const DriveSettings& drive, const ModelParams& params, const MagnonParams& magnon,
                     const TimeGrid& tau, int order = -2, const IntegratorSettings& integrator = {});

}  // namespace qdnuc::dynamics
