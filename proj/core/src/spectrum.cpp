#include "qdnuc/dynamics/spectrum.hpp"

#include "qdnuc/core/error.hpp"
#include "qdnuc/core/parallel.hpp"
#include "qdnuc/dynamics/hamiltonian.hpp"

namespace qdnuc::dynamics {

namespace {

// Evolves to grid.start, then samples the trajectory on the grid.
std::vector<DensityMatrix> sample(const LindbladEvolver& ev, const DensityMatrix& rho0,
                                  const TimeGrid& grid) {
  const DensityMatrix first = ev.evolve(rho0, grid.start);
  return ev.trajectory(first, grid.step, grid.count);
}

}  // namespace

TimeGrid TimeGrid::from_axis(const SweepAxis& axis) {
  if (axis.min < 0.0) throw ConfigError("sweep." + axis.name + ".min", "times must be >= 0");
  TimeGrid g;
  g.start = axis.min;
  g.count = static_cast<std::size_t>(axis.steps);
  g.step = axis.steps > 1 ? (axis.max - axis.min) / (axis.steps - 1) : 0.0;
  return g;
}

std::vector<double> TimeGrid::values() const {
  std::vector<double> v(count);
  for (std::size_t k = 0; k < count; ++k) v[k] = start + step * static_cast<double>(k);
  return v;
}

DensityMatrix average_density(const OverhauserDistribution& p, const std::vector<DensityMatrix>& states) {
  if (states.size() != p.size()) throw DomainError("need one state per grid point of p");
  DensityMatrix chi;
  chi.time_us = states.empty() ? 0.0 : states.front().time_us;
  chi.iz_label = p.mean();
  for (std::size_t i = 0; i < states.size(); ++i) chi.rho += p.prob()[i] * states[i].rho;
  return chi;
}

std::vector<double> SpectrumMap::slice(double tau_lo, double tau_hi) const {
  std::vector<double> out(detuning.size(), 0.0);
  int n = 0;
  for (std::size_t k = 0; k < tau.size(); ++k) {
    if (tau[k] < tau_lo - 1e-12 || tau[k] > tau_hi + 1e-12) continue;
    for (std::size_t i = 0; i < detuning.size(); ++i) out[i] += p_down(i, k);
    ++n;
  }
  if (n == 0) throw DomainError("slice contains no time samples");
  for (double& v : out) v /= n;
  return out;
}

SpectrumMap spectrum_map(const std::vector<double>& detuning, const TimeGrid& tau, double rabi,
                         const ModelParams& params, const MagnonParams& magnon,
                         const OverhauserDistribution& p, const IntegratorSettings& integrator,
                         double readout_scale, int workers) {
  if (detuning.empty() || tau.count == 0) throw DomainError("spectrum_map needs non-empty grids");
  magnon.validate();
  const double t2 = params.t2();
  const std::size_t nz = p.size();
  const std::size_t nt = tau.count;

  // One conditional run per (detuning, I_z); summed per detuning in I_z order.
  std::vector<std::vector<double>> down(detuning.size() * nz), side(detuning.size() * nz);
  parallel_for(down.size(), workers, [&](std::size_t job) {
    const double d = detuning[job / nz];
    const double iz = p.iz()[job % nz];
    const DriveSettings drive{rabi, 0.0, d};
    const LindbladEvolver ev(build_hamiltonian(iz, drive, params, magnon), magnon.gamma_n, t2, integrator);
    const auto states = sample(ev, DensityMatrix::pure(Electron::up, 0, iz), tau);
    std::vector<double> pd(nt), ps(nt);
    for (std::size_t k = 0; k < nt; ++k) {
      pd[k] = states[k].spin_down_population();
      ps[k] = pd[k] - states[k].population(Electron::down, 0);
    }
    down[job] = std::move(pd);
    side[job] = std::move(ps);
  });

  SpectrumMap map;
  map.detuning = detuning;
  map.tau = tau.values();
  map.readout_scale = readout_scale;
  map.p_down = Eigen::MatrixXd::Zero(detuning.size(), nt);
  map.p_sideband = Eigen::MatrixXd::Zero(detuning.size(), nt);
  for (std::size_t i = 0; i < detuning.size(); ++i)
    for (std::size_t z = 0; z < nz; ++z) {
      const double w = p.prob()[z];
      for (std::size_t k = 0; k < nt; ++k) {
        map.p_down(i, k) += w * down[i * nz + z][k];
        map.p_sideband(i, k) += w * side[i * nz + z][k];
      }
    }
  return map;
}

RabiTrace rabi_trace(const DriveSettings& drive, const ModelParams& params, const MagnonParams& magnon,
                     const TimeGrid& tau, int order, const IntegratorSettings& integrator) {
  if (order == 0 || order < -2 || order > 2) throw DomainError("order must be one of -2, -1, 1, 2");
  const LindbladEvolver ev(build_hamiltonian(0.0, drive, params, magnon), magnon.gamma_n, params.t2(),
                           integrator);
  const auto states = sample(ev, DensityMatrix::pure(Electron::up, 0, 0.0), tau);
  RabiTrace t;
  t.rabi = drive.rabi;
  t.detuning = drive.detuning;
  t.order = order;
  t.tau = tau.values();
  for (const auto& s : states) {
    t.p_down.push_back(s.spin_down_population());
    t.p_magnon.push_back(s.population(Electron::down, order));
  }
  return t;
}

}  // namespace qdnuc::dynamics
