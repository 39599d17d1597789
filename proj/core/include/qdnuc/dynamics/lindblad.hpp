#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "qdnuc/core/config.hpp"
#include "qdnuc/dynamics/spin_algebra.hpp"

namespace qdnuc::dynamics {

struct DensityMatrix {
  Operator rho = Operator::Zero();
  double time_us = 0.0;
  double iz_label = 0.0;

  // |e, m><e, m| conditioned on iz.
  static DensityMatrix pure(Electron e, int m, double iz = 0.0);

  double trace() const;
  double hermiticity_error() const;
  double min_eigenvalue() const;
  double population(Electron e, int m) const;
  double spin_down_population() const;
  void symmetrize();
};

// d rho/dt = i[rho, H] + gamma_n sum_m D[P_m] rho + (1/T2) D[S_z] rho,
// D[a] rho = a rho a^+ - {a^+ a, rho}/2. H in rad/us, rates in 1/us.
//
// The generator is stored as a real 100x100 matrix acting on the Hermitian
// coordinates of rho (diagonal, Re and Im of the upper triangle). Evolution
// over an interval uses the classical RK4 step matrix raised to a power of
// two by repeated squaring; each propagator is checked against the one
// built with half the step (Richardson) and refined until the accumulated
// difference over the requested number of intervals is below rel_tol.
class LindbladEvolver {
 public:
  using Generator = Eigen::MatrixXd;

  LindbladEvolver(const Operator& h_rad_per_us, double gamma_n, double t2_us,
                  IntegratorSettings settings = {});

  DensityMatrix evolve(const DensityMatrix& rho0, double duration_us) const;
  // States at t = 0, dt, ..., (samples - 1) dt.
  std::vector<DensityMatrix> trajectory(const DensityMatrix& rho0, double dt_us,
                                        std::size_t samples) const;

  double max_step() const { return max_step_; }
  // Step and Richardson estimate used by the most recent propagator.
  double last_step() const { return last_step_; }
  double last_error() const { return last_error_; }

  const Generator& generator() const { return generator_; }

 private:
  Generator propagator(double interval, std::size_t intervals) const;

  Generator generator_;
  double max_step_;
  IntegratorSettings settings_;
  mutable double last_step_ = 0.0;
  mutable double last_error_ = 0.0;
};

// Apply the superoperator directly to rho (no time stepping); used by tests.
Operator lindblad_rhs(const Operator& h_rad_per_us, double gamma_n, double t2_us, const Operator& rho);

}  // namespace qdnuc::dynamics
