#include "qdnuc/dynamics/lindblad.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qdnuc/core/error.hpp"

namespace qdnuc::dynamics {

namespace {

constexpr int kReal = kDim * kDim;
constexpr int kMaxRefinements = 8;

// Diagonal entries at i*d+i; for i<j, Re rho_ij at i*d+j and Im rho_ij at j*d+i.
Eigen::VectorXd to_real(const Operator& rho) {
  Eigen::VectorXd r(kReal);
  for (int i = 0; i < kDim; ++i) {
    r[i * kDim + i] = rho(i, i).real();
    for (int j = i + 1; j < kDim; ++j) {
      r[i * kDim + j] = rho(i, j).real();
      r[j * kDim + i] = rho(i, j).imag();
    }
  }
  return r;
}

Operator from_real(const Eigen::VectorXd& r) {
  Operator rho;
  for (int i = 0; i < kDim; ++i) {
    rho(i, i) = r[i * kDim + i];
    for (int j = i + 1; j < kDim; ++j) {
      rho(i, j) = Complex(r[i * kDim + j], r[j * kDim + i]);
      rho(j, i) = std::conj(rho(i, j));
    }
  }
  return rho;
}

double dephasing(double t2_us) {
  if (!(t2_us > 0.0)) throw DomainError("t2 must be > 0");
  return std::isinf(t2_us) ? 0.0 : 1.0 / t2_us;
}

}  // namespace

DensityMatrix DensityMatrix::pure(Electron e, int m, double iz) {
  DensityMatrix d;
  const int k = SpinAlgebra::index(e, m);
  d.rho(k, k) = 1.0;
  d.iz_label = iz;
  return d;
}

double DensityMatrix::trace() const { return rho.trace().real(); }

double DensityMatrix::hermiticity_error() const { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Operator> es(rho, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double DensityMatrix::population(Electron e, int m) const {
  const int k = SpinAlgebra::index(e, m);
  return rho(k, k).real();
}

double DensityMatrix::spin_down_population() const {
  double p = 0.0;
  for (int m = -2; m <= 2; ++m) p += population(Electron::down, m);
  return p;
}

void DensityMatrix::symmetrize() {
  const Operator h = 0.5 * (rho + rho.adjoint());
  rho = h;
}

Operator lindblad_rhs(const Operator& h, double gamma_n, double t2_us, const Operator& rho) {
  const Complex i(0.0, 1.0);
  Operator out = i * (rho * h - h * rho);
  if (gamma_n > 0.0) {
    for (int m = -2; m <= 2; ++m) {
      const Operator p = SpinAlgebra::nuclear_projector(m);
      out += gamma_n * (p * rho * p - 0.5 * (p * rho + rho * p));
    }
  }
  const double r = dephasing(t2_us);
  if (r > 0.0) {
    const Operator sz = SpinAlgebra::sz();
    const Operator sz2 = sz * sz;
    out += r * (sz * rho * sz - 0.5 * (sz2 * rho + rho * sz2));
  }
  return out;
}

LindbladEvolver::LindbladEvolver(const Operator& h, double gamma_n, double t2_us,
                                 IntegratorSettings settings)
    : generator_(kReal, kReal), settings_(settings) {
  if (!(gamma_n >= 0.0)) throw DomainError("gamma_n must be >= 0");
  if (!(settings_.rel_tol > 0.0)) throw DomainError("rel_tol must be > 0");
  const double r = dephasing(t2_us);
  for (int b = 0; b < kReal; ++b) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(kReal);
    e[b] = 1.0;
    generator_.col(b) = to_real(lindblad_rhs(h, gamma_n, t2_us, from_real(e)));
  }
  const double omega = 2.0 * h.cwiseAbs().rowwise().sum().maxCoeff() + gamma_n + r;
  const double auto_step = omega > 0.0 ? 1.0 / (50.0 * omega) : std::numeric_limits<double>::infinity();
  max_step_ = settings_.max_step_us > 0.0 ? std::min(settings_.max_step_us, auto_step) : auto_step;
}

LindbladEvolver::Generator LindbladEvolver::propagator(double interval, std::size_t intervals) const {
  const Generator id = Generator::Identity(kReal, kReal);
  if (interval == 0.0 || std::isinf(max_step_)) {
    last_step_ = interval;
    last_error_ = 0.0;
    if (interval == 0.0) return id;
    // No dynamics at all: the generator is zero.
    return id + interval * generator_;
  }
  const double n0 = std::ceil(interval / max_step_);
  int k = std::max(0, static_cast<int>(std::ceil(std::log2(n0))));

  auto rk4_power = [&](int levels) {
    const double h = interval / std::ldexp(1.0, levels);
    const Generator a = h * generator_;
    // I + A (I + A/2 (I + A/3 (I + A/4)))
    Generator s = id + a / 4.0;
    s = id + (a * s) / 3.0;
    s = id + (a * s) / 2.0;
    s = id + a * s;
    Generator t(kReal, kReal);
    for (int i = 0; i < levels; ++i) {
      t.noalias() = s * s;
      s.swap(t);
    }
    return s;
  };

  Generator coarse = rk4_power(k);
  for (int refine = 0; refine <= kMaxRefinements; ++refine) {
    Generator fine = rk4_power(k + 1);
    const double diff = (fine - coarse).cwiseAbs().rowwise().sum().maxCoeff();
    const double err = diff * static_cast<double>(std::max<std::size_t>(intervals, 1));
    if (err <= settings_.rel_tol) {
      last_step_ = interval / std::ldexp(1.0, k + 1);
      last_error_ = err;
      return fine;
    }
    coarse.swap(fine);
    ++k;
  }
  throw NumericalError("step-size-failure",
                       "integrator tolerance not met after refinement; step " +
                           std::to_string(interval / std::ldexp(1.0, k)) + " us");
}

DensityMatrix LindbladEvolver::evolve(const DensityMatrix& rho0, double duration_us) const {
  if (!(duration_us >= 0.0)) throw DomainError("duration must be >= 0");
  DensityMatrix out = rho0;
  out.time_us = rho0.time_us + duration_us;
  if (duration_us == 0.0) return out;
  const Generator p = propagator(duration_us, 1);
  out.rho = from_real(p * to_real(rho0.rho));
  return out;
}

std::vector<DensityMatrix> LindbladEvolver::trajectory(const DensityMatrix& rho0, double dt_us,
                                                       std::size_t samples) const {
  if (!(dt_us > 0.0) && samples > 1) throw DomainError("dt must be > 0");
  std::vector<DensityMatrix> out;
  out.reserve(samples);
  if (samples == 0) return out;
  const Generator p = samples > 1 ? propagator(dt_us, samples - 1) : Generator::Identity(kReal, kReal);
  Eigen::VectorXd v = to_real(rho0.rho);
  Eigen::VectorXd next(kReal);
  for (std::size_t s = 0; s < samples; ++s) {
    DensityMatrix d;
    d.rho = from_real(v);
    d.time_us = rho0.time_us + dt_us * static_cast<double>(s);
    d.iz_label = rho0.iz_label;
    out.push_back(std::move(d));
    next.noalias() = p * v;
    v.swap(next);
  }
  return out;
}

}  // namespace qdnuc::dynamics
