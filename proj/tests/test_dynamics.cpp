#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qdnuc/core/error.hpp"
#include "qdnuc/core/units.hpp"
#include "qdnuc/dynamics/hamiltonian.hpp"
#include "qdnuc/dynamics/lindblad.hpp"
#include "qdnuc/dynamics/magnon.hpp"
#include "qdnuc/dynamics/spectrum.hpp"

using namespace qdnuc;
using namespace qdnuc::dynamics;

namespace {

MagnonParams no_sidebands() {
  MagnonParams m;
  m.eta1 = 0.0;
  m.eta2 = 0.0;
  m.gamma_n = 0.0;
  return m;
}

ModelParams fig3_model() {
  ModelParams p;
  p.b_field = 3.0;
  p.t2_us = 1.5;
  return p;
}

}  // namespace

TEST(SpinAlgebra, CommutationAndBasis) {
  const Complex i(0.0, 1.0);
  const Operator sx = SpinAlgebra::sx(), sy = SpinAlgebra::sy(), sz = SpinAlgebra::sz();
  EXPECT_LT((sx * sy - sy * sx - i * sz).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(SpinAlgebra::index(Electron::up, -2), 0);
  EXPECT_EQ(SpinAlgebra::index(Electron::down, 2), 9);
  EXPECT_EQ(sz(0, 0), Complex(0.5));
  Operator sum = Operator::Zero();
  for (int m = -2; m <= 2; ++m) sum += SpinAlgebra::nuclear_projector(m);
  EXPECT_LT((sum - Operator::Identity()).cwiseAbs().maxCoeff(), 1e-15);
  const Operator x2 = SpinAlgebra::sideband(2);
  EXPECT_EQ(x2(SpinAlgebra::index(Electron::up, 0), SpinAlgebra::index(Electron::up, -2)), Complex(1.0));
  EXPECT_LT((x2 - x2.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Magnon, HelperLimits) {
  const long n = 30000;
  const double a = 0.05, w = 21.66;
  EXPECT_NEAR(eta1_from_microscopic(n, a, w, 0.0), 0.0, 1e-15);
  EXPECT_NEAR(eta2_from_microscopic(n, a, w, 0.0), std::sqrt(3.0 * n / 4.0) * (a / w) / 2.0, 1e-15);
  EXPECT_NEAR(eta2_from_microscopic(n, a, w, kPi / 2.0), 0.0, 1e-15);
}

TEST(Magnon, CollectiveEnhancementScalesAsSqrtN) {
  const double theta = deg_to_rad(20.4);
  const double r = eta2_from_microscopic(60000, 0.05, 21.66, theta) / eta2_from_microscopic(30000, 0.05, 21.66, theta);
  EXPECT_NEAR(r, std::sqrt(2.0), 1e-14);
}

TEST(Magnon, ReferenceParametersGiveBroadeningAndSecondSideband) {
  const ModelParams p;  // 3 T defaults
  EXPECT_NEAR(nuclear_broadening(p.b_q, p.theta, p.alpha), 3.9, 0.1);
  const auto m = magnon_from_model(p);
  EXPECT_NEAR(m.eta2, 0.14, 0.01);
  EXPECT_NEAR(m.gamma_n, 3.9, 0.1);
}

TEST(Hamiltonian, HermitianAndBlockDiagonalWithoutSidebands) {
  const ModelParams p = fig3_model();
  const Operator h = hamiltonian_mhz(3.0, {3.3, 0.0, 1.2}, p, no_sidebands());
  EXPECT_LT((h - h.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b)
      if (a % kNuclearLevels != b % kNuclearLevels) EXPECT_EQ(h(a, b), Complex(0.0));
}

TEST(Hamiltonian, DiagonalWithoutDrive) {
  const Operator h = hamiltonian_mhz(0.0, {0.0, 0.0, 5.0}, fig3_model(), MagnonParams{});
  EXPECT_LT((h - Operator(h.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Hamiltonian, SidebandResonancesNearMultiplesOfZeeman) {
  const ModelParams p = fig3_model();
  for (int k : {-2, -1, 1, 2}) {
    const double d = sideband_resonance(p, MagnonParams{}, 2.0, k);
    EXPECT_NEAR(d, k * p.omega_n(), 1.0) << "order " << k;
  }
}

TEST(Lindblad, CarrierContract) {
  // delta = 0, no sidebands, no dissipation: P_down = sin^2(pi Omega t).
  const double rabi = 3.8;
  const Operator h = build_hamiltonian(0.0, {rabi, 0.0, 0.0}, fig3_model(), no_sidebands());
  const LindbladEvolver ev(h, 0.0, INFINITY);
  const auto traj = ev.trajectory(DensityMatrix::pure(Electron::up, 0), 0.01, 301);
  double worst = 0.0;
  for (const auto& s : traj)
    worst = std::max(worst, std::abs(s.spin_down_population() - std::pow(std::sin(kPi * rabi * s.time_us), 2)));
  EXPECT_LT(worst, 1e-8);
}

TEST(Lindblad, ZeroDurationAndZeroGenerator) {
  const auto rho0 = DensityMatrix::pure(Electron::down, 1);
  const LindbladEvolver ev(build_hamiltonian(0.0, {3.0, 0.0, 0.0}, fig3_model(), MagnonParams{}), 1.0, 2.0);
  EXPECT_EQ(ev.evolve(rho0, 0.0).rho, rho0.rho);
  const LindbladEvolver idle(Operator::Zero(), 0.0, INFINITY);
  EXPECT_LT((idle.evolve(rho0, 5.0).rho - rho0.rho).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Lindblad, PureDephasingDecay) {
  const double t2 = 0.8;
  DensityMatrix rho;
  const int u = SpinAlgebra::index(Electron::up, 0), d = SpinAlgebra::index(Electron::down, 0);
  rho.rho(u, u) = rho.rho(d, d) = 0.5;
  rho.rho(u, d) = rho.rho(d, u) = 0.5;
  const LindbladEvolver ev(Operator::Zero(), 0.0, t2);
  for (double t : {0.1, 0.5, 2.0}) {
    const auto out = ev.evolve(rho, t);
    EXPECT_NEAR(out.rho(u, d).real(), 0.5 * std::exp(-t / (2.0 * t2)), 1e-9);
    EXPECT_NEAR(out.rho(u, u).real(), 0.5, 1e-12);
  }
}

TEST(Lindblad, NuclearBroadeningKillsNuclearCoherence) {
  DensityMatrix rho;
  const int a = SpinAlgebra::index(Electron::up, 0), b = SpinAlgebra::index(Electron::up, -2);
  rho.rho(a, a) = rho.rho(b, b) = 0.5;
  rho.rho(a, b) = rho.rho(b, a) = 0.5;
  const LindbladEvolver ev(Operator::Zero(), 2.0, INFINITY);
  EXPECT_NEAR(ev.evolve(rho, 0.3).rho(a, b).real(), 0.5 * std::exp(-2.0 * 0.3), 1e-9);
}

TEST(Lindblad, PhysicalityOverRandomInputs) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 12; ++trial) {
    ModelParams p = fig3_model();
    p.t2_us = 0.2 + 5.0 * u(rng);
    MagnonParams m;
    m.eta1 = 0.2 * u(rng);
    m.eta2 = 0.2 * u(rng);
    m.gamma_n = 5.0 * u(rng);
    const DriveSettings d{15.0 * u(rng), 0.0, -60.0 + 120.0 * u(rng)};
    const double iz = -10.0 + 20.0 * u(rng);
    const LindbladEvolver ev(build_hamiltonian(iz, d, p, m), m.gamma_n, *p.t2_us);
    const auto traj = ev.trajectory(DensityMatrix::pure(Electron::up, 0, iz), 0.05, 21);
    for (const auto& s : traj) {
      EXPECT_NEAR(s.trace(), 1.0, 1e-9);
      EXPECT_LT(s.hermiticity_error(), 1e-10);
      EXPECT_GE(s.min_eigenvalue(), -1e-8);
    }
  }
}

TEST(Lindblad, StepHalvingChangesPopulationsBelowTolerance) {
  const ModelParams p = fig3_model();
  const MagnonParams m;
  const Operator h = build_hamiltonian(2.0, {3.3, 0.0, -21.0}, p, m);
  const LindbladEvolver coarse(h, m.gamma_n, p.t2());
  IntegratorSettings s;
  s.max_step_us = coarse.max_step() / 2.0;
  const LindbladEvolver fine(h, m.gamma_n, p.t2(), s);
  const auto a = coarse.trajectory(DensityMatrix::pure(Electron::up, 0), 0.01, 101);
  const auto b = fine.trajectory(DensityMatrix::pure(Electron::up, 0), 0.01, 101);
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    for (int i = 0; i < kDim; ++i) worst = std::max(worst, std::abs(a[k].rho(i, i).real() - b[k].rho(i, i).real()));
  EXPECT_LT(worst, 1e-6);
  EXPECT_LE(coarse.last_error(), s.rel_tol);
}

TEST(Lindblad, RejectsInvalidInputs) {
  EXPECT_THROW(LindbladEvolver(Operator::Zero(), -1.0, 1.0), DomainError);
  EXPECT_THROW(LindbladEvolver(Operator::Zero(), 0.0, 0.0), DomainError);
  const LindbladEvolver ev(Operator::Zero(), 0.0, 1.0);
  EXPECT_THROW(ev.evolve(DensityMatrix::pure(Electron::up, 0), -1.0), DomainError);
}

TEST(Spectrum, DeltaDistributionEqualsConditionalRun) {
  const ModelParams p = fig3_model();
  const MagnonParams m;
  const auto dist = thermometry::OverhauserDistribution::delta(4.0, p.a_c);
  const TimeGrid tg{0.0, 0.02, 26};
  const auto map = spectrum_map({-21.0, 0.0}, tg, 3.3, p, m, dist);
  const LindbladEvolver ev(build_hamiltonian(4.0, {3.3, 0.0, -21.0}, p, m), m.gamma_n, p.t2());
  const auto traj = ev.trajectory(DensityMatrix::pure(Electron::up, 0, 4.0), 0.02, 26);
  for (std::size_t k = 0; k < traj.size(); ++k)
    EXPECT_NEAR(map.p_down(0, k), traj[k].spin_down_population(), 1e-14);
}

namespace {

double detuning_asymmetry(double eta1, double eta2) {
  const ModelParams p = fig3_model();
  MagnonParams m;
  m.eta1 = eta1;
  m.eta2 = eta2;
  const auto dist = thermometry::OverhauserDistribution::gaussian(0.0, 90.0, 11, 4.0, p.a_c);
  const std::vector<double> det{-43.3, -21.66, -7.0, 7.0, 21.66, 43.3};
  const auto map = spectrum_map(det, {0.0, 0.05, 21}, 3.3, p, m, dist);
  double worst = 0.0;
  for (std::size_t i = 0; i < det.size(); ++i)
    for (Eigen::Index k = 0; k < map.p_down.cols(); ++k)
      worst = std::max(worst, std::abs(map.p_down(i, k) - map.p_down(det.size() - 1 - i, k)));
  return worst;
}

}  // namespace

TEST(Spectrum, DetuningSymmetryForSymmetricDistribution) {
  EXPECT_LT(detuning_asymmetry(0.0, 0.0), 1e-9);
  EXPECT_LT(detuning_asymmetry(0.10, 0.0), 1e-9);
  EXPECT_LT(detuning_asymmetry(0.0, 0.14), 1e-9);
}

TEST(Spectrum, BothSidebandFamiliesBreakMirrorSymmetrySlightly) {
  // The two-step first-sideband path interferes with the direct second
  // sideband, so the mirror image is only approximate.
  const double a = detuning_asymmetry(0.10, 0.14);
  EXPECT_GT(a, 1e-9);
  EXPECT_LT(a, 1e-3);
}

TEST(Spectrum, FarDetuningSuppressed) {
  const ModelParams p = fig3_model();
  const auto map = spectrum_map({-150.0, 150.0}, {0.0, 0.01, 101}, 3.3, p, MagnonParams{},
                                thermometry::OverhauserDistribution::delta(0.0, p.a_c));
  EXPECT_LT(map.p_down.maxCoeff(), 0.05);
}

TEST(Spectrum, WorkerCountDoesNotChangeResult) {
  const ModelParams p = fig3_model();
  const auto dist = thermometry::OverhauserDistribution::gaussian(0.0, 90.0, 7, 4.0, p.a_c);
  const auto a = spectrum_map({-20.0, 0.0, 20.0}, {0.0, 0.05, 11}, 3.3, p, MagnonParams{}, dist, {}, 0.6, 1);
  const auto b = spectrum_map({-20.0, 0.0, 20.0}, {0.0, 0.05, 11}, 3.3, p, MagnonParams{}, dist, {}, 0.6, 3);
  EXPECT_EQ(a.p_down, b.p_down);
  EXPECT_EQ(a.p_sideband, b.p_sideband);
}

TEST(Spectrum, SliceAveragesWindow) {
  SpectrumMap m;
  m.detuning = {0.0};
  m.tau = {0.0, 0.1, 0.2, 0.3};
  m.p_down.resize(1, 4);
  m.p_down << 1.0, 2.0, 3.0, 4.0;
  EXPECT_EQ(m.slice(0.1, 0.2), std::vector<double>{2.5});
}

TEST(Rabi, MagnonIsSubPopulationOfSpinDown) {
  ModelParams p;
  p.b_field = 3.5;
  p.t2_us = 5.0;
  MagnonParams m;
  m.eta2 = 0.15;
  m.gamma_n = 0.7;
  const double d = sideband_resonance(p, m, 12.0, -2);
  const auto tr = rabi_trace({12.0, 0.0, d}, p, m, {0.0, 0.005, 401});
  for (std::size_t k = 0; k < tr.tau.size(); ++k) EXPECT_LE(tr.p_magnon[k], tr.p_down[k] + 1e-6);
  EXPECT_GT(*std::max_element(tr.p_magnon.begin(), tr.p_magnon.end()), 0.5);
}

TEST(Rabi, NoSecondSidebandNoTransfer) {
  ModelParams p;
  p.b_field = 3.5;
  p.t2_us = 5.0;
  MagnonParams m;
  m.eta1 = 0.0;
  m.eta2 = 0.0;
  m.gamma_n = 0.7;
  const auto tr = rabi_trace({12.0, 0.0, -2.0 * p.omega_n()}, p, m, {0.0, 0.005, 401});
  EXPECT_LT(*std::max_element(tr.p_magnon.begin(), tr.p_magnon.end()), 1e-12);
  EXPECT_LT(*std::max_element(tr.p_down.begin(), tr.p_down.end()), 0.1);
}
