#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qdnuc/core/error.hpp"
#include "qdnuc/thermometry/overhauser.hpp"
#include "qdnuc/thermometry/partition.hpp"

using namespace qdnuc;
using namespace qdnuc::thermometry;

namespace {

// Enumerates every configuration of n nuclei with each spin at -3/2 or -1/2
// and at most n/2 raised, i.e. I_z <= -n.
long double brute_force_z(double beta, int n) {
  long double z = 0.0L;
  for (unsigned long s = 0; s < (1ul << n); ++s) {
    const int up = __builtin_popcountl(s);
    if (2 * up > n) continue;
    const long double iz = -1.5L * n + up;
    z += std::exp(-static_cast<long double>(beta) * iz);
  }
  return z;
}

}  // namespace

TEST(Partition, MatchesEnumerationForSmallEnsembles) {
  for (int n : {1, 2, 5, 10, 15, 20})
    for (double beta : {0.6, 1.0, 2.0, 7.5}) {
      const long double ref = std::log(brute_force_z(beta, n));
      const double got = log_partition(beta, n);
      EXPECT_LT(std::abs((got - ref) / ref), 1e-12) << "N=" << n << " beta=" << beta;
    }
}

TEST(Partition, SingleNucleusIsOneState) {
  // N = 1 keeps only the fully polarized state.
  EXPECT_NEAR(log_partition(2.0, 1), 1.5 * 2.0, 1e-15);
}

TEST(Partition, GroundStateAsymptote) {
  const long n = 1000;
  EXPECT_NEAR(log_partition(45.0, n) / (1.5 * n * 45.0), 1.0, 1e-12);
  const auto m = thermal_moments(45.0, n);
  EXPECT_NEAR(m.mean_iz, -1.5 * n, 1e-9);
  EXPECT_LT(m.variance, 1e-9);
}

TEST(Partition, MomentsMonotoneInBeta) {
  const long n = 30000;
  auto prev = thermal_moments(1.0, n);
  for (double beta = 1.25; beta <= 20.0; beta += 0.25) {
    const auto m = thermal_moments(beta, n);
    EXPECT_LT(m.variance, prev.variance);
    EXPECT_LT(m.mean_iz, prev.mean_iz);
    prev = m;
  }
}

TEST(Partition, FrozenRegressionAtBetaFivePointFive) {
  const auto m = thermal_moments(5.5, 30000);
  EXPECT_NEAR(m.variance, 121.60715084631828, 1e-9);
  // 1 - 122/45000.
  EXPECT_NEAR(thermal_state(5.5, 30000, 21.66).polarization_fraction, -m.mean_iz / 45000.0, 1e-15);
  EXPECT_NEAR(thermal_state(5.5, 30000, 21.66).polarization_fraction, 0.99729, 1e-5);
}

TEST(Partition, RejectsOutsideValidityDomain) {
  EXPECT_THROW(log_partition(0.5, 100), DomainError);
  EXPECT_THROW(thermal_moments(0.3, 100), DomainError);
  EXPECT_THROW(invert_variance(1e9, 30000), DomainError);
}

TEST(Partition, InversionRoundTrip) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.6, 20.0);
  for (int i = 0; i < 20; ++i) {
    const double beta = u(rng);
    const double v = thermal_moments(beta, 30000).variance;
    const double back = invert_variance(v, 30000);
    EXPECT_NEAR(thermal_moments(back, 30000).variance / v, 1.0, 1e-6);
    EXPECT_NEAR(back, beta, 1e-6 * beta);
  }
}

TEST(Partition, VarianceTargetGivesSubMillikelvin) {
  const double beta = invert_variance(100.0, 30000);
  EXPECT_GT(beta, 5.0);
  EXPECT_LT(beta, 6.0);
  EXPECT_NEAR(effective_temperature(beta, 7.22 * 3.3), 0.2, 0.03);
  EXPECT_NEAR(effective_temperature(1.0, 21.66), 1.0, 0.1);
  EXPECT_EQ(effective_temperature(INFINITY, 21.66), 0.0);
  const auto s = thermal_state(INFINITY, 30000, 21.66);
  EXPECT_EQ(s.variance, 0.0);
  EXPECT_EQ(s.mean_iz, -45000.0);
}

TEST(Overhauser, DeltaHasFullCoherence) {
  const auto p = OverhauserDistribution::delta(17.0, 0.6);
  for (double c : coherence_function(p, {0.0, 0.3, 7.0})) EXPECT_NEAR(c, 1.0, 1e-15);
}

TEST(Overhauser, GaussianCoherenceMatchesClosedForm) {
  const double a_c = 0.6;
  for (double var : {100.0, 37500.0}) {
    const auto p = OverhauserDistribution::gaussian(0.0, var, 401, 6.0, a_c);
    const double t2s = variance_to_t2star(var, a_c);
    std::vector<double> tau;
    for (int k = 0; k <= 60; ++k) tau.push_back(0.05 * k * t2s);
    const auto c = coherence_function(p, tau);
    for (std::size_t k = 0; k < tau.size(); ++k)
      EXPECT_NEAR(c[k], std::exp(-std::pow(tau[k] / t2s, 2)), 1e-8) << "var=" << var << " k=" << k;
  }
}

TEST(Overhauser, TwoPointFringes) {
  const double a_c = 0.6, iz = 5.0;
  const OverhauserDistribution p({-iz, iz}, {0.5, 0.5}, 2.0 * a_c);
  for (double t : {0.0, 0.1, 0.37, 1.3})
    EXPECT_NEAR(coherence_function(p, {t})[0], std::abs(std::cos(2.0 * a_c * iz * t)), 1e-14);
}

TEST(Overhauser, ThermalT2StarAndRoundTrip) {
  EXPECT_NEAR(variance_to_t2star(37500.0, 0.6) * 1e3, 6.1, 0.05);
  for (double v : {1.0, 100.0, 37500.0})
    EXPECT_NEAR(t2star_to_variance(variance_to_t2star(v, 0.6), 0.6) / v, 1.0, 1e-12);
  const double th = variance_to_t2star(37500.0, 0.6), cooled = variance_to_t2star(100.0, 0.6);
  EXPECT_NEAR(std::pow(cooled / th, 2), 375.0, 1e-9);
}

TEST(Overhauser, NormalizationChecked) {
  EXPECT_THROW(OverhauserDistribution({0.0, 1.0}, {0.5, 0.6}, 1.2), DomainError);
  EXPECT_THROW(OverhauserDistribution({0.0}, {-1.0}, 1.2), DomainError);
  const auto g = OverhauserDistribution::gaussian(3.0, 50.0, 41, 4.0, 0.6);
  EXPECT_NEAR(g.mean(), 3.0, 1e-12);
  EXPECT_NEAR(g.variance(), 50.0, 0.05 * 50.0);
}
