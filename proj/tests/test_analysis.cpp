#include <gtest/gtest.h>

#include <cmath>

#include "qdnuc/analysis/fit.hpp"
#include "qdnuc/core/error.hpp"
#include "qdnuc/core/units.hpp"
#include "qdnuc/thermometry/overhauser.hpp"

using namespace qdnuc;
using namespace qdnuc::analysis;

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

std::vector<double> gaussians(const std::vector<double>& x, const std::vector<GaussianPeak>& peaks) {
  std::vector<double> y(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (const auto& p : peaks) y[i] += p.amplitude * std::exp(-std::pow(x[i] - p.center, 2) / (2 * p.sigma * p.sigma));
  return y;
}

// Five-peak sideband spectrum of a cooled dot.
const std::vector<GaussianPeak> kFivePeaks{
    {0.40, 0.0, 7.5}, {0.27, 22.0, 7.2}, {0.27, -22.6, 7.1}, {0.10, 46.3, 9.6}, {0.13, -47.8, 11.9}};

}  // namespace

TEST(Fit, FivePeakClosedLoop) {
  const auto x = linspace(-70.0, 70.0, 141);
  const auto y = gaussians(x, kFivePeaks);
  const auto r = fit_gaussian_sum(x, y, default_peak_guesses(x, y, 5, 21.66, 8.0));
  EXPECT_TRUE(r.converged);
  for (int i = 0; i < 5; ++i) {
    const auto& t = kFivePeaks[i];
    const std::string s = std::to_string(i);
    EXPECT_NEAR(r.value("amplitude_" + s), t.amplitude, 0.01 * t.amplitude);
    EXPECT_NEAR(r.value("center_" + s), t.center, std::max(0.01 * std::abs(t.center), 0.01));
    EXPECT_NEAR(r.value("sigma_" + s), t.sigma, 0.01 * t.sigma);
  }
}

TEST(Fit, SingleGaussianExact) {
  const auto x = linspace(-30.0, 30.0, 61);
  const auto y = gaussians(x, {{0.7, 2.5, 6.0}});
  const auto r = fit_gaussian_sum(x, y, {{0.5, 0.0, 8.0}});
  EXPECT_NEAR(r.value("amplitude_0"), 0.7, 1e-6);
  EXPECT_NEAR(r.value("center_0"), 2.5, 1e-6);
  EXPECT_NEAR(r.value("sigma_0"), 6.0, 1e-6);
  EXPECT_TRUE(r.flags.empty());
}

TEST(Fit, TranslationEquivariance) {
  const auto x = linspace(-70.0, 70.0, 141);
  const auto y = gaussians(x, kFivePeaks);
  const auto a = fit_gaussian_sum(x, y, default_peak_guesses(x, y, 5, 21.66, 8.0));
  const double c = 13.0;
  std::vector<double> xs(x);
  for (auto& v : xs) v += c;
  auto guess = default_peak_guesses(x, y, 5, 21.66, 8.0);
  for (auto& g : guess) g.center += c;
  const auto b = fit_gaussian_sum(xs, y, guess);
  for (int i = 0; i < 5; ++i) {
    const std::string s = std::to_string(i);
    EXPECT_NEAR(b.value("center_" + s) - a.value("center_" + s), c, 1e-5);
    EXPECT_NEAR(b.value("sigma_" + s), a.value("sigma_" + s), 1e-5);
  }
}

TEST(Fit, Deterministic) {
  const auto x = linspace(-70.0, 70.0, 141);
  const auto y = gaussians(x, kFivePeaks);
  const auto g = default_peak_guesses(x, y, 5, 21.66, 8.0);
  const auto a = fit_gaussian_sum(x, y, g), b = fit_gaussian_sum(x, y, g);
  EXPECT_EQ(a.values(), b.values());
  EXPECT_EQ(a.rss, b.rss);
  EXPECT_EQ(a.flags, b.flags);
}

TEST(Fit, DefaultGuessesFollowZeemanLadder) {
  const auto x = linspace(-70.0, 70.0, 141);
  const auto g = default_peak_guesses(x, gaussians(x, kFivePeaks), 5, 21.66, 8.0);
  ASSERT_EQ(g.size(), 5u);
  const double expected[] = {0.0, 21.66, -21.66, 43.32, -43.32};
  for (int i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(g[i].center, expected[i]);
}

TEST(Fit, StretchedExponentialClosedLoop) {
  const double t2 = 0.026, alpha = 1.6;
  const auto x = linspace(0.0, 0.1, 101);
  std::vector<double> y;
  for (double t : x) y.push_back(std::exp(-std::pow(t / t2, alpha)));
  const auto r = fit_stretched_exponential(x, y);
  EXPECT_NEAR(r.value("t2star"), t2, 0.01 * t2);
  EXPECT_NEAR(r.value("alpha"), alpha, 0.01 * alpha);
}

TEST(Fit, GaussianDecayFromCoherenceMatchesT2Star) {
  const double var = 100.0, a_c = 0.6;
  const auto p = thermometry::OverhauserDistribution::gaussian(0.0, var, 241, 6.0, a_c);
  const double t2s = thermometry::variance_to_t2star(var, a_c);
  const auto x = linspace(0.0, 3.0 * t2s, 121);
  const auto y = thermometry::coherence_function(p, x);
  const auto r = fit_stretched_exponential(x, y, 2.0);
  EXPECT_NEAR(r.value("t2star"), t2s, 0.005 * t2s);
}

TEST(Fit, FlatDecayHitsBound) {
  const auto x = linspace(0.0, 1.0, 50);
  const std::vector<double> y(x.size(), 1.0);
  const auto r = fit_stretched_exponential(x, y);
  EXPECT_TRUE(r.has_flag("at_bound:t2star") || r.has_flag("unidentifiable:t2star"));
}

TEST(Fit, RelaxationClosedLoop) {
  const double a = 0.9974, tau = 41.7;
  const auto x = linspace(0.0, 200.0, 101);
  std::vector<double> y;
  for (double t : x) y.push_back(1.0 - a * std::exp(-t / tau));
  const auto r = fit_exponential_relaxation(x, y);
  EXPECT_NEAR(r.value("a"), a, 0.01 * a);
  EXPECT_NEAR(r.value("tau"), tau, 0.01 * tau);
}

TEST(Fit, RelaxationFromTenPoints) {
  const auto x = linspace(1.0, 100.0, 10);
  std::vector<double> y;
  for (double t : x) y.push_back(1.0 - 0.6 * std::exp(-t / 23.0));
  EXPECT_NEAR(fit_exponential_relaxation(x, y).value("tau"), 23.0, 0.23);
}

TEST(Fit, FlatRelaxationIsUnidentifiable) {
  const auto x = linspace(0.0, 10.0, 30);
  const std::vector<double> y(x.size(), 1.0);
  const auto r = fit_exponential_relaxation(x, y);
  EXPECT_TRUE(r.has_flag("unidentifiable:tau"));
}

TEST(Fit, InputValidation) {
  EXPECT_THROW(fit_exponential_relaxation({1.0, 2.0}, {1.0}), DomainError);
  EXPECT_THROW(fit_gaussian_sum({0, 1, 2, 3, 4}, {0, 1, 2, 1, 0}, {}), DomainError);
}

TEST(Periodogram, RecoversSinSquaredFrequency) {
  const double f = 1.8;
  const auto t = linspace(0.0, 3.0, 1501);
  std::vector<double> y;
  for (double v : t) y.push_back(std::pow(std::sin(kPi * f * v), 2));
  EXPECT_NEAR(extract_oscillation_frequency(t, y), f, 0.01 * f);
}

TEST(Periodogram, WindowSelectsSlowComponent) {
  const auto t = linspace(0.0, 3.0, 1501);
  std::vector<double> y;
  for (double v : t) y.push_back(0.5 * std::cos(kTwoPi * 1.8 * v) + 0.8 * std::cos(kTwoPi * 12.0 * v));
  EXPECT_NEAR(extract_oscillation_frequency(t, y), 12.0, 0.12);
  EXPECT_NEAR(extract_oscillation_frequency(t, y, 0.0, 6.0), 1.8, 0.018);
}

TEST(Periodogram, FlatSeriesHasNoPeak) {
  const auto t = linspace(0.0, 3.0, 301);
  const std::vector<double> y(t.size(), 0.25);
  EXPECT_THROW(extract_oscillation_frequency(t, y), NumericalError);
}
