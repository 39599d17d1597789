#include "qdnuc/analysis/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <Eigen/Dense>

#include "qdnuc/core/error.hpp"

namespace qdnuc::analysis {

namespace {

// Bounds are enforced by x = lo + (hi - lo) (1 + sin u) / 2.
double to_bounded(double u, double lo, double hi) { return lo + (hi - lo) * 0.5 * (1.0 + std::sin(u)); }

double to_free(double x, double lo, double hi) {
  const double s = std::clamp(2.0 * (x - lo) / (hi - lo) - 1.0, -1.0, 1.0);
  return std::asin(s);
}

struct Problem {
  const ModelSpec* spec;
  const std::vector<double>* x;
  const std::vector<double>* y;

  std::vector<double> bounded(const gsl_vector* u) const {
    std::vector<double> p(spec->params.size());
    for (std::size_t i = 0; i < p.size(); ++i)
      p[i] = to_bounded(gsl_vector_get(u, i), spec->params[i].lower, spec->params[i].upper);
    return p;
  }

  double rss(const std::vector<double>& p) const {
    double s = 0.0;
    for (std::size_t i = 0; i < x->size(); ++i) {
      const double r = (*y)[i] - spec->eval(p, (*x)[i]);
      s += r * r;
    }
    return std::isfinite(s) ? s : std::numeric_limits<double>::max();
  }
};

double objective(const gsl_vector* u, void* ctx) {
  const auto* prob = static_cast<const Problem*>(ctx);
  return prob->rss(prob->bounded(u));
}

struct RunResult {
  std::vector<double> u;
  double rss;
  int iterations;
  bool converged;
};

RunResult run_simplex(const Problem& prob, const std::vector<double>& u0, const std::vector<double>& step,
                      const FitOptions& opt) {
  const std::size_t n = u0.size();
  gsl_multimin_function fn{&objective, n, const_cast<Problem*>(&prob)};
  gsl_vector* x = gsl_vector_alloc(n);
  gsl_vector* ss = gsl_vector_alloc(n);
  for (std::size_t i = 0; i < n; ++i) {
    gsl_vector_set(x, i, u0[i]);
    gsl_vector_set(ss, i, step[i]);
  }
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
  gsl_multimin_fminimizer_set(s, &fn, x, ss);
  int it = 0;
  bool converged = false;
  while (it < opt.max_iterations) {
    ++it;
    if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), opt.size_tolerance) == GSL_SUCCESS) {
      converged = true;
      break;
    }
  }
  RunResult r;
  r.u.resize(n);
  for (std::size_t i = 0; i < n; ++i) r.u[i] = gsl_vector_get(s->x, i);
  r.rss = s->fval;
  r.iterations = it;
  r.converged = converged;
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(ss);
  gsl_vector_free(x);
  return r;
}

void check_xy(const std::vector<double>& x, const std::vector<double>& y, std::size_t min_points) {
  if (x.size() != y.size()) throw DomainError("x and y must have equal length");
  if (x.size() < min_points) throw DomainError("not enough data points for this model");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw DomainError("data must be finite");
  const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  if (*mn == *mx) throw DomainError("degenerate data: all x values are equal");
}

// Covariance 2 s^2 H^-1 with s^2 = rss / (n - p); H from central differences.
void attach_uncertainties(const Problem& prob, FitResult& out) {
  const std::size_t np = out.params.size();
  std::vector<double> p = out.values();
  const double f0 = prob.rss(p);
  std::vector<double> h(np);
  for (std::size_t i = 0; i < np; ++i) {
    const double range = out.params[i].upper - out.params[i].lower;
    h[i] = std::max(1e-5 * std::abs(p[i]), 1e-9 * range);
  }
  auto f = [&](std::size_t i, double di, std::size_t j, double dj) {
    std::vector<double> q = p;
    q[i] += di;
    q[j] += dj;
    return prob.rss(q);
  };
  Eigen::MatrixXd hess(np, np);
  for (std::size_t i = 0; i < np; ++i) {
    hess(i, i) = (f(i, h[i], i, 0.0) - 2.0 * f0 + f(i, -h[i], i, 0.0)) / (h[i] * h[i]);
    for (std::size_t j = i + 1; j < np; ++j) {
      const double v = (f(i, h[i], j, h[j]) - f(i, h[i], j, -h[j]) - f(i, -h[i], j, h[j]) +
                        f(i, -h[i], j, -h[j])) /
                       (4.0 * h[i] * h[j]);
      hess(i, j) = hess(j, i) = v;
    }
  }
  const double dof = std::max(1.0, static_cast<double>(prob.x->size()) - static_cast<double>(np));
  const double s2 = f0 / dof;
  const double scale = hess.cwiseAbs().maxCoeff();
  for (std::size_t i = 0; i < np; ++i) {
    if (!(hess(i, i) > 1e-12 * std::max(scale, 1e-300))) {
      out.params[i].uncertainty = std::numeric_limits<double>::infinity();
      out.flags.push_back("unidentifiable:" + out.params[i].name);
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(hess);
  if (lu.isInvertible()) {
    const Eigen::MatrixXd cov = 2.0 * s2 * lu.inverse();
    for (std::size_t i = 0; i < np; ++i)
      if (std::isfinite(out.params[i].uncertainty)) out.params[i].uncertainty = std::sqrt(std::abs(cov(i, i)));
  } else {
    for (std::size_t i = 0; i < np; ++i)
      if (std::isfinite(out.params[i].uncertainty))
        out.params[i].uncertainty = std::sqrt(std::abs(2.0 * s2 / hess(i, i)));
  }
}

double span_of(const std::vector<double>& x) {
  const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  return *mx - *mn;
}

}  // namespace

double FitResult::value(const std::string& name) const {
  for (const auto& p : params)
    if (p.name == name) return p.value;
  throw DomainError("fit has no parameter named " + name);
}

std::vector<double> FitResult::values() const {
  std::vector<double> v;
  for (const auto& p : params) v.push_back(p.value);
  return v;
}

bool FitResult::has_flag(const std::string& prefix) const {
  return std::any_of(flags.begin(), flags.end(), [&](const std::string& f) { return f.rfind(prefix, 0) == 0; });
}

FitResult fit_model(const ModelSpec& spec, const std::vector<double>& x, const std::vector<double>& y,
                    const FitOptions& options) {
  const std::size_t np = spec.params.size();
  if (np == 0) throw DomainError("model has no free parameters");
  check_xy(x, y, np + 1);
  for (const auto& p : spec.params)
    if (!(p.upper > p.lower)) throw DomainError("parameter " + p.name + " needs upper > lower");
  const Problem prob{&spec, &x, &y};

  std::vector<double> u0(np), step(np);
  for (std::size_t i = 0; i < np; ++i) {
    const auto& p = spec.params[i];
    const double lo = p.lower, hi = p.upper;
    const double x0 = std::clamp(p.value, lo, hi);
    u0[i] = to_free(x0, lo, hi);
    // Pull guesses off the bounds, where the transform is flat.
    u0[i] = std::clamp(u0[i], -1.5, 1.5);
    const double dx = std::max(0.1 * std::abs(x0), 1e-3 * (hi - lo));
    const double slope = 0.5 * (hi - lo) * std::max(std::abs(std::cos(u0[i])), 1e-3);
    step[i] = std::clamp(dx / slope, 1e-6, 1.0);
  }

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  RunResult best{};
  int total_iterations = 0;
  const int restarts = std::max(1, options.restarts);
  for (int r = 0; r < restarts; ++r) {
    std::vector<double> start = u0;
    if (r > 0)
      for (std::size_t i = 0; i < np; ++i) start[i] += step[i] * noise(rng);
    const auto run = run_simplex(prob, start, step, options);
    total_iterations += run.iterations;
    if (r == 0 || run.rss < best.rss) best = run;
  }
  // Polish: restart from the best point with a fresh simplex until the
  // residual stops improving.
  for (int k = 0; k < 4; ++k) {
    std::vector<double> s(np);
    for (std::size_t i = 0; i < np; ++i) s[i] = std::max(1e-3 * step[i], 1e-7);
    const auto run = run_simplex(prob, best.u, s, options);
    total_iterations += run.iterations;
    const bool improved = run.rss < best.rss * (1.0 - 1e-12);
    if (run.rss <= best.rss) best = run;
    if (!improved) break;
  }

  FitResult out;
  out.model = spec.name;
  out.params = spec.params;
  for (std::size_t i = 0; i < np; ++i) {
    auto& p = out.params[i];
    p.value = to_bounded(best.u[i], p.lower, p.upper);
    const double tol = 1e-6 * (p.upper - p.lower);
    if (p.value - p.lower < tol || p.upper - p.value < tol) out.flags.push_back("at_bound:" + p.name);
  }
  out.rss = best.rss;
  out.converged = best.converged;
  out.iterations = total_iterations;
  attach_uncertainties(prob, out);
  return out;
}

std::vector<GaussianPeak> default_peak_guesses(const std::vector<double>& x, const std::vector<double>& y,
                                               int k, double spacing, double sigma) {
  if (k < 1) throw DomainError("peak count must be >= 1");
  std::vector<GaussianPeak> g;
  for (int i = 0; i < k; ++i) {
    const int order = (i + 1) / 2;
    const double c = (i % 2 == 1 ? 1.0 : -1.0) * order * spacing;
    // Amplitude guess: data value nearest the center.
    std::size_t best = 0;
    for (std::size_t j = 1; j < x.size(); ++j)
      if (std::abs(x[j] - c) < std::abs(x[best] - c)) best = j;
    g.push_back({std::max(y.empty() ? 0.0 : y[best], 1e-6), c, sigma});
  }
  return g;
}

FitResult fit_gaussian_sum(const std::vector<double>& x, const std::vector<double>& y,
                           const std::vector<GaussianPeak>& initial, const FitOptions& options) {
  const std::size_t k = initial.size();
  if (k < 1) throw DomainError("peak count must be >= 1");
  check_xy(x, y, 3 * k + 1);
  const auto [xmn, xmx] = std::minmax_element(x.begin(), x.end());
  const double ymax = std::max(*std::max_element(y.begin(), y.end()), 0.0);
  const double span = *xmx - *xmn;
  double dx = span;
  std::vector<double> xs = x;
  std::sort(xs.begin(), xs.end());
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (xs[i] > xs[i - 1]) dx = std::min(dx, xs[i] - xs[i - 1]);

  ModelSpec spec;
  spec.name = "gaussian_sum";
  for (std::size_t i = 0; i < k; ++i) {
    const std::string s = std::to_string(i);
    spec.params.push_back({"amplitude_" + s, "", initial[i].amplitude, 0.0, 0.0, 4.0 * std::max(ymax, 1e-12)});
    spec.params.push_back({"center_" + s, "x", initial[i].center, 0.0, *xmn, *xmx});
    spec.params.push_back({"sigma_" + s, "x", initial[i].sigma, 0.0, 0.25 * dx, span});
  }
  spec.eval = [k](const std::vector<double>& p, double xv) {
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double u = (xv - p[3 * i + 1]) / p[3 * i + 2];
      s += p[3 * i] * std::exp(-0.5 * u * u);
    }
    return s;
  };
  return fit_model(spec, x, y, options);
}

FitResult fit_stretched_exponential(const std::vector<double>& x, const std::vector<double>& y,
                                    std::optional<double> fixed_alpha, const FitOptions& options) {
  check_xy(x, y, fixed_alpha ? 2 : 3);
  for (double v : x)
    if (v < 0.0) throw DomainError("stretched exponential needs x >= 0");
  const double span = span_of(x);
  const double xmax = *std::max_element(x.begin(), x.end());
  // 1/e crossing as the initial decay time.
  double guess = 0.5 * xmax;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (y[i] < std::exp(-1.0)) {
      guess = x[i];
      break;
    }
  ModelSpec spec;
  spec.name = "stretched_exponential";
  spec.params.push_back({"t2star", "x", std::max(guess, 1e-3 * span), 0.0, 1e-4 * span, 1e3 * xmax});
  if (fixed_alpha) {
    const double a = *fixed_alpha;
    spec.eval = [a](const std::vector<double>& p, double xv) { return std::exp(-std::pow(xv / p[0], a)); };
  } else {
    spec.params.push_back({"alpha", "", 1.5, 0.0, 0.1, 4.0});
    spec.eval = [](const std::vector<double>& p, double xv) { return std::exp(-std::pow(xv / p[0], p[1])); };
  }
  return fit_model(spec, x, y, options);
}

FitResult fit_exponential_relaxation(const std::vector<double>& x, const std::vector<double>& y,
                                     const FitOptions& options) {
  check_xy(x, y, 3);
  const double span = span_of(x);
  const double xmin = *std::min_element(x.begin(), x.end());
  const std::size_t i0 = static_cast<std::size_t>(std::min_element(x.begin(), x.end()) - x.begin());
  const double a0 = 1.0 - y[i0];
  double tau0 = 0.3 * span;
  if (std::abs(a0) > 1e-12) {
    for (std::size_t i = 0; i < x.size(); ++i)
      if ((1.0 - y[i]) / a0 < std::exp(-1.0) && x[i] > xmin) {
        tau0 = x[i] - xmin;
        break;
      }
  }
  ModelSpec spec;
  spec.name = "exponential_relaxation";
  spec.params.push_back({"a", "", std::clamp(a0, -1.9, 1.9), 0.0, -2.0, 2.0});
  spec.params.push_back({"tau", "x", tau0, 0.0, 1e-4 * span, 1e3 * span});
  spec.eval = [](const std::vector<double>& p, double xv) { return 1.0 - p[0] * std::exp(-xv / p[1]); };
  auto r = fit_model(spec, x, y, options);
  if (std::abs(r.value("a")) < 1e-9 && !r.has_flag("unidentifiable:tau")) r.flags.push_back("unidentifiable:tau");
  return r;
}

}  // namespace qdnuc::analysis
