#include "qdnuc/cooling/scans.hpp"

#include <algorithm>
#include <cmath>

#include "qdnuc/core/error.hpp"
#include "qdnuc/core/parallel.hpp"

namespace qdnuc::cooling {

PointResult evaluate_point(const ModelParams& params, double rabi, double gamma_eff,
                           double detuning, CoolingOptions options) {
  PointResult r;
  const double nan = std::nan("");
  if (!(gamma_eff >= 0.0) || gamma_eff >= params.gamma0 / 4.0) {
    r.flag = "linewidth_unreachable";
    r.i0 = r.damping = r.variance = r.performance = nan;
    return r;
  }
  try {
    const auto model = CoolingModel::from_linewidth(params, rabi, gamma_eff, detuning, options);
    const auto ss = model.steady_state();
    r.i0 = ss.i0;
    r.damping = ss.damping;
    const auto v = variance_reduction(ss.i0, ss.damping, params);
    r.variance = v.variance;
    r.performance = v.performance;
  } catch (const ConvergenceError&) {
    r.flag = "no_convergence";
  } catch (const NumericalError& e) {
    r.flag = e.kind() == "unphysical-damping" ? "unphysical_damping" : "numerical_error";
  } catch (const DomainError&) {
    r.flag = "degenerate";
  }
  if (r.flag != "ok") r.variance = r.performance = nan;
  return r;
}

SweepResult performance_map(const ModelParams& params, double detuning,
                            const std::vector<double>& rabi, const std::vector<double>& gamma_eff,
                            CoolingOptions options, int workers) {
  if (rabi.empty() || gamma_eff.empty()) throw DomainError("performance_map needs a non-empty grid");
  params.validate();
  SweepResult out;
  out.axes = {{"rabi", "mhz", rabi}, {"gamma_eff", "mhz", gamma_eff}};
  out.columns = {{"i0", ""}, {"damping", ""}, {"variance", ""}, {"performance", ""}};
  out.objective = "performance";
  out.rows.resize(rabi.size() * gamma_eff.size());
  parallel_for(out.rows.size(), workers, [&](std::size_t k) {
    const double r = rabi[k / gamma_eff.size()];
    const double g = gamma_eff[k % gamma_eff.size()];
    const auto p = evaluate_point(params, r, g, detuning, options);
    out.rows[k] = {{r, g}, {p.i0, p.damping, p.variance, p.performance}, p.flag};
  });
  out.locate_optimum();
  return out;
}

DriveOptimum optimize_drive(const ModelParams& params, const std::vector<double>& rabi,
                            const std::vector<double>& gamma_eff, CoolingOptions options,
                            int refine_levels) {
  DriveOptimum best;
  auto scan = [&](const std::vector<double>& rs, const std::vector<double>& gs) {
    for (double r : rs)
      for (double g : gs) {
        const auto p = evaluate_point(params, r, g, 0.0, options);
        if (p.flag == "ok" && (!best.found || p.performance > best.performance))
          best = {true, p.performance, r, g};
      }
  };
  scan(rabi, gamma_eff);
  if (!best.found) return best;

  auto spacing = [](const std::vector<double>& v) {
    return v.size() > 1 ? (v.back() - v.front()) / static_cast<double>(v.size() - 1) : 0.0;
  };
  double dr = spacing(rabi), dg = spacing(gamma_eff);
  const double rmin = rabi.front(), rmax = rabi.back();
  const double gmin = gamma_eff.front(), gmax = std::min(gamma_eff.back(), params.gamma0 / 4.0);
  for (int level = 0; level < refine_levels && (dr > 0.0 || dg > 0.0); ++level) {
    auto local = [](double c, double d, double lo, double hi) {
      std::vector<double> v;
      if (d == 0.0) return std::vector<double>{c};
      for (int i = 0; i <= 10; ++i) {
        const double x = c - d + 0.2 * d * i;
        if (x >= lo && x <= hi) v.push_back(x);
      }
      return v;
    };
    scan(local(best.rabi, dr, rmin, rmax), local(best.gamma_eff, dg, gmin, gmax));
    dr *= 0.2;
    dg *= 0.2;
  }
  return best;
}

double low_field_limit(const ModelParams& params) {
  const double t2 = params.t2();
  return params.thermal_variance() * 2.0 * params.a_c * params.a_c * t2 * t2;
}

SweepResult field_scan(const ModelParams& params, const std::vector<double>& b_grid,
                       const std::vector<double>& rabi, const std::vector<double>& gamma_eff,
                       int refine_levels, int workers) {
  if (b_grid.empty() || rabi.empty() || gamma_eff.empty())
    throw DomainError("field_scan needs non-empty grids");
  for (double b : b_grid)
    if (!(b > 0.0)) throw DomainError("fields must be > 0");
  SweepResult out;
  out.axes = {{"b_field", "t", b_grid}};
  out.columns = {{"omega_n", "mhz"},         {"t2", "us"},
                 {"eta_cool", ""},           {"full_performance", ""},
                 {"full_rabi", "mhz"},       {"full_gamma_eff", "mhz"},
                 {"no_em_performance", ""},  {"no_em_rabi", "mhz"},
                 {"no_em_gamma_eff", "mhz"}, {"low_field_limit", ""}};
  out.objective = "full_performance";
  out.rows.resize(b_grid.size());
  parallel_for(b_grid.size(), workers, [&](std::size_t k) {
    const auto p = params.at_field(b_grid[k]);
    const auto full = optimize_drive(p, rabi, gamma_eff, {}, refine_levels);
    const auto bare = optimize_drive(p, rabi, gamma_eff, {.electron_mediated = false}, refine_levels);
    const double nan = std::nan("");
    auto pick = [&](const DriveOptimum& o, double v) { return o.found ? v : nan; };
    SweepResult::Row row;
    row.coords = {b_grid[k]};
    row.values = {p.omega_n(),
                  p.t2(),
                  p.eta_at_field(),
                  pick(full, full.performance),
                  pick(full, full.rabi),
                  pick(full, full.gamma_eff),
                  pick(bare, bare.performance),
                  pick(bare, bare.rabi),
                  pick(bare, bare.gamma_eff),
                  low_field_limit(p)};
    row.flag = full.found && bare.found ? "ok" : "no_valid_point";
    out.rows[k] = std::move(row);
  });
  out.locate_optimum();
  return out;
}

}  // namespace qdnuc::cooling
