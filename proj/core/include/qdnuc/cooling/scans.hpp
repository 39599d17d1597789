#pragma once

#include <string>
#include <vector>

#include "qdnuc/cooling/cooling_model.hpp"
#include "qdnuc/core/sweep.hpp"

namespace qdnuc::cooling {

struct PointResult {
  std::string flag = "ok";
  double i0 = 0.0;
  double damping = 0.0;
  double variance = 0.0;
  double performance = 0.0;
};

// steady_state followed by variance_reduction at one (rabi, gamma_eff);
// failures are reported through flag instead of thrown.
PointResult evaluate_point(const ModelParams& params, double rabi, double gamma_eff,
                           double detuning, CoolingOptions options = {});

// Cooling performance over a (rabi, gamma_eff) grid. Columns: i0, damping,
// variance, performance; objective performance.
SweepResult performance_map(const ModelParams& params, double detuning,
                            const std::vector<double>& rabi, const std::vector<double>& gamma_eff,
                            CoolingOptions options = {}, int workers = 1);

struct DriveOptimum {
  bool found = false;
  double performance = 0.0;
  double rabi = 0.0;
  double gamma_eff = 0.0;
};

// Grid search followed by `refine_levels` rounds of local 11x11 zoom.
DriveOptimum optimize_drive(const ModelParams& params, const std::vector<double>& rabi,
                            const std::vector<double>& gamma_eff, CoolingOptions options = {},
                            int refine_levels = 3);

// Low-field cap on performance: thermal / (1 / (2 a_c^2 T2^2)).
double low_field_limit(const ModelParams& params);

// For each field: the optimum with and without electron-mediated diffusion
// and the low-field cap. Objective full_performance.
SweepResult field_scan(const ModelParams& params, const std::vector<double>& b_grid,
                       const std::vector<double>& rabi, const std::vector<double>& gamma_eff,
                       int refine_levels = 3, int workers = 1);

}  // namespace qdnuc::cooling
