#pragma once

#include <vector>

#include "qdnuc/core/params.hpp"

namespace qdnuc::cooling {

struct OpticalRates {
  double gamma_eff = 0.0;
  double gamma2 = 0.0;
  double w_plus = 0.0;
  double w_minus = 0.0;
  double gamma_nc = 0.0;
  double gamma_em = 0.0;
  double gamma_d = 0.0;
  double gamma_tot = 0.0;
  double eta_cool = 0.0;
};

struct CoolingOptions {
  bool electron_mediated = true;  // include gamma_em in the diffusion
  double rate_scale = 1.0;        // common factor on W+, W-, gamma_d
};

struct CoolingValue {
  double value = 0.0;
  bool degenerate = false;  // gamma_tot == 0
};

struct SteadyState {
  double i0 = 0.0;
  double damping = 0.0;  // f'(I0)
};

struct CoolingCurve {
  std::vector<double> iz_grid;
  std::vector<double> drift;
  std::vector<double> cooling_fn;
  double i0 = 0.0;
  double damping = 0.0;
};

struct VarianceResult {
  double variance = 0.0;
  double thermal_variance = 0.0;
  double ratio = 0.0;
  double performance = 0.0;
  double t2_star = 0.0;  // us
};

// Drift and diffusion of the nuclear polarization under Raman cooling at a
// fixed drive. Field-dependent inputs (eta, T2, gamma_em) are resolved once
// at construction from params.b_field.
class CoolingModel {
 public:
  CoolingModel(const ModelParams& params, const DriveSettings& drive, CoolingOptions options = {});

  // Builds the drive from a target effective linewidth instead of pump_rabi.
  static CoolingModel from_linewidth(const ModelParams& params, double rabi, double gamma_eff,
                                     double detuning = 0.0, CoolingOptions options = {});

  const ModelParams& params() const { return params_; }
  const DriveSettings& drive() const { return drive_; }
  double gamma_eff() const { return gamma_eff_; }
  double gamma2() const { return gamma2_; }
  double eta() const { return eta_; }

  OpticalRates rates(double iz) const;
  double drift(double iz) const;
  // f = N I (W+ - W-) / gamma_tot.
  CoolingValue cooling_function(double iz) const;
  // Spin-I fractional polarization s = 2(I+1)/3 (W+ - W-) / gamma_tot.
  double polarization_fraction(double iz) const;
  SteadyState steady_state() const;
  CoolingCurve curve(const std::vector<double>& iz_grid) const;

 private:
  void check_iz(double iz) const;
  double sideband(double delta) const;

  ModelParams params_;
  DriveSettings drive_;
  CoolingOptions options_;
  double gamma_eff_;
  double gamma2_;
  double eta_;
  double gamma_em_;
  double omega_n_;
};

VarianceResult variance_reduction(double i0, double damping, const ModelParams& params);

}  // namespace qdnuc::cooling
