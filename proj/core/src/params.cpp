#include "qdnuc/core/params.hpp"

#include <cmath>
#include <string>

#include "qdnuc/core/error.hpp"

namespace qdnuc {

namespace {

void require(bool ok, const char* field, const std::string& what) {
  if (!ok) throw ConfigError(field, what);
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

double T2Table::at(double field_t) const {
  validate();
  if (points.size() == 1) return points.front().t2_us;
  std::size_t seg = 0;
  while (seg + 2 < points.size() && field_t > points[seg + 1].field_t) ++seg;
  const auto& a = points[seg];
  const auto& b = points[seg + 1];
  const double w = (field_t - a.field_t) / (b.field_t - a.field_t);
  return std::exp(std::log(a.t2_us) + w * (std::log(b.t2_us) - std::log(a.t2_us)));
}

void T2Table::validate() const {
  require(!points.empty(), "model.t2_table", "needs at least one point");
  for (std::size_t i = 0; i < points.size(); ++i) {
    require(points[i].field_t > 0.0 && points[i].t2_us > 0.0, "model.t2_table",
            "fields and T2 values must be positive");
    if (i > 0)
      require(points[i].field_t > points[i - 1].field_t, "model.t2_table",
              "fields must be strictly increasing");
  }
}

double ModelParams::eta_at_field() const {
  const double r = eta_ref_field / b_field;
  return eta_cool * r * r;
}

double ModelParams::gamma_em() const {
  const double r = b_ref / b_field;
  return gamma_em_ref * r * r;
}

double ModelParams::a_nc_value() const { return a_nc ? *a_nc : a_c * b_q / omega_n(); }

ModelParams ModelParams::at_field(double b) const {
  ModelParams p = *this;
  p.b_field = b;
  p.validate();
  return p;
}

void ModelParams::validate() const {
  require(n_nuclei >= 1, "model.n_nuclei", "must be >= 1");
  require(spin == 0.5 || spin == 1.5, "model.spin", "only 1/2 and 3/2 are supported");
  require(finite_nonneg(a_c), "model.a_c", "must be >= 0");
  require(!a_nc || finite_nonneg(*a_nc), "model.a_nc", "must be >= 0");
  require(finite_nonneg(b_q), "model.b_q", "must be >= 0");
  require(std::isfinite(theta) && theta >= 0.0 && theta <= kPi / 2.0, "model.theta",
          "must lie in [0, pi/2]");
  require(finite_nonneg(alpha), "model.alpha", "must be >= 0");
  require(std::isfinite(gamma_ratio) && gamma_ratio > 0.0, "model.gamma_ratio", "must be > 0");
  require(finite_nonneg(gamma0), "model.gamma0", "must be >= 0");
  require(finite_nonneg(delta_omega_n), "model.delta_omega_n", "must be >= 0");
  require(finite_nonneg(eta_cool) && eta_cool < 1.0, "model.eta_cool", "must lie in [0, 1)");
  require(std::isfinite(eta_ref_field) && eta_ref_field > 0.0, "model.eta_ref_field",
          "must be > 0");
  require(finite_nonneg(gamma_em_ref), "model.gamma_em_ref", "must be >= 0");
  require(std::isfinite(b_ref) && b_ref > 0.0, "model.b_ref", "must be > 0");
  require(std::isfinite(b_field) && b_field > 0.0, "model.b_field", "must be > 0");
  require(!t2_us || (std::isfinite(*t2_us) && *t2_us > 0.0), "model.t2_us", "must be > 0");
  t2_table.validate();
}

void DriveSettings::validate() const {
  require(finite_nonneg(rabi), "drive.rabi", "must be >= 0");
  require(finite_nonneg(pump_rabi), "drive.pump_rabi", "must be >= 0");
  require(std::isfinite(detuning), "drive.detuning", "must be finite");
}

void MagnonParams::validate() const {
  require(finite_nonneg(eta1) && eta1 < 1.0, "magnon.eta1", "must lie in [0, 1)");
  require(finite_nonneg(eta2) && eta2 < 1.0, "magnon.eta2", "must lie in [0, 1)");
  require(finite_nonneg(gamma_n), "magnon.gamma_n", "must be >= 0");
  require(std::isfinite(delta_q), "magnon.delta_q", "must be finite");
}

}  // namespace qdnuc
