#pragma once

#include <optional>
#include <vector>

#include "qdnuc/core/units.hpp"

namespace qdnuc {

// Measured Hahn-echo T2 at discrete fields. Lookup interpolates log(T2)
// linearly in B and extends the end segments outside the table.
struct T2Table {
  struct Point {
    double field_t;
    double t2_us;
    bool operator==(const Point&) const = default;
  };
  std::vector<Point> points{{2.0, 0.015}, {3.0, 0.765}, {5.0, 2.22}};

  double at(double field_t) const;
  void validate() const;
  bool operator==(const T2Table&) const = default;
};

struct ModelParams {
  long n_nuclei = 30000;
  double spin = 1.5;
  double a_c = 0.6;               // MHz
  std::optional<double> a_nc;     // MHz; derived from a_c*b_q/omega_n when absent
  double b_q = 1.7;               // MHz
  double theta = deg_to_rad(20.4);
  double alpha = 0.8;
  double gamma_ratio = 7.22;      // MHz/T
  double gamma0 = 150.0;          // MHz
  double delta_omega_n = 10.0;    // MHz
  double eta_cool = 0.063;        // at eta_ref_field
  double eta_ref_field = 3.0;     // T
  double gamma_em_ref = 1.0 / 41.7;  // model rate unit (MHz), at b_ref
  double b_ref = 3.0;             // T
  double b_field = 3.0;           // T
  T2Table t2_table;
  std::optional<double> t2_us;    // overrides the table when set

  double omega_n() const { return gamma_ratio * b_field; }
  // N*I, the maximal polarization.
  double max_polarization() const { return static_cast<double>(n_nuclei) * spin; }
  // N I (I+1) / 3: 5N/4 for I=3/2, N/4 for I=1/2.
  double thermal_variance() const { return n_nuclei * spin * (spin + 1.0) / 3.0; }
  // 2(I+1)/3, the spin-I factor of the self-consistency and variance formulas.
  double spin_factor() const { return 2.0 * (spin + 1.0) / 3.0; }
  double t2() const { return t2_us ? *t2_us : t2_table.at(b_field); }
  double eta_at_field() const;
  double gamma_em() const;
  double a_nc_value() const;

  ModelParams at_field(double b) const;
  void validate() const;
  bool operator==(const ModelParams&) const = default;
};

struct DriveSettings {
  double rabi = 0.0;       // MHz
  double pump_rabi = 0.0;  // MHz
  double detuning = 0.0;   // MHz

  void validate() const;
  bool operator==(const DriveSettings&) const = default;
};

struct MagnonParams {
  double eta1 = 0.10;
  double eta2 = 0.14;
  double gamma_n = 3.9;          // MHz
  double delta_q = 0.0;          // MHz, used only when anharmonic is set
  bool anharmonic = false;

  void validate() const;
  bool operator==(const MagnonParams&) const = default;
};

}  // namespace qdnuc
