#include "qdnuc/dynamics/hamiltonian.hpp"

#include <cmath>

#include "qdnuc/core/error.hpp"
#include "qdnuc/core/units.hpp"

namespace qdnuc::dynamics {

Operator hamiltonian_mhz(double iz_center, const DriveSettings& drive, const ModelParams& params,
                         const MagnonParams& magnon) {
  const Operator sz = SpinAlgebra::sz();
  const Operator m = SpinAlgebra::nuclear_level();
  Operator h = drive.detuning * sz + drive.rabi * SpinAlgebra::sx() + params.omega_n() * m;
  h -= params.a_c * (iz_center * sz + sz * m);
  h -= drive.rabi * SpinAlgebra::sy() *
       (magnon.eta1 * SpinAlgebra::sideband(1) + magnon.eta2 * SpinAlgebra::sideband(2));
  if (magnon.anharmonic) h += 0.5 * magnon.delta_q * m * m;
  return h;
}

Operator build_hamiltonian(double iz_center, const DriveSettings& drive, const ModelParams& params,
                           const MagnonParams& magnon) {
  return kTwoPi * hamiltonian_mhz(iz_center, drive, params, magnon);
}

double mean_transfer(const Operator& h_mhz, int order) {
  const int a = SpinAlgebra::index(Electron::up, 0);
  const int b = SpinAlgebra::index(Electron::down, order);
  Eigen::SelfAdjointEigenSolver<Operator> es(h_mhz);
  const auto& v = es.eigenvectors();
  double p = 0.0;
  for (int i = 0; i < kDim; ++i) p += std::norm(v(a, i)) * std::norm(v(b, i));
  return p;
}

double sideband_resonance(const ModelParams& params, const MagnonParams& magnon, double rabi,
                          int order, double iz_center) {
  if (order == 0 || order < -2 || order > 2) throw DomainError("order must be one of -2, -1, 1, 2");
  const double wn = params.omega_n();
  const double center = order * wn;
  auto transfer = [&](double d) {
    DriveSettings drive{rabi, 0.0, d};
    return mean_transfer(hamiltonian_mhz(iz_center, drive, params, magnon), order);
  };
  // Coarse scan over +-wn/4, then golden-section refinement of the best bin.
  const double half = 0.25 * wn;
  const int n = 500;
  const double step = 2.0 * half / n;
  int best = 0;
  double best_val = -1.0;
  for (int i = 0; i <= n; ++i) {
    const double v = transfer(center - half + step * i);
    if (v > best_val) best_val = v, best = i;
  }
  double lo = center - half + step * (best - 1), hi = center - half + step * (best + 1);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = transfer(x1), f2 = transfer(x2);
  for (int it = 0; it < 80 && hi - lo > 1e-9; ++it) {
    if (f1 < f2) {
      lo = x1, x1 = x2, f1 = f2;
      x2 = lo + g * (hi - lo), f2 = transfer(x2);
    } else {
      hi = x2, x2 = x1, f2 = f1;
      x1 = hi - g * (hi - lo), f1 = transfer(x1);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace qdnuc::dynamics
