#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qdnuc::dynamics {

using Complex = std::complex<double>;
inline constexpr int kNuclearLevels = 5;  // m = -2 .. +2 around the conditioning I_z
inline constexpr int kDim = 2 * kNuclearLevels;
using Operator = Eigen::Matrix<Complex, kDim, kDim>;

enum class Electron { up = 0, down = 1 };

// Operators on electron (x) five nuclear levels. Basis index is
// electron * 5 + (m + 2) with electron up = 0.
struct SpinAlgebra {
  static int index(Electron e, int m);
  static Operator sx();
  static Operator sy();
  static Operator sz();
  // 1_e (x) |m><m|.
  static Operator nuclear_projector(int m);
  // 1_e (x) sum_m m |m><m|.
  static Operator nuclear_level();
  // 1_e (x) (sum_m |m+k><m| + h.c.), k = 1 or 2.
  static Operator sideband(int k);
  // |e><e| (x) 1_n.
  static Operator electron_projector(Electron e);
};

}  // namespace qdnuc::dynamics
