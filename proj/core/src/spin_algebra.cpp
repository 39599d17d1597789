#include "qdnuc/dynamics/spin_algebra.hpp"

#include "qdnuc/core/error.hpp"

namespace qdnuc::dynamics {

namespace {

using Mat2 = Eigen::Matrix<Complex, 2, 2>;
using Mat5 = Eigen::Matrix<Complex, kNuclearLevels, kNuclearLevels>;

Operator kron(const Mat2& a, const Mat5& b) {
  Operator out = Operator::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block<kNuclearLevels, kNuclearLevels>(i * kNuclearLevels, j * kNuclearLevels) = a(i, j) * b;
  return out;
}

void check_level(int m) {
  if (m < -2 || m > 2) throw DomainError("nuclear level must lie in -2..2");
}

}  // namespace

int SpinAlgebra::index(Electron e, int m) {
  check_level(m);
  return static_cast<int>(e) * kNuclearLevels + (m + 2);
}

Operator SpinAlgebra::sx() {
  Mat2 s;
  s << 0.0, 0.5, 0.5, 0.0;
  return kron(s, Mat5::Identity());
}

Operator SpinAlgebra::sy() {
  const Complex i(0.0, 1.0);
  Mat2 s;
  s << 0.0, -0.5 * i, 0.5 * i, 0.0;
  return kron(s, Mat5::Identity());
}

Operator SpinAlgebra::sz() {
  Mat2 s;
  s << 0.5, 0.0, 0.0, -0.5;
  return kron(s, Mat5::Identity());
}

Operator SpinAlgebra::nuclear_projector(int m) {
  check_level(m);
  Mat5 p = Mat5::Zero();
  p(m + 2, m + 2) = 1.0;
  return kron(Mat2::Identity(), p);
}

Operator SpinAlgebra::nuclear_level() {
  Mat5 n = Mat5::Zero();
  for (int m = -2; m <= 2; ++m) n(m + 2, m + 2) = m;
  return kron(Mat2::Identity(), n);
}

Operator SpinAlgebra::sideband(int k) {
  if (k != 1 && k != 2) throw DomainError("sideband order must be 1 or 2");
  Mat5 x = Mat5::Zero();
  for (int i = 0; i + k < kNuclearLevels; ++i) {
    x(i + k, i) = 1.0;
    x(i, i + k) = 1.0;
  }
  return kron(Mat2::Identity(), x);
}

Operator SpinAlgebra::electron_projector(Electron e) {
  Mat2 p = Mat2::Zero();
  p(static_cast<int>(e), static_cast<int>(e)) = 1.0;
  return kron(p, Mat5::Identity());
}

}  // namespace qdnuc::dynamics
