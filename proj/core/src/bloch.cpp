#include "qfluct/bloch.hpp"

#include <stdexcept>
#include <string>

namespace qfluct {

QubitState::QubitState(const Vec3& r) : r_(r) {
  if (!(std::isfinite(r.x) && std::isfinite(r.y) && std::isfinite(r.z))) {
    throw std::invalid_argument("QubitState: non-finite Bloch component");
  }
  if (r.norm() > 1.0 + kNormTolerance) {
    throw std::invalid_argument("QubitState: Bloch vector outside the unit ball (|r| = " +
                                std::to_string(r.norm()) + ")");
  }
}

QubitState unchecked_state(const Vec3& r) { return QubitState(r, QubitState::Unchecked{}); }

Rotation Rotation::about_axis(const Vec3& axis, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double t = 1.0 - c;
  const auto [x, y, z] = axis;
  return Rotation(Matrix{{
      {t * x * x + c, t * x * y - s * z, t * x * z + s * y},
      {t * x * y + s * z, t * y * y + c, t * y * z - s * x},
      {t * x * z - s * y, t * y * z + s * x, t * z * z + c},
  }});
}

Rotation Rotation::about_x(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return Rotation(Matrix{{{1, 0, 0}, {0, c, -s}, {0, s, c}}});
}

Rotation Rotation::about_z(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return Rotation(Matrix{{{c, -s, 0}, {s, c, 0}, {0, 0, 1}}});
}

Vec3 Rotation::apply(const Vec3& v) const {
  return {m_[0][0] * v.x + m_[0][1] * v.y + m_[0][2] * v.z,
          m_[1][0] * v.x + m_[1][1] * v.y + m_[1][2] * v.z,
          m_[2][0] * v.x + m_[2][1] * v.y + m_[2][2] * v.z};
}

Rotation operator*(const Rotation& a, const Rotation& b) {
  Rotation::Matrix m{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      m[i][j] = a.m_[i][0] * b.m_[0][j] + a.m_[i][1] * b.m_[1][j] + a.m_[i][2] * b.m_[2][j];
    }
  }
  return Rotation(m);
}

}  // namespace qfluct
