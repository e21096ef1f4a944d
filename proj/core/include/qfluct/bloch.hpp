#pragma once

#include <array>
#include <cmath>

namespace qfluct {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr bool operator==(const Vec3&) const = default;

  constexpr double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  constexpr Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
};

/// Density operator of a qubit in Bloch form, rho = (I + r.sigma) / 2.
///
/// |0> is the +1 eigenstate of sigma_z (rz = +1). Trace and hermiticity are
/// built into the representation; positivity is |r| <= 1.
class QubitState {
 public:
  static constexpr double kNormTolerance = 1e-12;

  /// Maximally mixed state.
  constexpr QubitState() = default;

  /// Throws std::invalid_argument when |r| exceeds 1 + kNormTolerance.
  explicit QubitState(const Vec3& r);
  QubitState(double rx, double ry, double rz) : QubitState(Vec3{rx, ry, rz}) {}

  static constexpr QubitState ground() { return QubitState(Vec3{0, 0, 1}, Unchecked{}); }
  static constexpr QubitState excited() { return QubitState(Vec3{0, 0, -1}, Unchecked{}); }
  static constexpr QubitState maximally_mixed() { return QubitState{}; }

  constexpr double rx() const { return r_.x; }
  constexpr double ry() const { return r_.y; }
  constexpr double rz() const { return r_.z; }
  constexpr const Vec3& bloch() const { return r_; }
  double purity_radius() const { return r_.norm(); }

  /// Tr[rho * P] where P is the pure state `projector`.
  constexpr double overlap(const QubitState& projector) const {
    return 0.5 * (1.0 + r_.dot(projector.r_));
  }

  constexpr bool operator==(const QubitState&) const = default;

 private:
  struct Unchecked {};
  constexpr QubitState(const Vec3& r, Unchecked) : r_(r) {}
  friend class Rotation;
  friend QubitState unchecked_state(const Vec3& r);

  Vec3 r_{};
};

/// Builds a state without the positivity check; for maps already known to be
/// positive where rounding may push |r| a few ulp past 1.
QubitState unchecked_state(const Vec3& r);

/// SO(3) rotation acting on Bloch vectors; the image of a qubit unitary.
class Rotation {
 public:
  using Matrix = std::array<std::array<double, 3>, 3>;

  constexpr Rotation() : m_{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}} {}
  explicit constexpr Rotation(const Matrix& m) : m_(m) {}

  /// Right-handed rotation by `angle` about the unit vector `axis`; the Bloch
  /// image of exp(-i angle axis.sigma / 2).
  static Rotation about_axis(const Vec3& axis, double angle);
  /// Coordinate-axis rotations leave the axis component untouched bit for bit.
  static Rotation about_x(double angle);
  static Rotation about_z(double angle);

  Vec3 apply(const Vec3& v) const;
  QubitState apply(const QubitState& s) const { return QubitState(apply(s.r_), QubitState::Unchecked{}); }

  /// (a * b) applies b first.
  friend Rotation operator*(const Rotation& a, const Rotation& b);

  const Matrix& matrix() const { return m_; }
  double operator()(int row, int col) const { return m_[row][col]; }

 private:
  Matrix m_;
};

}  // namespace qfluct
