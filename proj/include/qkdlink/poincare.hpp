#pragma once

#include <array>
#include <cstdint>

// Polarization algebra on the Poincaré sphere.
//
// Frame conventions used throughout the library (fixed here, nowhere else):
//   * Protocol basis X maps to +/-s1, Y to +/-s2, Z to +/-s3. Z is the
//     circular (key) basis and sits on the poles, so axial rotations of
//     the transmitter never move it.
//   * A physical rotation of the transmitter by theta degrees about the
//     optical axis is a rotation by 2*theta about s3 on the sphere.
//   * The receiver looks into the beam, which flips the handedness of its
//     local frame: its Y analyzers point along -/+s2 while X and Z match
//     the transmitter. This is the one sign choice that makes the four
//     axial-angle estimator branches agree on an ideal rotated channel
//     (see estimators.hpp); on an identity channel the estimated frame
//     angle is the +45 deg reference, and a physical transmitter rotation
//     by theta moves it by -2*theta.
//   * Angles are degrees at every API boundary, radians only inside.

namespace qkdlink {

/// Direction on the Poincaré sphere. Unit norm for pure states; shorter
/// vectors are allowed where a depolarized effective direction is meant.
struct PoincareVector {
  double s1 = 0.0;
  double s2 = 0.0;
  double s3 = 0.0;
};

[[nodiscard]] double dot(const PoincareVector& a, const PoincareVector& b);
[[nodiscard]] double norm(const PoincareVector& v);
[[nodiscard]] PoincareVector normalized(const PoincareVector& v);

enum class Basis : std::uint8_t { X = 0, Y = 1, Z = 2 };
enum class Sign : std::uint8_t { plus = 0, minus = 1 };

/// Flat index for the six protocol states, ordered X+,X-,Y+,Y-,Z+,Z-.
[[nodiscard]] constexpr int state_index(Basis b, Sign s) {
  return static_cast<int>(b) * 2 + static_cast<int>(s);
}
[[nodiscard]] constexpr Basis state_basis(int index) {
  return static_cast<Basis>(index / 2);
}
[[nodiscard]] constexpr Sign state_sign(int index) {
  return static_cast<Sign>(index % 2);
}

/// Short labels ("X+", "X-", ...) indexed like state_index.
[[nodiscard]] const char* state_label(int index);

/// Ideal transmitter direction for a protocol state.
[[nodiscard]] PoincareVector prep_direction(Basis b, Sign s);

/// Ideal analyzer direction for a receiver channel. Differs from
/// prep_direction only in the mirrored Y axis (receiver handedness).
[[nodiscard]] PoincareVector detector_direction(Basis b, Sign s);

/// Proper rotation acting on Poincaré vectors (row-major 3x3).
struct Rotation3 {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  [[nodiscard]] PoincareVector apply(const PoincareVector& v) const;
  [[nodiscard]] Rotation3 then(const Rotation3& after) const;
  [[nodiscard]] Rotation3 inverse() const;
  [[nodiscard]] static Rotation3 identity();
  /// Rodrigues rotation about an arbitrary unit axis, angle in degrees.
  [[nodiscard]] static Rotation3 about_axis(const PoincareVector& axis,
                                            double angle_deg);
};

/// Channel rotation equivalent to physically rotating the transmitter by
/// theta degrees about the optical axis: 2*theta about s3. Fixes +/-s3.
[[nodiscard]] Rotation3 axial_rotation(double theta_physical_deg);

/// Rotation by `retardance_deg` about an equatorial axis (s3 == 0),
/// modelling residual birefringence of the steering optics. Unlike an
/// axial rotation this generally moves the poles. Throws
/// std::invalid_argument if the axis is not equatorial unit-norm.
[[nodiscard]] Rotation3 birefringence_rotation(double retardance_deg,
                                               const PoincareVector& axis);

/// Born probability that a state prepared along `prep` and sent through
/// `channel` fires the analyzer along `meas`: (1 + (R*prep).meas) / 2.
[[nodiscard]] double detection_probability(const PoincareVector& prep,
                                           const PoincareVector& meas,
                                           const Rotation3& channel);

/// Binary entropy in bits, h(0) = h(1) = 0. Throws std::invalid_argument
/// outside [0, 1].
[[nodiscard]] double binary_entropy(double p);

[[nodiscard]] constexpr double deg_to_rad(double deg) {
  return deg * 0.017453292519943295;
}
[[nodiscard]] constexpr double rad_to_deg(double rad) {
  return rad * 57.29577951308232;
}

/// Wrap an angle in degrees to (-180, 180].
[[nodiscard]] double wrap_angle_deg(double deg);

}  // namespace qkdlink
