#include "qkdlink/poincare.hpp"

#include <cmath>
#include <stdexcept>

namespace qkdlink {

double dot(const PoincareVector& a, const PoincareVector& b) {
  return a.s1 * b.s1 + a.s2 * b.s2 + a.s3 * b.s3;
}

double norm(const PoincareVector& v) { return std::sqrt(dot(v, v)); }

PoincareVector normalized(const PoincareVector& v) {
  const double n = norm(v);
  if (n == 0.0) throw std::invalid_argument("cannot normalize zero vector");
  return {v.s1 / n, v.s2 / n, v.s3 / n};
}

const char* state_label(int index) {
  static constexpr const char* labels[6] = {"X+", "X-", "Y+",
                                            "Y-", "Z+", "Z-"};
  if (index < 0 || index >= 6) throw std::out_of_range("state index");
  return labels[index];
}

PoincareVector prep_direction(Basis b, Sign s) {
  const double sg = (s == Sign::plus) ? 1.0 : -1.0;
  switch (b) {
    case Basis::X: return {sg, 0.0, 0.0};
    case Basis::Y: return {0.0, sg, 0.0};
    case Basis::Z: return {0.0, 0.0, sg};
  }
  throw std::logic_error("bad basis");
}

PoincareVector detector_direction(Basis b, Sign s) {
  PoincareVector d = prep_direction(b, s);
  d.s2 = -d.s2;  // receiver frame handedness
  return d;
}

PoincareVector Rotation3::apply(const PoincareVector& v) const {
  return {m[0] * v.s1 + m[1] * v.s2 + m[2] * v.s3,
          m[3] * v.s1 + m[4] * v.s2 + m[5] * v.s3,
          m[6] * v.s1 + m[7] * v.s2 + m[8] * v.s3};
}

Rotation3 Rotation3::then(const Rotation3& after) const {
  // (after * this): apply *this first.
  Rotation3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double acc = 0.0;
      for (int k = 0; k < 3; ++k) acc += after.m[3 * i + k] * m[3 * k + j];
      r.m[3 * i + j] = acc;
    }
  return r;
}

Rotation3 Rotation3::inverse() const {
  Rotation3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.m[3 * i + j] = m[3 * j + i];
  return r;
}

Rotation3 Rotation3::identity() { return Rotation3{}; }

Rotation3 Rotation3::about_axis(const PoincareVector& axis, double angle_deg) {
  const PoincareVector u = normalized(axis);
  const double a = deg_to_rad(angle_deg);
  const double c = std::cos(a);
  const double s = std::sin(a);
  const double t = 1.0 - c;
  Rotation3 r;
  r.m = {c + u.s1 * u.s1 * t,        u.s1 * u.s2 * t - u.s3 * s,
         u.s1 * u.s3 * t + u.s2 * s, u.s2 * u.s1 * t + u.s3 * s,
         c + u.s2 * u.s2 * t,        u.s2 * u.s3 * t - u.s1 * s,
         u.s3 * u.s1 * t - u.s2 * s, u.s3 * u.s2 * t + u.s1 * s,
         c + u.s3 * u.s3 * t};
  return r;
}

Rotation3 axial_rotation(double theta_physical_deg) {
  return Rotation3::about_axis({0.0, 0.0, 1.0}, 2.0 * theta_physical_deg);
}

Rotation3 birefringence_rotation(double retardance_deg,
                                 const PoincareVector& axis) {
  if (std::abs(axis.s3) > 1e-9)
    throw std::invalid_argument("birefringence axis must be equatorial");
  if (std::abs(norm(axis) - 1.0) > 1e-9)
    throw std::invalid_argument("birefringence axis must be unit norm");
  return Rotation3::about_axis(axis, retardance_deg);
}

double detection_probability(const PoincareVector& prep,
                             const PoincareVector& meas,
                             const Rotation3& channel) {
  const double p = 0.5 * (1.0 + dot(channel.apply(prep), meas));
  // Guard rounding at the endpoints.
  return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p);
}

double binary_entropy(double p) {
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument("binary_entropy: p outside [0, 1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double wrap_angle_deg(double deg) {
  double w = std::fmod(deg, 360.0);
  if (w <= -180.0) w += 360.0;
  if (w > 180.0) w -= 360.0;
  return w;
}

}  // namespace qkdlink
