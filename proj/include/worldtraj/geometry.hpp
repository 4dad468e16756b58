#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace worldtraj {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

/// Proper rotation stored as an orthonormal 3x3 matrix with det = +1.
class Rotation3 {
 public:
  static constexpr double kOrthonormalTolerance = 1e-6;

  Rotation3() : m_(Mat3::Identity()) {}

  /// Throws InvalidRotation when `m` is not orthonormal or has det != +1
  /// within kOrthonormalTolerance.
  explicit Rotation3(const Mat3& m);

  static Rotation3 identity() { return {}; }
  static Rotation3 from_axis_angle(const Vec3& axis_angle);
  static Rotation3 about_x(double radians);
  static Rotation3 about_y(double radians);
  static Rotation3 about_z(double radians);
  static Rotation3 from_quaternion(const Eigen::Quaterniond& q);
  /// Nearest rotation to `m` in the Frobenius sense (SVD projection).
  static Rotation3 nearest(const Mat3& m);

  const Mat3& matrix() const { return m_; }
  Vec3 to_axis_angle() const;
  Eigen::Quaterniond to_quaternion() const;
  Rotation3 inverse() const { return Rotation3(m_.transpose(), Unchecked{}); }
  double angle() const;

  Vec3 operator*(const Vec3& v) const { return m_ * v; }
  Rotation3 operator*(const Rotation3& other) const {
    return Rotation3(m_ * other.m_, Unchecked{});
  }

 private:
  struct Unchecked {};
  Rotation3(const Mat3& m, Unchecked) : m_(m) {}
  Mat3 m_;
};

/// Geodesic angle between two rotations, radians.
double rotation_distance(const Rotation3& a, const Rotation3& b);

Rotation3 slerp(const Rotation3& a, const Rotation3& b, double t);

struct RigidTransform {
  Rotation3 rotation;
  Vec3 translation = Vec3::Zero();

  static RigidTransform identity() { return {}; }
  Mat4 matrix() const;
};

/// Result applies `b` first, then `a`.
RigidTransform compose(const RigidTransform& a, const RigidTransform& b);
RigidTransform inverse(const RigidTransform& t);
Vec3 apply_to_point(const RigidTransform& t, const Vec3& p);

inline RigidTransform operator*(const RigidTransform& a, const RigidTransform& b) {
  return compose(a, b);
}

/// max |a - b| over the 4x4 homogeneous matrices.
double max_abs_difference(const RigidTransform& a, const RigidTransform& b);

struct SimilarityTransform {
  double scale = 1.0;
  Rotation3 rotation;
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& p) const { return scale * (rotation * p) + translation; }
};

/// Least-squares similarity (Umeyama) mapping `source` onto `target`.
///
/// Minimizes sum_i |target_i - (s R source_i + t)|^2. The smallest singular
/// direction is sign-corrected so det(R) = +1. Throws
/// DegenerateConfiguration for fewer than 3 points, coincident points, or
/// point sets too close to collinear to pin down the rotation.
SimilarityTransform umeyama_align(std::span<const Vec3> source,
                                  std::span<const Vec3> target,
                                  bool with_scale);

/// Root-mean-square of |target_i - T(source_i)|.
double alignment_rms(const SimilarityTransform& t, std::span<const Vec3> source,
                     std::span<const Vec3> target);

/// Wraps an angle into [0, 2*pi).
double wrap_two_pi(double radians);

}  // namespace worldtraj
