#include "worldtraj/geometry.hpp"

#include <cmath>
#include <numbers>

#include "worldtraj/errors.hpp"

namespace worldtraj {

Rotation3::Rotation3(const Mat3& m) : m_(m) {
  if (!m.allFinite()) fail(ErrorKind::InvalidRotation, "rotation has non-finite entries");
  const double ortho = (m * m.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff();
  const double det = m.determinant();
  if (ortho > kOrthonormalTolerance || std::abs(det - 1.0) > kOrthonormalTolerance) {
    fail(ErrorKind::InvalidRotation, "matrix is not a proper rotation");
  }
}

Rotation3 Rotation3::from_axis_angle(const Vec3& axis_angle) {
  const double angle = axis_angle.norm();
  if (angle < 1e-300) return {};
  return Rotation3(Eigen::AngleAxisd(angle, axis_angle / angle).toRotationMatrix(),
                   Unchecked{});
}

Rotation3 Rotation3::about_x(double radians) {
  return Rotation3(Eigen::AngleAxisd(radians, Vec3::UnitX()).toRotationMatrix(), Unchecked{});
}

Rotation3 Rotation3::about_y(double radians) {
  return Rotation3(Eigen::AngleAxisd(radians, Vec3::UnitY()).toRotationMatrix(), Unchecked{});
}

Rotation3 Rotation3::about_z(double radians) {
  return Rotation3(Eigen::AngleAxisd(radians, Vec3::UnitZ()).toRotationMatrix(), Unchecked{});
}

Rotation3 Rotation3::from_quaternion(const Eigen::Quaterniond& q) {
  return Rotation3(q.normalized().toRotationMatrix(), Unchecked{});
}

Rotation3 Rotation3::nearest(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0) d(2, 2) = -1.0;
  return Rotation3(svd.matrixU() * d * svd.matrixV().transpose(), Unchecked{});
}

Vec3 Rotation3::to_axis_angle() const {
  Eigen::AngleAxisd aa(m_);
  return aa.axis() * aa.angle();
}

Eigen::Quaterniond Rotation3::to_quaternion() const { return Eigen::Quaterniond(m_).normalized(); }

double Rotation3::angle() const {
  const double c = std::clamp((m_.trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c);
}

double rotation_distance(const Rotation3& a, const Rotation3& b) {
  return (a.inverse() * b).angle();
}

Rotation3 slerp(const Rotation3& a, const Rotation3& b, double t) {
  return Rotation3::from_quaternion(a.to_quaternion().slerp(t, b.to_quaternion()));
}

Mat4 RigidTransform::matrix() const {
  Mat4 m = Mat4::Identity();
  m.topLeftCorner<3, 3>() = rotation.matrix();
  m.topRightCorner<3, 1>() = translation;
  return m;
}

RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  return {a.rotation * b.rotation, a.rotation * b.translation + a.translation};
}

RigidTransform inverse(const RigidTransform& t) {
  const Rotation3 r_inv = t.rotation.inverse();
  return {r_inv, -(r_inv * t.translation)};
}

Vec3 apply_to_point(const RigidTransform& t, const Vec3& p) {
  return t.rotation * p + t.translation;
}

double max_abs_difference(const RigidTransform& a, const RigidTransform& b) {
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

SimilarityTransform umeyama_align(std::span<const Vec3> source, std::span<const Vec3> target,
                                  bool with_scale) {
  if (source.size() != target.size()) {
    fail(ErrorKind::LengthMismatch, "umeyama_align: source and target sizes differ");
  }
  const std::size_t n = source.size();
  if (n < 3) fail(ErrorKind::DegenerateConfiguration, "umeyama_align needs at least 3 points");

  Vec3 mu_s = Vec3::Zero();
  Vec3 mu_t = Vec3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    mu_s += source[i];
    mu_t += target[i];
  }
  mu_s /= static_cast<double>(n);
  mu_t /= static_cast<double>(n);

  Mat3 cov = Mat3::Zero();
  Mat3 src_cov = Mat3::Zero();
  double src_var = 0.0;
  double tgt_var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 ds = source[i] - mu_s;
    const Vec3 dt = target[i] - mu_t;
    cov += dt * ds.transpose();
    src_cov += ds * ds.transpose();
    src_var += ds.squaredNorm();
    tgt_var += dt.squaredNorm();
  }
  cov /= static_cast<double>(n);
  src_cov /= static_cast<double>(n);
  src_var /= static_cast<double>(n);
  tgt_var /= static_cast<double>(n);

  const double extent = std::max({src_var, tgt_var, mu_s.squaredNorm(), mu_t.squaredNorm(), 1e-300});
  if (src_var <= 1e-24 * extent || tgt_var <= 1e-24 * extent) {
    fail(ErrorKind::DegenerateConfiguration, "umeyama_align: points are coincident");
  }

  // Rotation about the principal axis of a collinear set is unobservable.
  Eigen::SelfAdjointEigenSolver<Mat3> src_eig(src_cov, Eigen::EigenvaluesOnly);
  const Vec3 ev = src_eig.eigenvalues();  // ascending
  Eigen::JacobiSVD<Mat3> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec3 sv = svd.singularValues();  // descending
  if (ev(1) <= 1e-12 * ev(2) || sv(1) <= 1e-12 * sv(0)) {
    fail(ErrorKind::DegenerateConfiguration, "umeyama_align: points are collinear");
  }

  const Mat3& u = svd.matrixU();
  const Mat3& v = svd.matrixV();
  Vec3 s_diag(1.0, 1.0, 1.0);
  if (u.determinant() * v.determinant() < 0.0) s_diag(2) = -1.0;

  const Mat3 r = u * s_diag.asDiagonal() * v.transpose();
  const double scale = with_scale ? sv.dot(s_diag) / src_var : 1.0;

  SimilarityTransform out;
  out.scale = scale;
  out.rotation = Rotation3::nearest(r);
  out.translation = mu_t - scale * (out.rotation * mu_s);
  return out;
}

double alignment_rms(const SimilarityTransform& t, std::span<const Vec3> source,
                     std::span<const Vec3> target) {
  if (source.size() != target.size() || source.empty()) {
    fail(ErrorKind::LengthMismatch, "alignment_rms: size mismatch");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < source.size(); ++i) acc += (target[i] - t.apply(source[i])).squaredNorm();
  return std::sqrt(acc / static_cast<double>(source.size()));
}

double wrap_two_pi(double radians) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(radians, two_pi);
  if (w < 0.0) w += two_pi;
  if (w >= two_pi) w -= two_pi;
  return w;
}

}  // namespace worldtraj
