#include "tasnsc/geometry.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

#include "tasnsc/error.hpp"
#include "tasnsc/trajectory.hpp"

namespace tasnsc {

namespace {

constexpr double kMinDirectionNorm = 1e-9;
constexpr double kMinSinAlpha = 1e-6;

}  // namespace

AffineMap2D AffineMap2D::rigid(double angle, const Vec2& translation) {
  AffineMap2D m;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  m.linear << c, -s, s, c;
  m.translation = translation;
  return m;
}

AffineMap2D AffineMap2D::inverse() const {
  AffineMap2D inv;
  inv.linear = linear.inverse();
  inv.translation = -(inv.linear * translation);
  return inv;
}

AffineMap2D AffineMap2D::then(const AffineMap2D& next) const {
  AffineMap2D out;
  out.linear = next.linear * linear;
  out.translation = next.linear * translation + next.translation;
  return out;
}

CurbsideFrame::CurbsideFrame(const Vec2& origin, const Vec2& e1,
                             const Vec2& e2)
    : origin_(origin),
      e1_(e1),
      e2_(e2),
      alpha_(std::acos(std::clamp(e1.dot(e2), -1.0, 1.0))) {}

CurbsideFrame CurbsideFrame::from_curbs(const Vec2& origin, const Vec2& dir1,
                                        const Vec2& dir2) {
  const double n1 = dir1.norm();
  const double n2 = dir2.norm();
  if (!(n1 >= kMinDirectionNorm) || !(n2 >= kMinDirectionNorm)) {
    throw Error(ErrorCode::kDegenerateDirection,
                "curb direction has (near) zero length");
  }
  const Vec2 e1 = dir1 / n1;
  const Vec2 e2 = dir2 / n2;
  const double sin_alpha = e1.x() * e2.y() - e1.y() * e2.x();
  if (!(std::abs(sin_alpha) >= kMinSinAlpha)) {
    throw Error(ErrorCode::kDegenerateDirection,
                "curb directions are parallel or antiparallel");
  }
  if (!origin.allFinite()) {
    throw Error(ErrorCode::kDegenerateDirection, "frame origin is not finite");
  }
  return CurbsideFrame(origin, e1, e2);
}

CurbsideFrame CurbsideFrame::aligned() {
  return CurbsideFrame(Vec2::Zero(), Vec2::UnitX(), Vec2::UnitY());
}

// Cramer's rule on [e1 | e2] c = p - origin. For the aligned frame this is
// exact in floating point, which keeps the transform a true identity there.
Vec2 CurbsideFrame::to_curbside(const Vec2& p) const {
  const double dx = p.x() - origin_.x();
  const double dy = p.y() - origin_.y();
  const double det = e1_.x() * e2_.y() - e1_.y() * e2_.x();
  return {(dx * e2_.y() - dy * e2_.x()) / det,
          (e1_.x() * dy - e1_.y() * dx) / det};
}

Vec2 CurbsideFrame::from_curbside(const Vec2& c) const {
  return {origin_.x() + c.x() * e1_.x() + c.y() * e2_.x(),
          origin_.y() + c.x() * e1_.y() + c.y() * e2_.y()};
}

AffineMap2D CurbsideFrame::helper_map() const {
  // Rotate so that e1 lands on +x, after moving the corner to the origin.
  // When e2 lies clockwise of e1 the helper frame is mirrored so that e2
  // ends up in the upper half plane, matching alpha in (0, pi).
  const double sin_alpha = e1_.x() * e2_.y() - e1_.y() * e2_.x();
  Mat2 rot;
  rot << e1_.x(), e1_.y(), -e1_.y(), e1_.x();
  if (sin_alpha < 0.0) {
    rot.row(1) *= -1.0;
  }
  AffineMap2D m;
  m.linear = rot;
  m.translation = -(rot * origin_);
  return m;
}

Mat2 CurbsideFrame::skew_matrix() const {
  // cot and csc from the basis itself; exact for orthogonal unit curbs.
  const double c = e1_.dot(e2_);
  const double s = std::abs(e1_.x() * e2_.y() - e1_.y() * e2_.x());
  Mat2 m;
  m << 1.0, -c / s, 0.0, 1.0 / s;
  return m;
}

AffineMap2D CurbsideFrame::transform() const {
  AffineMap2D skew;
  skew.linear = skew_matrix();
  return helper_map().then(skew);
}

Trajectory transform_trajectory(const CurbsideFrame& frame,
                                const Trajectory& traj) {
  return traj.map_positions(
      [&frame](const Vec2& p) { return frame.to_curbside(p); });
}

Trajectory inverse_transform_trajectory(const CurbsideFrame& frame,
                                        const Trajectory& traj) {
  return traj.map_positions(
      [&frame](const Vec2& p) { return frame.from_curbside(p); });
}

}  // namespace tasnsc
