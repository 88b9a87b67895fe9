#ifndef TASNSC_GEOMETRY_HPP_
#define TASNSC_GEOMETRY_HPP_

#include <Eigen/Core>

namespace tasnsc {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

class Trajectory;

/// x -> linear * x + translation
struct AffineMap2D {
  Mat2 linear = Mat2::Identity();
  Vec2 translation = Vec2::Zero();

  static AffineMap2D identity() { return {}; }
  /// Rotation by `angle` (rad) about the origin followed by a translation.
  static AffineMap2D rigid(double angle, const Vec2& translation);

  Vec2 apply(const Vec2& p) const { return linear * p + translation; }
  double determinant() const { return linear.determinant(); }
  AffineMap2D inverse() const;
  /// Map that applies *this first and `next` second.
  AffineMap2D then(const AffineMap2D& next) const;
};

/// Origin at an intersection corner, axes along the two curbs meeting there.
/// All vectors are expressed in the local (vehicle) frame. The basis is in
/// general skewed; coordinates in it are contravariant components.
class CurbsideFrame {
 public:
  /// Throws Error(kDegenerateDirection) when a direction is shorter than
  /// 1e-9 or the curbs are (anti)parallel, |sin alpha| < 1e-6.
  static CurbsideFrame from_curbs(const Vec2& origin, const Vec2& dir1,
                                  const Vec2& dir2);

  const Vec2& origin() const { return origin_; }
  const Vec2& e1() const { return e1_; }
  const Vec2& e2() const { return e2_; }
  double alpha() const { return alpha_; }

  /// Contravariant components (x', y') with x' e1 + y' e2 = p - origin.
  Vec2 to_curbside(const Vec2& p) const;
  /// Inverse of to_curbside.
  Vec2 from_curbside(const Vec2& c) const;

  /// Rigid part: local frame -> helper frame (corner at origin, e1 on +x).
  AffineMap2D helper_map() const;
  /// Linear part: helper frame -> curbside frame,
  /// rows (1, -1/tan a) and (0, 1/sin a).
  Mat2 skew_matrix() const;
  /// Full affine map local -> curbside, skew applied after the rigid part.
  AffineMap2D transform() const;

  /// The identity frame: origin (0,0), e1 = +x, e2 = +y.
  static CurbsideFrame aligned();

 private:
  CurbsideFrame(const Vec2& origin, const Vec2& e1, const Vec2& e2);

  Vec2 origin_;
  Vec2 e1_;
  Vec2 e2_;
  double alpha_;
};

inline CurbsideFrame frame_from_curbs(const Vec2& origin, const Vec2& dir1,
                                      const Vec2& dir2) {
  return CurbsideFrame::from_curbs(origin, dir1, dir2);
}

inline AffineMap2D build_transform(const CurbsideFrame& frame) {
  return frame.transform();
}

/// Applies to_curbside pointwise; timestamps, id and label are kept.
Trajectory transform_trajectory(const CurbsideFrame& frame,
                                const Trajectory& traj);
/// Applies from_curbside pointwise.
Trajectory inverse_transform_trajectory(const CurbsideFrame& frame,
                                        const Trajectory& traj);

}  // namespace tasnsc

#endif  // TASNSC_GEOMETRY_HPP_
