#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/LU>
#include <gtest/gtest.h>

#include "tasnsc/error.hpp"
#include "tasnsc/geometry.hpp"
#include "tasnsc/trajectory.hpp"
#include "test_support.hpp"

namespace tasnsc {
namespace {

using testing::deg;
using testing::random_frame;
using testing::random_point;

// Independent oracle: solve [e1 e2] c = p - o with a full-pivot LU.
Vec2 oracle_components(const CurbsideFrame& f, const Vec2& p) {
  Mat2 basis;
  basis.col(0) = f.e1();
  basis.col(1) = f.e2();
  return basis.fullPivLu().solve(p - f.origin());
}

TEST(CurbsideFrame, MatchesLinearSystemOracle) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const CurbsideFrame f = random_frame(rng);
    const Vec2 p = random_point(rng);
    const Vec2 c = f.to_curbside(p);
    const Vec2 expect = oracle_components(f, p);
    EXPECT_NEAR(c.x(), expect.x(), 1e-9);
    EXPECT_NEAR(c.y(), expect.y(), 1e-9);
  }
}

TEST(CurbsideFrame, RoundTrip) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const CurbsideFrame f = random_frame(rng);
    const Vec2 p = random_point(rng);
    EXPECT_LT((f.from_curbside(f.to_curbside(p)) - p).norm(), 1e-9);
    const Vec2 c = random_point(rng);
    EXPECT_LT((f.to_curbside(f.from_curbside(c)) - c).norm(), 1e-9);
  }
}

TEST(CurbsideFrame, AffineMapAgreesWithComponents) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 500; ++i) {
    const CurbsideFrame f = random_frame(rng);
    const AffineMap2D t = build_transform(f);
    const Vec2 p = random_point(rng);
    EXPECT_LT((t.apply(p) - f.to_curbside(p)).norm(), 1e-9);
    EXPECT_LT((t.inverse().apply(t.apply(p)) - p).norm(), 1e-9);
  }
}

TEST(CurbsideFrame, CornerAndCurbPoints) {
  const CurbsideFrame f =
      frame_from_curbs({2.0, -1.0}, {3.0, 0.0}, {std::cos(deg(60)), std::sin(deg(60))});
  EXPECT_LT(f.to_curbside({2.0, -1.0}).norm(), 1e-12);
  EXPECT_LT((f.to_curbside(f.origin() + 4.0 * f.e1()) - Vec2(4.0, 0.0)).norm(), 1e-12);
  EXPECT_LT((f.to_curbside(f.origin() + 2.5 * f.e2()) - Vec2(0.0, 2.5)).norm(), 1e-12);
  EXPECT_NEAR(f.alpha(), deg(60), 1e-12);
}

TEST(CurbsideFrame, SkewHelperRows) {
  const CurbsideFrame f = frame_from_curbs(
      {0.0, 0.0}, {1.0, 0.0}, {std::cos(deg(60)), std::sin(deg(60))});
  const Mat2 m = f.skew_matrix();
  EXPECT_DOUBLE_EQ(m(0, 0), 1.0);
  EXPECT_NEAR(m(0, 1), -1.0 / std::tan(deg(60)), 1e-12);
  EXPECT_DOUBLE_EQ(m(1, 0), 0.0);
  EXPECT_NEAR(m(1, 1), 1.0 / std::sin(deg(60)), 1e-12);
}

TEST(CurbsideFrame, OrthogonalSkewIsExactIdentity) {
  const CurbsideFrame f = frame_from_curbs({0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0});
  EXPECT_TRUE(f.skew_matrix() == Mat2::Identity());
  const CurbsideFrame g = frame_from_curbs({5.0, 1.0}, {0.0, 2.0}, {-3.0, 0.0});
  EXPECT_TRUE(g.skew_matrix() == Mat2::Identity());
}

TEST(CurbsideFrame, AlignedFrameIsIdentity) {
  const CurbsideFrame f = CurbsideFrame::aligned();
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const Vec2 p = random_point(rng);
    EXPECT_TRUE(f.to_curbside(p) == p);
    EXPECT_TRUE(f.from_curbside(p) == p);
  }
}

TEST(CurbsideFrame, ClockwiseSecondCurb) {
  const CurbsideFrame f = frame_from_curbs({0.0, 0.0}, {1.0, 0.0}, {0.0, -1.0});
  EXPECT_NEAR(f.alpha(), std::numbers::pi / 2, 1e-12);
  EXPECT_LT((f.to_curbside({1.0, -2.0}) - Vec2(1.0, 2.0)).norm(), 1e-12);
  EXPECT_LT((f.transform().apply({1.0, -2.0}) - Vec2(1.0, 2.0)).norm(), 1e-12);
}

TEST(CurbsideFrame, RejectsDegenerateDirections) {
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kParse;
  };
  EXPECT_EQ(code_of([] { frame_from_curbs({0, 0}, {0, 0}, {0, 1}); }),
            ErrorCode::kDegenerateDirection);
  EXPECT_EQ(code_of([] { frame_from_curbs({0, 0}, {1, 0}, {-2, 0}); }),
            ErrorCode::kDegenerateDirection);
  EXPECT_EQ(code_of([] { frame_from_curbs({0, 0}, {1, 1}, {2, 2}); }),
            ErrorCode::kDegenerateDirection);
}

// Affine maps keep collinear points collinear, midpoints as midpoints and
// parallel segments parallel.
TEST(CurbsideFrame, AffineInvariants) {
  std::mt19937_64 rng(21);
  auto cross = [](const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); };
  for (int i = 0; i < 1000; ++i) {
    const CurbsideFrame f = random_frame(rng);
    const Vec2 a = random_point(rng, 10.0);
    const Vec2 b = random_point(rng, 10.0);
    const double t = testing::uniform(rng, -2.0, 2.0);
    const Vec2 c = a + t * (b - a);
    const Vec2 ta = f.to_curbside(a), tb = f.to_curbside(b), tc = f.to_curbside(c);
    const double scale = (tb - ta).norm() * (tc - ta).norm() + 1.0;
    EXPECT_LT(std::abs(cross(tb - ta, tc - ta)) / scale, 1e-9);
    EXPECT_LT((f.to_curbside(0.5 * (a + b)) - 0.5 * (ta + tb)).norm(), 1e-9);
    const Vec2 d = random_point(rng, 10.0);
    const Vec2 e = d + testing::uniform(rng, -3.0, 3.0) * (b - a);
    const Vec2 td = f.to_curbside(d), te = f.to_curbside(e);
    const double pscale = (tb - ta).norm() * (te - td).norm() + 1.0;
    EXPECT_LT(std::abs(cross(tb - ta, te - td)) / pscale, 1e-9);
  }
}

TEST(AffineMap2D, ThenAppliesLeftFirst) {
  const AffineMap2D r = AffineMap2D::rigid(std::numbers::pi / 2, {1.0, 0.0});
  AffineMap2D s;
  s.linear = Mat2::Identity() * 2.0;
  const Vec2 p{1.0, 0.0};
  EXPECT_LT((r.then(s).apply(p) - s.apply(r.apply(p))).norm(), 1e-12);
  EXPECT_LT((r.then(s).apply(p) - Vec2(2.0, 2.0)).norm(), 1e-12);
  EXPECT_NEAR(r.determinant(), 1.0, 1e-12);
}

TEST(TransformTrajectory, KeepsTimesAndMeta) {
  const CurbsideFrame f = frame_from_curbs({1, 1}, {1, 0}, {1, 1});
  const Trajectory traj = testing::line("t", {0, 0}, {1, 0.5}, 6, 0.5, "straight");
  const Trajectory c = transform_trajectory(f, traj);
  ASSERT_EQ(c.size(), traj.size());
  EXPECT_EQ(c.id(), "t");
  EXPECT_EQ(c.label(), "straight");
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_EQ(c[i].t, traj[i].t);
  }
  const Trajectory back = inverse_transform_trajectory(f, c);
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_LT((back[i].pos - traj[i].pos).norm(), 1e-12);
  }
}

}  // namespace
}  // namespace tasnsc
