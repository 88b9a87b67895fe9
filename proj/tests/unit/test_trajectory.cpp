#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "tasnsc/error.hpp"
#include "tasnsc/trajectory.hpp"
#include "test_support.hpp"

namespace tasnsc {
namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no tasnsc::Error thrown";
  return ErrorCode::kParse;
}

TEST(Resample, UniformInputUnchanged) {
  const Trajectory t = testing::line("a", {1, 2}, {1.4, 0.3}, 12);
  EXPECT_EQ(resample(t, 0.5), t);
}

TEST(Resample, LinearInterpolation) {
  const Trajectory t("a", 1.0, {{0.0, {0, 0}}, {1.0, {2, 0}}, {2.0, {4, 0}}});
  const Trajectory r = resample(t, 0.5);
  ASSERT_EQ(r.size(), 5u);
  for (std::size_t i = 0; i < r.size(); ++i) {
    EXPECT_DOUBLE_EQ(r[i].pos.x(), static_cast<double>(i));
    EXPECT_DOUBLE_EQ(r[i].t, 0.5 * static_cast<double>(i));
  }
}

TEST(Resample, IrregularTimestamps) {
  const Trajectory t("a", 0.0, {{0.0, {0, 0}}, {0.3, {0.3, 0}}, {1.7, {1.7, 1.4}}});
  const Trajectory r = resample(t, 0.5);
  ASSERT_EQ(r.size(), 4u);
  EXPECT_NEAR(r[2].pos.x(), 1.0, 1e-12);
  EXPECT_NEAR(r[2].pos.y(), 0.7, 1e-12);
  EXPECT_NO_THROW(r.validate());
}

TEST(Resample, Idempotent) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<TimedPoint> pts;
    double t = 0.0;
    for (int i = 0; i < 20; ++i) {
      pts.push_back({t, testing::random_point(rng, 5.0)});
      t += testing::uniform(rng, 0.05, 1.0);
    }
    const Trajectory once = resample(Trajectory("r", 0.0, pts), 0.4);
    EXPECT_EQ(resample(once, 0.4), once);
  }
}

TEST(Resample, Errors) {
  EXPECT_EQ(code_of([] { resample(Trajectory("a", 0.5, {{0.0, {0, 0}}}), 0.5); }),
            ErrorCode::kTooShortTrajectory);
  EXPECT_EQ(code_of([] {
              resample(Trajectory("a", 0.5, {{1.0, {0, 0}}, {0.5, {1, 0}}}), 0.5);
            }),
            ErrorCode::kNonUniformTimestamps);
}

TEST(Velocities, StraightWalk) {
  const Trajectory t = testing::line("a", {0, 0}, {1.4, 0}, 10);
  const auto v = velocities(t);
  ASSERT_EQ(v.size(), 9u);
  for (const auto& s : v) {
    EXPECT_NEAR(s.vel.x(), 1.4, 1e-12);
    EXPECT_NEAR(s.vel.y(), 0.0, 1e-12);
  }
}

TEST(Velocities, Stationary) {
  const Trajectory t = testing::line("a", {3, 3}, {0, 0}, 5);
  for (const auto& s : velocities(t)) EXPECT_TRUE(s.vel.isZero());
}

TEST(Velocities, ForwardDifference) {
  const Trajectory t = Trajectory::uniform("a", 1.0, 0.0, {{0, 0}, {1, 0}, {1, 1}});
  const auto v = velocities(t);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].vel, Vec2(1, 0));
  EXPECT_EQ(v[1].vel, Vec2(0, 1));
  EXPECT_EQ(v[1].pos, Vec2(1, 0));
}

TEST(SplitHorizon, DefaultHorizons) {
  const Trajectory t = testing::line("a", {0, 0}, {1, 0}, 16);
  const auto [obs, fut] = split_horizon(t, 2.5, 5.0);
  EXPECT_EQ(obs.size(), 5u);
  EXPECT_EQ(fut.size(), 10u);
  EXPECT_DOUBLE_EQ(fut.front().t, 2.5);
}

TEST(SplitHorizon, ObservationIsPrefix) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 16 + static_cast<int>(rng() % 10);
    std::vector<Vec2> pts;
    for (int i = 0; i < n; ++i) pts.push_back(testing::random_point(rng));
    const Trajectory t = Trajectory::uniform("p", 0.5, 1.0, pts);
    const auto [obs, fut] = split_horizon(t, 2.5, 5.0);
    for (std::size_t i = 0; i < obs.size(); ++i) EXPECT_EQ(obs[i], t[i]);
    for (std::size_t i = 0; i < fut.size(); ++i) EXPECT_EQ(fut[i], t[obs.size() + i]);
  }
}

TEST(SplitHorizon, FullDurationObservationFails) {
  const Trajectory t = testing::line("a", {0, 0}, {1, 0}, 16);
  EXPECT_EQ(code_of([&] { split_horizon(t, t.duration(), 5.0); }),
            ErrorCode::kInsufficientDuration);
}

TEST(SplitHorizon, ZeroObservation) {
  const Trajectory t = testing::line("a", {0, 0}, {1, 0}, 16);
  const auto [obs, fut] = split_horizon(t, 0.0, 5.0);
  EXPECT_TRUE(obs.empty());
  EXPECT_EQ(fut.size(), 10u);
  EXPECT_EQ(fut.front(), t.front());
}

TEST(Trajectory, ValidateCatchesGaps) {
  EXPECT_NO_THROW(testing::line("a", {0, 0}, {1, 0}, 5).validate());
  const Trajectory bad("b", 0.5, {{0.0, {0, 0}}, {0.5, {1, 0}}, {1.5, {2, 0}}});
  EXPECT_EQ(code_of([&] { bad.validate(); }), ErrorCode::kNonUniformTimestamps);
}

TEST(Dataset, SharedStep) {
  Dataset d;
  EXPECT_EQ(code_of([&] { (void)d.dt(); }), ErrorCode::kEmptyDataset);
  d.trajectories.push_back(testing::line("a", {0, 0}, {1, 0}, 5, 0.5));
  EXPECT_DOUBLE_EQ(d.dt(), 0.5);
  d.trajectories.push_back(testing::line("b", {0, 0}, {1, 0}, 5, 0.25));
  EXPECT_THROW((void)d.dt(), Error);
}

}  // namespace
}  // namespace tasnsc
