#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include <gtest/gtest.h>

#include "tasnsc/error.hpp"
#include "tasnsc/synthgen.hpp"
#include "test_support.hpp"

namespace tasnsc {
namespace {

using testing::deg;

double distance_to_polyline(const Vec2& p, const std::vector<Vec2>& line) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    const Vec2 d = line[i + 1] - line[i];
    const double len2 = d.squaredNorm();
    const double t = len2 > 0 ? std::clamp((p - line[i]).dot(d) / len2, 0.0, 1.0) : 0.0;
    best = std::min(best, (p - (line[i] + t * d)).norm());
  }
  return best;
}

SceneSpec skewed() {
  SceneSpec s;
  s.name = "b";
  s.corner = {-4, 2};
  s.heading = deg(-20);
  s.alpha = deg(60);
  s.seed = 202;
  return s;
}

TEST(Generate, Deterministic) {
  const SceneSpec s = skewed();
  EXPECT_EQ(generate(s, 30, 0.5).trajectories, generate(s, 30, 0.5).trajectories);
  SceneSpec t = s;
  t.seed = 203;
  EXPECT_NE(generate(s, 30, 0.5).trajectories, generate(t, 30, 0.5).trajectories);
}

TEST(Generate, PrefixStable) {
  const SceneSpec s = skewed();
  const auto few = generate(s, 5, 0.5).trajectories;
  const auto many = generate(s, 20, 0.5).trajectories;
  for (std::size_t i = 0; i < few.size(); ++i) EXPECT_EQ(few[i], many[i]);
}

TEST(Generate, UniformSamplingAndLabels) {
  const SceneSpec s = skewed();
  const Dataset d = generate(s, 40, 0.5);
  ASSERT_EQ(d.size(), 40u);
  for (const auto& t : d.trajectories) {
    EXPECT_NO_THROW(t.validate());
    EXPECT_NEAR(t.duration(), s.duration, 1e-9);
    EXPECT_NO_THROW(parse_intent(t.label()));
  }
}

TEST(Generate, NoiselessStraightIsParallelToCurb) {
  SceneSpec s = skewed();
  s.mix = {1.0, 0.0, 0.0};
  s.noise_sd = 0.0;
  const CurbsideFrame f = s.frame();
  const double sin_a = std::sin(s.alpha);
  for (const auto& t : generate(s, 20, 0.5).trajectories) {
    const double y0 = f.to_curbside(t.front().pos).y();
    for (const auto& p : t.points()) {
      const Vec2 c = f.to_curbside(p.pos);
      EXPECT_NEAR(c.y(), y0, 1e-9);
      const double dist = c.y() * sin_a;  // distance from the curb-1 line
      EXPECT_GE(dist, s.sidewalk_offset - s.lane_spread - 1e-9);
      EXPECT_LE(dist, s.sidewalk_offset + s.lane_spread + 1e-9);
    }
  }
}

TEST(Generate, PreCrossingContainment) {
  const SceneSpec s = skewed();
  const CurbsideFrame f = s.frame();
  for (const auto& g : generate_tracks(s, 200, 0.5)) {
    for (std::size_t i = 0; i < g.trajectory.size(); ++i) {
      const bool crossing = g.intent != Intent::kCrossRight &&
                            g.arc[i] > g.blend_start_arc + s.blend;
      if (crossing) continue;
      const Vec2 c = f.to_curbside(g.trajectory[i].pos);
      EXPECT_GE(c.minCoeff(), -s.sidewalk_offset) << g.trajectory.id() << " point " << i;
    }
  }
}

TEST(Generate, MeanDistanceToIntentPath) {
  const SceneSpec s = skewed();
  for (const auto& g : generate_tracks(s, 60, 0.5)) {
    double sum = 0.0;
    for (const auto& p : g.trajectory.points()) sum += distance_to_polyline(p.pos, g.path);
    EXPECT_LE(sum / static_cast<double>(g.trajectory.size()), 3.0 * s.noise_sd);
  }
}

TEST(Generate, IntentMixConverges) {
  SceneSpec s = skewed();
  s.mix = {0.5, 0.3, 0.2};
  const int n = 3000;
  std::map<std::string, int> counts;
  for (const auto& t : generate(s, n, 0.5).trajectories) ++counts[t.label()];
  const std::map<std::string, double> expect{
      {"straight", 0.5}, {"cross-left", 0.3}, {"cross-right", 0.2}};
  for (const auto& [name, p] : expect) {
    const double se = std::sqrt(p * (1 - p) / n);
    EXPECT_LE(std::abs(counts[name] / static_cast<double>(n) - p), 3 * se) << name;
  }
}

TEST(SceneSpec, Validation) {
  SceneSpec s = skewed();
  s.mix = {0.5, 0.5, 0.5};
  try {
    s.validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidProportions);
  }
  s = skewed();
  s.speed_mean = 0.0;
  EXPECT_THROW(s.validate(), Error);
  s = skewed();
  s.alpha = 0.0;
  EXPECT_THROW(s.validate(), Error);
  EXPECT_THROW(generate(skewed(), 0, 0.5), Error);
}

TEST(Intent, Names) {
  for (Intent i : {Intent::kStraight, Intent::kCrossLeft, Intent::kCrossRight}) {
    EXPECT_EQ(parse_intent(to_string(i)), i);
  }
  EXPECT_THROW(parse_intent("sideways"), Error);
}

}  // namespace
}  // namespace tasnsc
