#include "tasnsc/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "tasnsc/error.hpp"

namespace tasnsc {

std::string to_string(Intent intent) {
  switch (intent) {
    case Intent::kStraight: return "straight";
    case Intent::kCrossLeft: return "cross-left";
    case Intent::kCrossRight: return "cross-right";
  }
  return "straight";
}

Intent parse_intent(const std::string& text) {
  if (text == "straight") return Intent::kStraight;
  if (text == "cross-left") return Intent::kCrossLeft;
  if (text == "cross-right") return Intent::kCrossRight;
  throw Error(ErrorCode::kInvalidArgument, "unknown intent '" + text + "'");
}

void SceneSpec::validate() const {
  const double sum = mix.straight + mix.cross_left + mix.cross_right;
  if (mix.straight < 0.0 || mix.cross_left < 0.0 || mix.cross_right < 0.0 ||
      std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidProportions,
                "intent proportions must be non-negative and sum to 1");
  }
  if (!(speed_mean > 0.0) || !(speed_sd >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "walking speed must be positive");
  }
  if (!(sidewalk_offset > 0.0) || !(lane_spread >= 0.0) ||
      !(lane_spread < sidewalk_offset) || !(noise_sd >= 0.0) ||
      !(blend >= 0.0) || !(duration > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "scene distances out of range");
  }
  if (!(turn_time_min >= 0.0) || !(turn_time_max >= turn_time_min)) {
    throw Error(ErrorCode::kInvalidArgument, "turn time range is invalid");
  }
  if (!(alpha > 0.0 && alpha < std::numbers::pi)) {
    throw Error(ErrorCode::kDegenerateDirection,
                "curb angle must lie strictly between 0 and pi");
  }
  frame();
}

CurbsideFrame SceneSpec::frame() const {
  const Vec2 e1{std::cos(heading), std::sin(heading)};
  const Vec2 e2{std::cos(heading + alpha), std::sin(heading + alpha)};
  return CurbsideFrame::from_curbs(corner, e1, e2);
}

namespace {

// Arc-length lookup on a dense polyline.
class Polyline {
 public:
  explicit Polyline(std::vector<Vec2> pts) : pts_(std::move(pts)) {
    cum_.push_back(0.0);
    for (std::size_t i = 1; i < pts_.size(); ++i) {
      cum_.push_back(cum_.back() + (pts_[i] - pts_[i - 1]).norm());
    }
  }

  double length() const { return cum_.back(); }
  const std::vector<Vec2>& points() const { return pts_; }

  Vec2 at(double s) const {
    if (s <= 0.0) return pts_.front();
    if (s >= cum_.back()) return pts_.back();
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
    const auto i = static_cast<std::size_t>(it - cum_.begin());
    const double w = (s - cum_[i - 1]) / (cum_[i] - cum_[i - 1]);
    return pts_[i - 1] + w * (pts_[i] - pts_[i - 1]);
  }

 private:
  std::vector<Vec2> pts_;
  std::vector<double> cum_;
};

Intent sample_intent(const IntentMix& mix, std::mt19937_64& rng) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  if (u < mix.straight) return Intent::kStraight;
  if (u < mix.straight + mix.cross_left) return Intent::kCrossLeft;
  return Intent::kCrossRight;
}

}  // namespace

std::vector<GeneratedTrack> generate_tracks(const SceneSpec& scene, int n,
                                            double dt) {
  scene.validate();
  if (n < 1) {
    throw Error(ErrorCode::kInvalidArgument, "need at least one trajectory");
  }
  if (!(dt > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "dt must be positive");
  }
  const CurbsideFrame frame = scene.frame();
  const Vec2 e1 = frame.e1();
  const Vec2 e2 = frame.e2();
  const double sin_alpha = std::sin(frame.alpha());
  const Vec2 straight_dir =
      scene.crosswalk_straight ? scene.crosswalk_straight->normalized() : Vec2(-e1);
  const Vec2 left_dir =
      scene.crosswalk_left ? scene.crosswalk_left->normalized() : Vec2(-e2);
  const auto steps = static_cast<std::size_t>(std::floor(scene.duration / dt + 1e-9));

  std::vector<GeneratedTrack> tracks;
  tracks.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::seed_seq seq{static_cast<std::uint32_t>(scene.seed),
                      static_cast<std::uint32_t>(scene.seed >> 32),
                      static_cast<std::uint32_t>(i)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    GeneratedTrack track;
    track.intent = sample_intent(scene.mix, rng);
    const double offset =
        scene.sidewalk_offset + scene.lane_spread * (2.0 * unit(rng) - 1.0);
    const double turn_time =
        scene.turn_time_min + (scene.turn_time_max - scene.turn_time_min) * unit(rng);
    const double speed = std::max(
        0.3, std::normal_distribution<double>(scene.speed_mean, scene.speed_sd)(rng));
    // Start on the straight approach leg, before the corner blend.
    const double approach = std::max(speed * turn_time, 0.5 * scene.blend);

    // Turn point: `offset` metres from both curb lines.
    const Vec2 turn = frame.from_curbside(Vec2::Constant(offset / sin_alpha));
    const Vec2 start = turn + approach * e1;
    Vec2 exit_dir = straight_dir;
    if (track.intent == Intent::kCrossLeft) exit_dir = left_dir;
    if (track.intent == Intent::kCrossRight) exit_dir = e2;
    const double exit_len = speed * scene.duration + 5.0;

    std::vector<Vec2> pts{start};
    const double half = 0.5 * scene.blend;
    const Vec2 in_dir = -e1;
    if (half > 0.0 && (exit_dir - in_dir).norm() > 1e-12) {
      const Vec2 b0 = turn - half * in_dir;
      const Vec2 b2 = turn + half * exit_dir;
      constexpr int kBlendSamples = 24;
      for (int s = 0; s <= kBlendSamples; ++s) {
        const double u = static_cast<double>(s) / kBlendSamples;
        pts.push_back((1 - u) * (1 - u) * b0 + 2 * u * (1 - u) * turn + u * u * b2);
      }
    } else {
      pts.push_back(turn);
    }
    pts.push_back(turn + exit_len * exit_dir);
    const Polyline path(std::move(pts));

    std::normal_distribution<double> jitter(0.0, scene.noise_sd);
    std::vector<Vec2> positions;
    positions.reserve(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) {
      const double s = speed * static_cast<double>(k) * dt;
      Vec2 p = path.at(s);
      if (scene.noise_sd > 0.0) p += Vec2{jitter(rng), jitter(rng)};
      positions.push_back(p);
      track.arc.push_back(s);
    }
    track.blend_start_arc = approach - half;
    track.path = path.points();
    track.trajectory = Trajectory::uniform(
        scene.name + "-" + std::to_string(i), dt, 0.0, positions,
        to_string(track.intent));
    tracks.push_back(std::move(track));
  }
  return tracks;
}

Dataset generate(const SceneSpec& scene, int n, double dt) {
  Dataset out;
  for (auto& track : generate_tracks(scene, n, dt)) {
    out.trajectories.push_back(std::move(track.trajectory));
  }
  return out;
}

}  // namespace tasnsc
