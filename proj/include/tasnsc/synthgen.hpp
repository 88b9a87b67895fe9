#ifndef TASNSC_SYNTHGEN_HPP_
#define TASNSC_SYNTHGEN_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tasnsc/geometry.hpp"
#include "tasnsc/trajectory.hpp"

namespace tasnsc {

/// What a pedestrian does at the corner after walking along curb 1 toward
/// it: keep going and cross the street beyond curb 2, turn left and cross
/// the street beyond curb 1, or turn right onto the curb-2 sidewalk.
enum class Intent { kStraight, kCrossLeft, kCrossRight };

std::string to_string(Intent intent);
Intent parse_intent(const std::string& text);

struct IntentMix {
  double straight = 0.4;
  double cross_left = 0.4;
  double cross_right = 0.2;
};

/// Parametric single-corner intersection. Angles in radians, lengths in
/// metres, all in the local frame.
struct SceneSpec {
  std::string name = "scene";
  Vec2 corner = Vec2::Zero();
  /// Direction of curb 1 measured from the local +x axis.
  double heading = 0.0;
  /// Angle from curb 1 to curb 2, counter-clockwise.
  double alpha = 1.5707963267948966;
  /// Distance of the walking line from the curbs.
  double sidewalk_offset = 1.5;
  /// Per-track offset perturbation, uniform in +/- lane_spread.
  double lane_spread = 0.5;
  /// Crossing directions; unset means along the opposite curb.
  std::optional<Vec2> crosswalk_straight;
  std::optional<Vec2> crosswalk_left;
  IntentMix mix;
  double speed_mean = 1.4;  // m/s
  double speed_sd = 0.2;    // m/s
  double noise_sd = 0.15;   // m, per-point jitter
  /// Time (s) at which a track reaches the turn point, uniform in the
  /// range; the track starts speed * time before it along curb 1.
  double turn_time_min = 1.0;
  double turn_time_max = 1.8;
  double duration = 10.0;  // s
  /// Length of the smoothed corner.
  double blend = 2.0;
  std::uint64_t seed = 1;

  /// Throws kInvalidProportions for a bad intent mix, kInvalidArgument for
  /// other out-of-range values, kDegenerateDirection for parallel curbs.
  void validate() const;
  CurbsideFrame frame() const;
};

struct GeneratedTrack {
  Trajectory trajectory;
  Intent intent = Intent::kStraight;
  /// Noise-free intent path, densely sampled.
  std::vector<Vec2> path;
  /// Arc length at which the corner blend begins; before it the track is on
  /// the approach leg along curb 1.
  double blend_start_arc = 0.0;
  /// Arc length of each trajectory point (before jitter).
  std::vector<double> arc;
};

/// Deterministic in (scene, n, dt); track i uses a seed derived from
/// (scene.seed, i).
std::vector<GeneratedTrack> generate_tracks(const SceneSpec& scene, int n,
                                            double dt);
Dataset generate(const SceneSpec& scene, int n, double dt);

}  // namespace tasnsc

#endif  // TASNSC_SYNTHGEN_HPP_
