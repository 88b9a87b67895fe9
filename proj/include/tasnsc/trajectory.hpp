#ifndef TASNSC_TRAJECTORY_HPP_
#define TASNSC_TRAJECTORY_HPP_

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "tasnsc/geometry.hpp"

namespace tasnsc {

struct TimedPoint {
  double t = 0.0;  // s
  Vec2 pos = Vec2::Zero();  // m

  bool operator==(const TimedPoint& o) const { return t == o.t && pos == o.pos; }
};

/// Position plus forward-difference velocity at that position.
struct FlowSample {
  Vec2 pos = Vec2::Zero();
  Vec2 vel = Vec2::Zero();
};

/// Sequence of timestamped 2-D positions. Instances produced by the library
/// are sampled at a fixed step dt; `validate()` checks that invariant for
/// data that arrives from outside (files, callers).
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(std::string id, double dt, std::vector<TimedPoint> points,
             std::string label = {});

  /// Positions placed at t0, t0 + dt, ...
  static Trajectory uniform(std::string id, double dt, double t0,
                            const std::vector<Vec2>& positions,
                            std::string label = {});

  const std::string& id() const { return id_; }
  double dt() const { return dt_; }
  /// Ground-truth intent tag, empty when unknown.
  const std::string& label() const { return label_; }
  const std::vector<TimedPoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const TimedPoint& operator[](std::size_t i) const { return points_[i]; }
  const TimedPoint& front() const { return points_.front(); }
  const TimedPoint& back() const { return points_.back(); }
  double duration() const;
  std::vector<Vec2> positions() const;

  /// Throws Error(kNonUniformTimestamps) unless timestamps are strictly
  /// increasing with spacing dt (1e-6 s tolerance).
  void validate() const;

  Trajectory map_positions(const std::function<Vec2(const Vec2&)>& f) const;
  /// Points [begin, end) as a new trajectory with the same id/dt/label.
  Trajectory slice(std::size_t begin, std::size_t end) const;

  bool operator==(const Trajectory&) const = default;

 private:
  std::string id_;
  double dt_ = 0.0;
  std::vector<TimedPoint> points_;
  std::string label_;
};

enum class Split { kTrain, kTest };

struct Dataset {
  std::vector<Trajectory> trajectories;
  Split split = Split::kTrain;

  bool empty() const { return trajectories.empty(); }
  std::size_t size() const { return trajectories.size(); }
  /// Shared sampling step; throws if trajectories disagree or the set is
  /// empty.
  double dt() const;
};

/// Linear interpolation onto t0, t0 + dt, ...; a trailing partial step is
/// dropped. Input timestamps need only be strictly increasing.
Trajectory resample(const Trajectory& traj, double dt);

/// v_k = (p_{k+1} - p_k) / dt for the first n - 1 points.
std::vector<FlowSample> velocities(const Trajectory& traj);

/// First round(t_obs/dt) points, then the next round(t_pred/dt) points.
std::pair<Trajectory, Trajectory> split_horizon(const Trajectory& traj,
                                                double t_obs, double t_pred);

/// round(seconds / dt) as a count of steps.
std::size_t steps_for(double seconds, double dt);

}  // namespace tasnsc

#endif  // TASNSC_TRAJECTORY_HPP_
