#include "tasnsc/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tasnsc/error.hpp"

namespace tasnsc {

namespace {

constexpr double kTimeTolerance = 1e-6;

}  // namespace

Trajectory::Trajectory(std::string id, double dt, std::vector<TimedPoint> points,
                       std::string label)
    : id_(std::move(id)), dt_(dt), points_(std::move(points)),
      label_(std::move(label)) {}

Trajectory Trajectory::uniform(std::string id, double dt, double t0,
                               const std::vector<Vec2>& positions,
                               std::string label) {
  std::vector<TimedPoint> pts;
  pts.reserve(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    pts.push_back({t0 + static_cast<double>(i) * dt, positions[i]});
  }
  return Trajectory(std::move(id), dt, std::move(pts), std::move(label));
}

double Trajectory::duration() const {
  return points_.size() < 2 ? 0.0 : points_.back().t - points_.front().t;
}

std::vector<Vec2> Trajectory::positions() const {
  std::vector<Vec2> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.pos);
  return out;
}

void Trajectory::validate() const {
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) {
    throw Error(ErrorCode::kNonUniformTimestamps,
                "trajectory '" + id_ + "' has non-positive dt");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i].t) || !points_[i].pos.allFinite()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "trajectory '" + id_ + "' contains non-finite values");
    }
    if (i == 0) continue;
    const double step = points_[i].t - points_[i - 1].t;
    if (std::abs(step - dt_) > kTimeTolerance) {
      std::ostringstream msg;
      msg << "trajectory '" << id_ << "' step " << i << " is " << step
          << " s, expected " << dt_ << " s";
      throw Error(ErrorCode::kNonUniformTimestamps, msg.str());
    }
  }
}

Trajectory Trajectory::map_positions(
    const std::function<Vec2(const Vec2&)>& f) const {
  std::vector<TimedPoint> pts;
  pts.reserve(points_.size());
  for (const auto& p : points_) pts.push_back({p.t, f(p.pos)});
  return Trajectory(id_, dt_, std::move(pts), label_);
}

Trajectory Trajectory::slice(std::size_t begin, std::size_t end) const {
  end = std::min(end, points_.size());
  begin = std::min(begin, end);
  return Trajectory(id_, dt_,
                    std::vector<TimedPoint>(points_.begin() + begin,
                                            points_.begin() + end),
                    label_);
}

double Dataset::dt() const {
  if (trajectories.empty()) {
    throw Error(ErrorCode::kEmptyDataset, "dataset is empty");
  }
  const double dt = trajectories.front().dt();
  for (const auto& t : trajectories) {
    if (std::abs(t.dt() - dt) > kTimeTolerance) {
      throw Error(ErrorCode::kNonUniformTimestamps,
                  "trajectories in a dataset must share dt");
    }
  }
  return dt;
}

std::size_t steps_for(double seconds, double dt) {
  return static_cast<std::size_t>(std::llround(seconds / dt));
}

Trajectory resample(const Trajectory& traj, double dt) {
  if (traj.size() < 2) {
    throw Error(ErrorCode::kTooShortTrajectory,
                "resampling needs at least two points");
  }
  if (!(dt > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "resample dt must be positive");
  }
  const auto& pts = traj.points();
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (!(pts[i].t > pts[i - 1].t)) {
      throw Error(ErrorCode::kNonUniformTimestamps,
                  "timestamps must be strictly increasing");
    }
  }
  const double t0 = pts.front().t;
  const double span = pts.back().t - t0;
  const auto count =
      static_cast<std::size_t>(std::floor(span / dt + kTimeTolerance)) + 1;

  std::vector<TimedPoint> out;
  out.reserve(count);
  std::size_t seg = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    while (seg + 2 < pts.size() && pts[seg + 1].t <= t) ++seg;
    const auto& a = pts[seg];
    const auto& b = pts[seg + 1];
    const double w = std::clamp((t - a.t) / (b.t - a.t), 0.0, 1.0);
    Vec2 pos = a.pos + w * (b.pos - a.pos);
    // Land exactly on source samples that sit on the grid.
    if (std::abs(t - a.t) <= kTimeTolerance) pos = a.pos;
    if (std::abs(t - b.t) <= kTimeTolerance) pos = b.pos;
    out.push_back({t, pos});
  }
  return Trajectory(traj.id(), dt, std::move(out), traj.label());
}

std::vector<FlowSample> velocities(const Trajectory& traj) {
  if (traj.size() < 2) {
    throw Error(ErrorCode::kTooShortTrajectory,
                "velocities need at least two points");
  }
  std::vector<FlowSample> out;
  out.reserve(traj.size() - 1);
  for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
    out.push_back({traj[k].pos, (traj[k + 1].pos - traj[k].pos) / traj.dt()});
  }
  return out;
}

std::pair<Trajectory, Trajectory> split_horizon(const Trajectory& traj,
                                                double t_obs, double t_pred) {
  if (!(t_obs >= 0.0) || !(t_pred >= 0.0) || !(traj.dt() > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "horizons must be non-negative and dt positive");
  }
  if (traj.duration() + kTimeTolerance < t_obs + t_pred) {
    std::ostringstream msg;
    msg << "trajectory '" << traj.id() << "' lasts " << traj.duration()
        << " s, needs " << t_obs + t_pred << " s";
    throw Error(ErrorCode::kInsufficientDuration, msg.str());
  }
  const std::size_t n_obs = steps_for(t_obs, traj.dt());
  const std::size_t n_pred = steps_for(t_pred, traj.dt());
  return {traj.slice(0, n_obs), traj.slice(n_obs, n_obs + n_pred)};
}

}  // namespace tasnsc
