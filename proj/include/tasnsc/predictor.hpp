#ifndef TASNSC_PREDICTOR_HPP_
#define TASNSC_PREDICTOR_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tasnsc/geometry.hpp"
#include "tasnsc/gp.hpp"
#include "tasnsc/sparse_coding.hpp"
#include "tasnsc/trajectory.hpp"

namespace tasnsc {

/// kTasnsc learns and predicts in the curbside frame; kBaseline runs the same
/// pipeline directly on local coordinates.
enum class Mode { kTasnsc, kBaseline };

std::string to_string(Mode mode);
/// Accepts "tasnsc", "baseline" and "asnsc-baseline".
Mode parse_mode(const std::string& text);

struct PipelineConfig {
  Mode mode = Mode::kTasnsc;
  double dt = 0.5;      // s
  double t_obs = 2.5;   // s
  double t_pred = 5.0;  // s
  double cell = 1.0;    // m
  /// Border added around the training data when the grid is derived.
  double grid_margin = 2.0;  // m
  /// Fixed grid; derived from the training data when unset.
  std::optional<GridSpec> grid;
  DictionaryParams dictionary;
  std::size_t min_segment = kDefaultMinSegment;
  Kernel kernel;
  std::size_t top_m = 3;
  /// Cap on GP training samples per pattern (even subsampling beyond it).
  std::size_t max_pattern_samples = 300;

  void validate() const;
};

struct TasnscModel {
  PipelineConfig config;
  CurbsideFrame training_frame = CurbsideFrame::aligned();
  GridSpec grid;
  Dictionary dictionary;
  TransitionMatrix transitions;
  std::vector<MotionPattern> patterns;
  double final_objective = 0.0;
  /// Training trajectories dropped because they never moved.
  std::size_t skipped_trajectories = 0;
};

struct Candidate {
  Trajectory trajectory;  // local frame of the test intersection
  double likelihood = 0.0;
  double log_likelihood = 0.0;
  std::size_t pattern = 0;  // index into TasnscModel::patterns
  /// Posterior variances (vx, vy) at each rollout step.
  std::vector<Vec2> variance;
};

struct PredictionSet {
  std::vector<Candidate> candidates;  // best first

  const Candidate& top() const { return candidates.front(); }
};

/// Learns dictionary, transitions and GP motion patterns from `data`.
/// Throws kEmptyDataset for fewer than two trajectories.
TasnscModel train(const Dataset& data, const CurbsideFrame& frame,
                  const PipelineConfig& config);

/// Scores every pattern on the observation, keeps the best top_m, and rolls
/// each out for round(t_pred / dt) Euler steps from the last observed point.
PredictionSet predict(const TasnscModel& model, const CurbsideFrame& test_frame,
                      const Trajectory& observed);

}  // namespace tasnsc

#endif  // TASNSC_PREDICTOR_HPP_
