#ifndef TASNSC_METRICS_HPP_
#define TASNSC_METRICS_HPP_

#include <span>
#include <string>
#include <vector>

#include "tasnsc/geometry.hpp"
#include "tasnsc/predictor.hpp"
#include "tasnsc/trajectory.hpp"

namespace tasnsc {

/// Modified Hausdorff distance: the larger of the two directed mean
/// nearest-neighbour distances. Throws kEmptySequence on empty input.
double mhd(std::span<const Vec2> a, std::span<const Vec2> b);

/// Unsigned angle in degrees between (predicted end - anchor) and
/// (truth end - anchor). Throws kZeroDisplacement if either is shorter than
/// 1e-9 m.
double angular_deviation(const Trajectory& predicted, const Trajectory& truth,
                         const Vec2& anchor);

struct ScoredPrediction {
  PredictionSet predictions;
  Trajectory truth;
  Vec2 anchor = Vec2::Zero();
};

/// Likelihood-weighted share of candidates whose endpoint direction is
/// within `threshold_deg` of the truth, in percent, pooled over all cases.
/// A candidate that does not move counts as incorrect.
double classification_accuracy(std::span<const ScoredPrediction> results,
                               double threshold_deg);

struct EvalOptions {
  double threshold_deg = 40.0;
  /// Report the likelihood-weighted mean MHD over candidates instead of the
  /// top-1 candidate's.
  bool weighted_mhd = false;
};

struct EvalRow {
  std::string id;
  std::string label;
  double mhd = 0.0;               // m
  double correct_weight = 0.0;    // sum of likelihoods judged correct
  double top_deviation = 0.0;     // deg, -1 if undefined
  double predict_time = 0.0;      // s
  std::size_t top_pattern = 0;
  Trajectory observed;
  ScoredPrediction scored;
};

struct EvalReport {
  std::string mode;
  std::string train_in;
  std::string test_in;
  double classification_accuracy = 0.0;  // percent
  double mean_mhd = 0.0;                 // m
  double mean_predict_time = 0.0;        // s
  double threshold_deg = 40.0;
  std::vector<EvalRow> rows;
};

/// Splits each test trajectory into observation and ground truth, predicts,
/// and aggregates accuracy, MHD and wall-clock predict time.
EvalReport evaluate(const TasnscModel& model, const Dataset& test,
                    const CurbsideFrame& test_frame,
                    const EvalOptions& options = {});

/// Two intersections, each with its own frame and train/test split.
struct CompareInputs {
  Dataset train_a;
  Dataset test_a;
  Dataset train_b;
  Dataset test_b;
  CurbsideFrame frame_a = CurbsideFrame::aligned();
  CurbsideFrame frame_b = CurbsideFrame::aligned();
};

/// Six rows: baseline A->A, TASNSC A->A, TASNSC B->A, baseline B->B,
/// TASNSC B->B, TASNSC A->B. `base.mode` is ignored.
std::vector<EvalReport> compare_grid(const CompareInputs& in,
                                     const PipelineConfig& base,
                                     const EvalOptions& options = {});

}  // namespace tasnsc

#endif  // TASNSC_METRICS_HPP_
