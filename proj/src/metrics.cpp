#include "tasnsc/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "tasnsc/error.hpp"

namespace tasnsc {

namespace {

constexpr double kMinDisplacement = 1e-9;

double directed_mean(std::span<const Vec2> from, std::span<const Vec2> to) {
  double sum = 0.0;
  for (const auto& p : from) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : to) best = std::min(best, (p - q).norm());
    sum += best;
  }
  return sum / static_cast<double>(from.size());
}

}  // namespace

double mhd(std::span<const Vec2> a, std::span<const Vec2> b) {
  if (a.empty() || b.empty()) {
    throw Error(ErrorCode::kEmptySequence, "MHD of an empty point sequence");
  }
  return std::max(directed_mean(a, b), directed_mean(b, a));
}

double angular_deviation(const Trajectory& predicted, const Trajectory& truth,
                         const Vec2& anchor) {
  if (predicted.empty() || truth.empty()) {
    throw Error(ErrorCode::kEmptySequence,
                "angular deviation of an empty trajectory");
  }
  const Vec2 a = predicted.back().pos - anchor;
  const Vec2 b = truth.back().pos - anchor;
  if (a.norm() < kMinDisplacement || b.norm() < kMinDisplacement) {
    throw Error(ErrorCode::kZeroDisplacement,
                "endpoint coincides with the anchor");
  }
  const double cross = a.x() * b.y() - a.y() * b.x();
  return std::abs(std::atan2(cross, a.dot(b))) * 180.0 / std::numbers::pi;
}

namespace {

double correct_weight(const ScoredPrediction& s, double threshold_deg) {
  double w = 0.0;
  for (const auto& c : s.predictions.candidates) {
    try {
      if (angular_deviation(c.trajectory, s.truth, s.anchor) <= threshold_deg) {
        w += c.likelihood;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kZeroDisplacement) throw;
    }
  }
  return w;
}

}  // namespace

double classification_accuracy(std::span<const ScoredPrediction> results,
                               double threshold_deg) {
  if (results.empty()) {
    throw Error(ErrorCode::kEmptySequence, "no predictions to score");
  }
  double correct = 0.0;
  double total = 0.0;
  for (const auto& s : results) {
    correct += correct_weight(s, threshold_deg);
    double case_total = 0.0;  // same order as correct_weight
    for (const auto& c : s.predictions.candidates) case_total += c.likelihood;
    total += case_total;
  }
  if (!(total > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "prediction likelihoods sum to 0");
  }
  return 100.0 * correct / total;
}

EvalReport evaluate(const TasnscModel& model, const Dataset& test,
                    const CurbsideFrame& test_frame,
                    const EvalOptions& options) {
  if (test.empty()) {
    throw Error(ErrorCode::kEmptyDataset, "test set is empty");
  }
  if (!(options.threshold_deg >= 0.0 && options.threshold_deg <= 180.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "threshold must lie in [0, 180] degrees");
  }
  const PipelineConfig& cfg = model.config;

  EvalReport report;
  report.mode = to_string(cfg.mode);
  report.threshold_deg = options.threshold_deg;

  std::vector<ScoredPrediction> scored;
  double mhd_sum = 0.0;
  double time_sum = 0.0;
  for (const auto& raw : test.trajectories) {
    raw.validate();
    const Trajectory traj = std::abs(raw.dt() - cfg.dt) > 1e-9
                                ? resample(raw, cfg.dt)
                                : raw;
    auto [observed, truth] = split_horizon(traj, cfg.t_obs, cfg.t_pred);

    const auto start = std::chrono::steady_clock::now();
    PredictionSet set = predict(model, test_frame, observed);
    const auto stop = std::chrono::steady_clock::now();

    EvalRow row;
    row.id = raw.id();
    row.label = raw.label();
    row.predict_time = std::chrono::duration<double>(stop - start).count();
    row.top_pattern = set.top().pattern;
    const auto truth_pts = truth.positions();
    if (options.weighted_mhd) {
      for (const auto& c : set.candidates) {
        row.mhd += c.likelihood * mhd(c.trajectory.positions(), truth_pts);
      }
    } else {
      row.mhd = mhd(set.top().trajectory.positions(), truth_pts);
    }
    const Vec2 anchor = observed.back().pos;
    try {
      row.top_deviation = angular_deviation(set.top().trajectory, truth, anchor);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kZeroDisplacement) throw;
      row.top_deviation = -1.0;
    }
    row.scored = ScoredPrediction{std::move(set), std::move(truth), anchor};
    row.correct_weight = correct_weight(row.scored, options.threshold_deg);
    row.observed = std::move(observed);

    mhd_sum += row.mhd;
    time_sum += row.predict_time;
    scored.push_back(row.scored);
    report.rows.push_back(std::move(row));
  }

  const auto n = static_cast<double>(report.rows.size());
  report.classification_accuracy =
      classification_accuracy(scored, options.threshold_deg);
  report.mean_mhd = mhd_sum / n;
  report.mean_predict_time = time_sum / n;
  return report;
}

std::vector<EvalReport> compare_grid(const CompareInputs& in,
                                     const PipelineConfig& base,
                                     const EvalOptions& options) {
  auto model_for = [&](Mode mode, const Dataset& data, const CurbsideFrame& f) {
    PipelineConfig c = base;
    c.mode = mode;
    return train(data, f, c);
  };
  const TasnscModel base_a = model_for(Mode::kBaseline, in.train_a, in.frame_a);
  const TasnscModel tas_a = model_for(Mode::kTasnsc, in.train_a, in.frame_a);
  const TasnscModel base_b = model_for(Mode::kBaseline, in.train_b, in.frame_b);
  const TasnscModel tas_b = model_for(Mode::kTasnsc, in.train_b, in.frame_b);

  auto run = [&](const TasnscModel& m, const Dataset& test,
                 const CurbsideFrame& f, const char* train_in,
                 const char* test_in) {
    EvalReport r = evaluate(m, test, f, options);
    r.train_in = train_in;
    r.test_in = test_in;
    return r;
  };
  std::vector<EvalReport> rows;
  rows.push_back(run(base_a, in.test_a, in.frame_a, "A", "A"));
  rows.push_back(run(tas_a, in.test_a, in.frame_a, "A", "A"));
  rows.push_back(run(tas_b, in.test_a, in.frame_a, "B", "A"));
  rows.push_back(run(base_b, in.test_b, in.frame_b, "B", "B"));
  rows.push_back(run(tas_b, in.test_b, in.frame_b, "B", "B"));
  rows.push_back(run(tas_a, in.test_b, in.frame_b, "A", "B"));
  return rows;
}

}  // namespace tasnsc
