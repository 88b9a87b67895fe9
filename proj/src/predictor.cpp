#include "tasnsc/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tasnsc/error.hpp"

namespace tasnsc {

std::string to_string(Mode mode) {
  return mode == Mode::kTasnsc ? "tasnsc" : "baseline";
}

Mode parse_mode(const std::string& text) {
  if (text == "tasnsc") return Mode::kTasnsc;
  if (text == "baseline" || text == "asnsc-baseline" || text == "asnsc") {
    return Mode::kBaseline;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown mode '" + text + "'");
}

void PipelineConfig::validate() const {
  if (!(dt > 0.0) || !(t_obs >= 0.0) || !(t_pred > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "dt and t_pred must be positive, t_obs non-negative");
  }
  if (!(cell > 0.0) || !(grid_margin >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid grid cell or margin");
  }
  if (grid) grid->validate();
  if (dictionary.atoms < 1 || !(dictionary.lambda >= 0.0) ||
      dictionary.iterations < 0) {
    throw Error(ErrorCode::kInvalidArgument, "invalid dictionary parameters");
  }
  if (top_m < 1 || min_segment < 1 || max_pattern_samples < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "top_m, min_segment and max_pattern_samples must be >= 1");
  }
  kernel.validate();
}

namespace {

std::vector<FlowSample> pair_samples(const Trajectory& traj,
                                     const std::vector<FlowSample>& flow,
                                     const Segment& a, const Segment& b) {
  std::vector<FlowSample> out;
  const std::size_t begin = std::min(a.begin, b.begin);
  const std::size_t end = std::min(std::max(a.end, b.end), traj.size() - 1);
  for (std::size_t k = begin; k < end; ++k) out.push_back(flow[k]);
  return out;
}

std::vector<FlowSample> subsample(std::vector<FlowSample> samples,
                                  std::size_t cap) {
  if (samples.size() <= cap) return samples;
  std::vector<FlowSample> out;
  out.reserve(cap);
  for (std::size_t i = 0; i < cap; ++i) {
    out.push_back(samples[i * samples.size() / cap]);
  }
  return out;
}

}  // namespace

TasnscModel train(const Dataset& data, const CurbsideFrame& frame,
                  const PipelineConfig& config) {
  config.validate();
  if (data.size() < 2) {
    throw Error(ErrorCode::kEmptyDataset,
                "training needs at least two trajectories");
  }

  TasnscModel model;
  model.config = config;
  model.training_frame = frame;

  std::vector<Trajectory> working;
  working.reserve(data.size());
  std::vector<Vec2> all_points;
  for (const auto& traj : data.trajectories) {
    traj.validate();
    if (traj.size() < 2) {
      throw Error(ErrorCode::kTooShortTrajectory,
                  "training trajectory '" + traj.id() + "' has < 2 points");
    }
    Trajectory t = std::abs(traj.dt() - config.dt) > 1e-9
                       ? resample(traj, config.dt)
                       : traj;
    if (config.mode == Mode::kTasnsc) t = transform_trajectory(frame, t);
    for (const auto& p : t.points()) all_points.push_back(p.pos);
    working.push_back(std::move(t));
  }

  model.grid = config.grid ? *config.grid
                           : GridSpec::covering(all_points, config.cell,
                                                config.grid_margin);

  std::vector<Trajectory> moving;
  std::vector<Eigen::VectorXd> columns;
  for (auto& t : working) {
    try {
      columns.push_back(featurize(t, model.grid).values);
      moving.push_back(std::move(t));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerateMotion) throw;
      ++model.skipped_trajectories;
    }
  }
  if (moving.size() < 2) {
    throw Error(ErrorCode::kEmptyDataset,
                "fewer than two moving training trajectories");
  }

  Eigen::MatrixXd features(model.grid.dim(),
                           static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    features.col(static_cast<Eigen::Index>(j)) = columns[j];
  }
  LearnResult learned = learn_dictionary(features, config.dictionary);
  model.dictionary = std::move(learned.dictionary);
  model.final_objective = learned.objective_history.back();

  const int k = static_cast<int>(model.dictionary.size());
  std::vector<Segmentation> segs;
  segs.reserve(moving.size());
  for (const auto& t : moving) {
    segs.push_back(segment(t, model.dictionary, model.grid, config.min_segment));
  }
  model.transitions = build_transitions(segs, k);

  std::vector<std::vector<FlowSample>> flows;
  flows.reserve(moving.size());
  for (const auto& t : moving) flows.push_back(velocities(t));

  const double total = static_cast<double>(model.transitions.total());
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const int count = model.transitions(i, j);
      if (count <= 0) continue;
      std::vector<FlowSample> samples;
      for (std::size_t n = 0; n < moving.size(); ++n) {
        const auto& s = segs[n].segments;
        const auto& flow = flows[n];
        if (s.size() == 1) {
          if (i == j && s[0].atom == i) {
            auto part = pair_samples(moving[n], flow, s[0], s[0]);
            samples.insert(samples.end(), part.begin(), part.end());
          }
          continue;
        }
        for (std::size_t q = 0; q + 1 < s.size(); ++q) {
          if (s[q].atom == i && s[q + 1].atom == j) {
            auto part = pair_samples(moving[n], flow, s[q], s[q + 1]);
            samples.insert(samples.end(), part.begin(), part.end());
          }
        }
      }
      if (samples.empty()) continue;
      samples = subsample(std::move(samples), config.max_pattern_samples);
      model.patterns.push_back(fit_pattern(i, j, samples, config.kernel,
                                           static_cast<double>(count) / total));
    }
  }
  return model;
}

PredictionSet predict(const TasnscModel& model, const CurbsideFrame& test_frame,
                      const Trajectory& observed) {
  if (model.patterns.empty()) {
    throw Error(ErrorCode::kNoPattern, "model has no motion patterns");
  }
  const PipelineConfig& cfg = model.config;
  Trajectory obs = observed;
  if (obs.size() >= 2 && std::abs(obs.dt() - cfg.dt) > 1e-9) {
    obs = resample(obs, cfg.dt);
  }
  if (obs.size() < 3) {
    throw Error(ErrorCode::kTooShortTrajectory,
                "observation '" + observed.id() +
                    "' must span at least two time steps");
  }
  if (cfg.mode == Mode::kTasnsc) obs = transform_trajectory(test_frame, obs);

  const auto samples = velocities(obs);
  std::vector<double> ll(model.patterns.size());
  for (std::size_t p = 0; p < model.patterns.size(); ++p) {
    ll[p] = pattern_log_likelihood(model.patterns[p], samples);
  }
  std::vector<std::size_t> order(ll.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&ll](std::size_t a, std::size_t b) { return ll[a] > ll[b]; });
  order.resize(std::min(order.size(), cfg.top_m));

  const double best = ll[order.front()];
  double norm = 0.0;
  for (std::size_t p : order) norm += std::exp(ll[p] - best);

  // Rollouts that leave a box three times the grid's size stop and hold.
  const Vec2 centre{0.5 * (model.grid.x_min + model.grid.x_max),
                    0.5 * (model.grid.y_min + model.grid.y_max)};
  const Vec2 half{1.5 * (model.grid.x_max - model.grid.x_min),
                  1.5 * (model.grid.y_max - model.grid.y_min)};
  auto inside = [&](const Vec2& p) {
    return ((p - centre).cwiseAbs().array() <= half.array()).all();
  };

  const std::size_t steps = steps_for(cfg.t_pred, cfg.dt);
  const Vec2 start = obs.back().pos;
  const double t0 = obs.back().t;

  PredictionSet out;
  for (std::size_t p : order) {
    const MotionPattern& pattern = model.patterns[p];
    Candidate c;
    c.pattern = p;
    c.log_likelihood = ll[p];
    c.likelihood = std::exp(ll[p] - best) / norm;

    std::vector<Vec2> path;
    path.reserve(steps);
    Vec2 pos = start;
    bool stopped = false;
    for (std::size_t s = 0; s < steps; ++s) {
      const Posterior px = pattern.gp_x.posterior(pos);
      const Posterior py = pattern.gp_y.posterior(pos);
      c.variance.emplace_back(px.variance, py.variance);
      if (!stopped) {
        const Vec2 next = pos + cfg.dt * Vec2{px.mean, py.mean};
        if (inside(next)) {
          pos = next;
        } else {
          stopped = true;
        }
      }
      path.push_back(pos);
    }
    Trajectory rollout = Trajectory::uniform(
        observed.id() + "#" + std::to_string(p), cfg.dt, t0 + cfg.dt, path);
    c.trajectory = cfg.mode == Mode::kTasnsc
                       ? inverse_transform_trajectory(test_frame, rollout)
                       : std::move(rollout);
    out.candidates.push_back(std::move(c));
  }
  return out;
}

}  // namespace tasnsc
