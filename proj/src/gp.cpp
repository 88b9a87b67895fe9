#include "tasnsc/gp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tasnsc/error.hpp"

namespace tasnsc {

void Kernel::validate() const {
  const bool ok = length_x > 0.0 && length_y > 0.0 && signal_sd > 0.0 &&
                  noise_sd > 0.0 && std::isfinite(length_x) &&
                  std::isfinite(length_y) && std::isfinite(signal_sd) &&
                  std::isfinite(noise_sd);
  if (!ok) {
    throw Error(ErrorCode::kInvalidArgument,
                "kernel parameters must be finite and strictly positive");
  }
}

double Kernel::operator()(const Vec2& p, const Vec2& q) const {
  const double dx = (p.x() - q.x()) / length_x;
  const double dy = (p.y() - q.y()) / length_y;
  return signal_sd * signal_sd * std::exp(-0.5 * (dx * dx + dy * dy));
}

GPModel GPModel::fit(std::vector<Vec2> inputs, Eigen::VectorXd targets,
                     const Kernel& kernel) {
  kernel.validate();
  const auto n = static_cast<Eigen::Index>(inputs.size());
  if (n == 0) {
    throw Error(ErrorCode::kInvalidArgument, "GP needs at least one input");
  }
  if (targets.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "GP inputs and targets differ in length");
  }
  for (const auto& p : inputs) {
    if (!p.allFinite()) {
      throw Error(ErrorCode::kInvalidArgument, "GP input is not finite");
    }
  }
  if (!targets.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "GP target is not finite");
  }

  GPModel m;
  m.inputs_ = std::move(inputs);
  m.targets_ = std::move(targets);
  m.kernel_ = kernel;

  Eigen::MatrixXd cov(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      cov(i, j) = kernel(m.inputs_[i], m.inputs_[j]);
      cov(j, i) = cov(i, j);
    }
  }
  cov.diagonal().array() += kernel.noise_sd * kernel.noise_sd;

  m.chol_.compute(cov);
  bool spd = m.chol_.info() == Eigen::Success;
  if (spd) {
    const auto diag = m.chol_.matrixLLT().diagonal();
    spd = diag.allFinite() && diag.minCoeff() > 0.0;
  }
  if (!spd) {
    throw Error(ErrorCode::kNotPositiveDefinite,
                "GP covariance is not positive definite");
  }
  m.weights_ = m.chol_.solve(m.targets_);
  return m;
}

Eigen::VectorXd GPModel::cross_covariance(const Vec2& query) const {
  Eigen::VectorXd k(static_cast<Eigen::Index>(inputs_.size()));
  for (std::size_t i = 0; i < inputs_.size(); ++i) {
    k[static_cast<Eigen::Index>(i)] = kernel_(query, inputs_[i]);
  }
  return k;
}

double GPModel::mean(const Vec2& query) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < inputs_.size(); ++i) {
    acc += kernel_(query, inputs_[i]) * weights_[static_cast<Eigen::Index>(i)];
  }
  return acc;
}

Posterior GPModel::posterior(const Vec2& query) const {
  const Eigen::VectorXd k = cross_covariance(query);
  Posterior out;
  out.mean = k.dot(weights_);
  const Eigen::VectorXd v = chol_.matrixL().solve(k);
  const double prior = kernel_.signal_sd * kernel_.signal_sd;
  out.raw_variance = prior - v.squaredNorm();
  out.variance = std::max(0.0, out.raw_variance);
  return out;
}

MotionPattern fit_pattern(int from, int to, std::span<const FlowSample> samples,
                          const Kernel& kernel, double prior_weight) {
  if (!(prior_weight > 0.0 && prior_weight <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "pattern prior weight must lie in (0, 1]");
  }
  std::vector<Vec2> inputs;
  Eigen::VectorXd vx(static_cast<Eigen::Index>(samples.size()));
  Eigen::VectorXd vy(static_cast<Eigen::Index>(samples.size()));
  inputs.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    inputs.push_back(samples[i].pos);
    vx[static_cast<Eigen::Index>(i)] = samples[i].vel.x();
    vy[static_cast<Eigen::Index>(i)] = samples[i].vel.y();
  }
  MotionPattern p;
  p.from = from;
  p.to = to;
  p.gp_x = GPModel::fit(inputs, std::move(vx), kernel);
  p.gp_y = GPModel::fit(std::move(inputs), std::move(vy), kernel);
  p.prior_weight = prior_weight;
  return p;
}

namespace {

double log_normal(double x, double mean, double variance) {
  const double d = x - mean;
  return -0.5 * (std::log(2.0 * std::numbers::pi * variance) + d * d / variance);
}

}  // namespace

double pattern_log_likelihood(const MotionPattern& pattern,
                              std::span<const FlowSample> observed) {
  double ll = std::log(pattern.prior_weight);
  const double nx = pattern.gp_x.kernel().noise_sd;
  const double ny = pattern.gp_y.kernel().noise_sd;
  for (const auto& s : observed) {
    const Posterior px = pattern.gp_x.posterior(s.pos);
    const Posterior py = pattern.gp_y.posterior(s.pos);
    ll += log_normal(s.vel.x(), px.mean, px.variance + nx * nx);
    ll += log_normal(s.vel.y(), py.mean, py.variance + ny * ny);
  }
  return ll;
}

}  // namespace tasnsc
