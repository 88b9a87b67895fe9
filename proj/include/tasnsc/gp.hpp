#ifndef TASNSC_GP_HPP_
#define TASNSC_GP_HPP_

#include <span>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "tasnsc/geometry.hpp"
#include "tasnsc/trajectory.hpp"

namespace tasnsc {

/// Axis-separable squared exponential
///   k(p, q) = signal_sd^2 exp(-dx^2 / 2 lx^2 - dy^2 / 2 ly^2)
/// with i.i.d. Gaussian observation noise.
struct Kernel {
  double length_x = 2.0;   // m
  double length_y = 2.0;   // m
  double signal_sd = 1.0;  // m/s
  double noise_sd = 0.1;   // m/s

  void validate() const;
  double operator()(const Vec2& p, const Vec2& q) const;

  bool operator==(const Kernel&) const = default;
};

struct Posterior {
  double mean = 0.0;
  double variance = 0.0;      // clamped at 0
  double raw_variance = 0.0;  // before clamping
};

/// Exact GP regression of a scalar field over the plane.
class GPModel {
 public:
  GPModel() = default;

  /// Throws kInvalidArgument on empty/mismatched/non-finite data and
  /// kNotPositiveDefinite when the Cholesky factorization fails.
  static GPModel fit(std::vector<Vec2> inputs, Eigen::VectorXd targets,
                     const Kernel& kernel);

  Posterior posterior(const Vec2& query) const;
  /// Posterior mean only; O(n).
  double mean(const Vec2& query) const;

  const std::vector<Vec2>& inputs() const { return inputs_; }
  const Eigen::VectorXd& targets() const { return targets_; }
  const Kernel& kernel() const { return kernel_; }
  std::size_t size() const { return inputs_.size(); }

 private:
  Eigen::VectorXd cross_covariance(const Vec2& query) const;

  std::vector<Vec2> inputs_;
  Eigen::VectorXd targets_;
  Kernel kernel_;
  Eigen::LLT<Eigen::MatrixXd> chol_;
  Eigen::VectorXd weights_;  // (K + noise^2 I)^-1 y
};

/// A transition between two atoms modelled as a 2-D flow field.
struct MotionPattern {
  int from = 0;
  int to = 0;
  GPModel gp_x;
  GPModel gp_y;
  double prior_weight = 1.0;

  /// Posterior mean velocity at `p`.
  Vec2 velocity(const Vec2& p) const { return {gp_x.mean(p), gp_y.mean(p)}; }
};

/// Fits GP_x and GP_y on the given flow samples.
MotionPattern fit_pattern(int from, int to, std::span<const FlowSample> samples,
                          const Kernel& kernel, double prior_weight);

/// Sum over samples of log N(vx; mu_x, var_x + noise^2) + log N(vy; ...),
/// plus log(prior_weight).
double pattern_log_likelihood(const MotionPattern& pattern,
                              std::span<const FlowSample> observed);

}  // namespace tasnsc

#endif  // TASNSC_GP_HPP_
