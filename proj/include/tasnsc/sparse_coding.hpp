#ifndef TASNSC_SPARSE_CODING_HPP_
#define TASNSC_SPARSE_CODING_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "tasnsc/geometry.hpp"
#include "tasnsc/trajectory.hpp"

namespace tasnsc {

/// Motion-direction channel of a grid cell.
enum Channel : int { kPosX = 0, kNegX = 1, kPosY = 2, kNegY = 3 };
inline constexpr int kChannelCount = 4;

/// Channel of the dominant velocity component; nullopt for a zero vector.
/// |vx| == |vy| resolves to the x channel.
std::optional<Channel> dominant_channel(const Vec2& v);

/// Axis-aligned discretization of the plane, four direction channels per
/// cell. Feature index = ((iy * nx) + ix) * 4 + channel.
struct GridSpec {
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;
  double cell = 1.0;

  int nx() const;
  int ny() const;
  Eigen::Index dim() const { return Eigen::Index{nx()} * ny() * kChannelCount; }
  /// Throws Error(kInvalidArgument) on cell <= 0 or empty bounds.
  void validate() const;
  bool contains(const Vec2& p) const;
  /// Feature index of `p` in `channel`; points outside are clipped to the
  /// nearest border cell and reported through `clipped`.
  Eigen::Index index(const Vec2& p, Channel channel,
                     bool* clipped = nullptr) const;

  /// Bounding box of `points` grown by `margin` and snapped outward to whole
  /// cells.
  static GridSpec covering(std::span<const Vec2> points, double cell,
                           double margin);

  bool operator==(const GridSpec&) const = default;
};

struct Feature {
  Eigen::VectorXd values;
  std::size_t clipped = 0;  // segment midpoints that fell outside the grid
};

/// Histogram of segment midpoints by cell and dominant direction, L2
/// normalized. Throws kEmptyTrajectory on no points, kDegenerateMotion when
/// no segment moves.
Feature featurize(const Trajectory& traj, const GridSpec& grid);

/// Per-point (cell, channel) index: point k uses segment (k, k+1), the last
/// point reuses the final segment. nullopt where that segment has no motion.
std::vector<std::optional<Eigen::Index>> point_features(const Trajectory& traj,
                                                        const GridSpec& grid);

/// Columns are atoms (motion primitives) in feature space.
struct Dictionary {
  Eigen::MatrixXd atoms;  // dim x K

  Eigen::Index size() const { return atoms.cols(); }
  Eigen::Index dim() const { return atoms.rows(); }
};

/// Nonnegative code matrix, K x n.
struct SparseCodes {
  Eigen::MatrixXd coefficients;
};

struct DictionaryParams {
  int atoms = 12;
  double lambda = 0.1;
  int iterations = 200;
  std::uint64_t seed = 0;
  /// Coordinate-descent passes over each code vector per sweep.
  int code_passes = 3;
};

/// State handed to a LearnObserver after each half step.
struct LearnStep {
  int iteration;
  bool after_atom_update;
  const Eigen::MatrixXd& atoms;
  const Eigen::MatrixXd& codes;
  double objective;
};
using LearnObserver = std::function<void(const LearnStep&)>;

struct LearnResult {
  Dictionary dictionary;
  SparseCodes codes;
  /// Objective after the initial coding step, then after every sweep.
  std::vector<double> objective_history;
};

/// 0.5 * ||X - D A||_F^2 + lambda * sum(A), A >= 0.
double coding_objective(const Eigen::MatrixXd& features,
                        const Eigen::MatrixXd& atoms,
                        const Eigen::MatrixXd& codes, double lambda);

/// Semi-nonnegative sparse coding by alternating minimization. `features` is
/// dim x n with one sample per column. Codes are updated by nonnegative
/// coordinate descent, atoms by block-coordinate least squares projected
/// onto the unit ball; unused atoms are reseeded from the worst-explained
/// sample. Deterministic for a given seed.
LearnResult learn_dictionary(const Eigen::MatrixXd& features,
                             const DictionaryParams& params,
                             const LearnObserver& observer = {});

/// Nonnegative sparse codes of `features` under fixed atoms.
Eigen::MatrixXd encode(const Eigen::MatrixXd& features,
                       const Eigen::MatrixXd& atoms, double lambda,
                       int passes);

struct Segment {
  int atom = 0;
  std::size_t begin = 0;  // first point
  std::size_t end = 0;    // one past the last point

  bool operator==(const Segment&) const = default;
};

struct Segmentation {
  std::vector<Segment> segments;
  /// True when no point had a positive score under any atom.
  bool low_confidence = false;

  std::vector<int> atom_sequence() const;
};

inline constexpr std::size_t kDefaultMinSegment = 3;

/// Labels each point with its best-scoring atom, then merges runs shorter
/// than `min_run` points into the stronger neighbour. Lowest index wins ties.
Segmentation segment(const Trajectory& traj, const Dictionary& dict,
                     const GridSpec& grid,
                     std::size_t min_run = kDefaultMinSegment);

class TransitionMatrix {
 public:
  TransitionMatrix() = default;
  explicit TransitionMatrix(int k) : counts_(Eigen::MatrixXi::Zero(k, k)) {}
  explicit TransitionMatrix(Eigen::MatrixXi counts)
      : counts_(std::move(counts)) {}

  int size() const { return static_cast<int>(counts_.rows()); }
  int operator()(int from, int to) const { return counts_(from, to); }
  int& at(int from, int to) { return counts_(from, to); }
  long total() const { return counts_.cast<long>().sum(); }
  const Eigen::MatrixXi& counts() const { return counts_; }

 private:
  Eigen::MatrixXi counts_;
};

/// T(i, j) counts trajectories with an adjacent (i -> j) segment pair; each
/// pair is counted once per trajectory. Single-segment trajectories count
/// toward T(i, i).
TransitionMatrix build_transitions(std::span<const Segmentation> segmentations,
                                   int k);

}  // namespace tasnsc

#endif  // TASNSC_SPARSE_CODING_HPP_
