#include "tasnsc/sparse_coding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <utility>

#include "tasnsc/error.hpp"

namespace tasnsc {

std::optional<Channel> dominant_channel(const Vec2& v) {
  const double ax = std::abs(v.x());
  const double ay = std::abs(v.y());
  if (ax == 0.0 && ay == 0.0) return std::nullopt;
  if (ax >= ay) return v.x() > 0.0 ? kPosX : kNegX;
  return v.y() > 0.0 ? kPosY : kNegY;
}

int GridSpec::nx() const {
  return std::max(1, static_cast<int>(std::ceil((x_max - x_min) / cell - 1e-9)));
}

int GridSpec::ny() const {
  return std::max(1, static_cast<int>(std::ceil((y_max - y_min) / cell - 1e-9)));
}

void GridSpec::validate() const {
  if (!(cell > 0.0) || !std::isfinite(cell)) {
    throw Error(ErrorCode::kInvalidArgument, "grid cell size must be positive");
  }
  if (!(x_max > x_min) || !(y_max > y_min) || !std::isfinite(x_min) ||
      !std::isfinite(x_max) || !std::isfinite(y_min) || !std::isfinite(y_max)) {
    throw Error(ErrorCode::kInvalidArgument, "grid bounds are empty");
  }
}

bool GridSpec::contains(const Vec2& p) const {
  return p.x() >= x_min && p.x() <= x_max && p.y() >= y_min && p.y() <= y_max;
}

Eigen::Index GridSpec::index(const Vec2& p, Channel channel,
                             bool* clipped) const {
  const int cols = nx();
  const int rows = ny();
  int ix = static_cast<int>(std::floor((p.x() - x_min) / cell));
  int iy = static_cast<int>(std::floor((p.y() - y_min) / cell));
  // x_max / y_max sit on the closing edge of the last cell.
  if (p.x() == x_max) ix = cols - 1;
  if (p.y() == y_max) iy = rows - 1;
  const bool outside = ix < 0 || ix >= cols || iy < 0 || iy >= rows;
  if (clipped != nullptr) *clipped = outside;
  ix = std::clamp(ix, 0, cols - 1);
  iy = std::clamp(iy, 0, rows - 1);
  return (Eigen::Index{iy} * cols + ix) * kChannelCount + channel;
}

GridSpec GridSpec::covering(std::span<const Vec2> points, double cell,
                            double margin) {
  if (points.empty()) {
    throw Error(ErrorCode::kEmptySequence, "grid needs at least one point");
  }
  if (!(cell > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "grid cell size must be positive");
  }
  Vec2 lo = points.front();
  Vec2 hi = points.front();
  for (const auto& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  GridSpec g;
  g.cell = cell;
  g.x_min = std::floor((lo.x() - margin) / cell) * cell;
  g.y_min = std::floor((lo.y() - margin) / cell) * cell;
  g.x_max = std::ceil((hi.x() + margin) / cell) * cell;
  g.y_max = std::ceil((hi.y() + margin) / cell) * cell;
  if (g.x_max <= g.x_min) g.x_max = g.x_min + cell;
  if (g.y_max <= g.y_min) g.y_max = g.y_min + cell;
  return g;
}

Feature featurize(const Trajectory& traj, const GridSpec& grid) {
  grid.validate();
  if (traj.empty()) {
    throw Error(ErrorCode::kEmptyTrajectory,
                "cannot featurize empty trajectory '" + traj.id() + "'");
  }
  Feature f;
  f.values = Eigen::VectorXd::Zero(grid.dim());
  for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
    const Vec2 step = traj[k + 1].pos - traj[k].pos;
    const auto channel = dominant_channel(step);
    if (!channel) continue;
    bool clipped = false;
    const Vec2 mid = 0.5 * (traj[k].pos + traj[k + 1].pos);
    f.values[grid.index(mid, *channel, &clipped)] += 1.0;
    if (clipped) ++f.clipped;
  }
  const double norm = f.values.norm();
  if (norm == 0.0) {
    throw Error(ErrorCode::kDegenerateMotion,
                "trajectory '" + traj.id() + "' never moves");
  }
  f.values /= norm;
  return f;
}

std::vector<std::optional<Eigen::Index>> point_features(const Trajectory& traj,
                                                        const GridSpec& grid) {
  std::vector<std::optional<Eigen::Index>> out(traj.size());
  if (traj.size() < 2) return out;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const std::size_t a = std::min(k, traj.size() - 2);
    const Vec2 step = traj[a + 1].pos - traj[a].pos;
    const auto channel = dominant_channel(step);
    if (!channel) continue;
    out[k] = grid.index(0.5 * (traj[a].pos + traj[a + 1].pos), *channel);
  }
  return out;
}

double coding_objective(const Eigen::MatrixXd& features,
                        const Eigen::MatrixXd& atoms,
                        const Eigen::MatrixXd& codes, double lambda) {
  return 0.5 * (features - atoms * codes).squaredNorm() + lambda * codes.sum();
}

namespace {

// One coordinate-descent pass per column over the nonnegative lasso
//   min_a 0.5 ||x - D a||^2 + lambda * sum(a), a >= 0.
// Each coordinate step is an exact minimization, so the objective cannot
// increase.
void update_codes(const Eigen::MatrixXd& gram, const Eigen::MatrixXd& corr,
                  double lambda, int passes, Eigen::MatrixXd& codes) {
  const Eigen::Index k = gram.rows();
  for (Eigen::Index j = 0; j < codes.cols(); ++j) {
    auto a = codes.col(j);
    for (int pass = 0; pass < passes; ++pass) {
      for (Eigen::Index i = 0; i < k; ++i) {
        const double gii = gram(i, i);
        if (gii <= 0.0) {
          a[i] = 0.0;
          continue;
        }
        const double rho = corr(i, j) - gram.row(i).dot(a) + gii * a[i];
        a[i] = std::max(0.0, (rho - lambda) / gii);
      }
    }
  }
}

Eigen::MatrixXd initial_atoms(const Eigen::MatrixXd& x, int k,
                              std::mt19937_64& rng) {
  const Eigen::Index dim = x.rows();
  const Eigen::Index n = x.cols();
  Eigen::MatrixXd atoms(dim, k);

  std::vector<Eigen::Index> usable;
  Eigen::VectorXd norms = x.colwise().norm();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (norms[j] > 0.0) usable.push_back(j);
  }

  // k-means++ style seeding on angular distance between samples.
  std::vector<double> dist(usable.size(), std::numeric_limits<double>::max());
  int filled = 0;
  while (filled < k && !usable.empty()) {
    std::size_t pick = 0;
    if (filled == 0) {
      pick = std::uniform_int_distribution<std::size_t>(0, usable.size() - 1)(rng);
    } else {
      std::vector<double> w(dist.begin(), dist.end());
      for (double& v : w) v = v * v;
      double total = 0.0;
      for (double v : w) total += v;
      if (total <= 1e-15) break;
      pick = std::discrete_distribution<std::size_t>(w.begin(), w.end())(rng);
    }
    const Eigen::Index col = usable[pick];
    atoms.col(filled) = x.col(col) / norms[col];
    for (std::size_t u = 0; u < usable.size(); ++u) {
      const Eigen::Index c = usable[u];
      const double cosine = atoms.col(filled).dot(x.col(c)) / norms[c];
      dist[u] = std::min(dist[u], std::max(0.0, 1.0 - std::abs(cosine)));
    }
    ++filled;
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (; filled < k; ++filled) {
    Eigen::VectorXd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v[i] = std::abs(gauss(rng));
    atoms.col(filled) = v / v.norm();
  }
  return atoms;
}

}  // namespace

Eigen::MatrixXd encode(const Eigen::MatrixXd& features,
                       const Eigen::MatrixXd& atoms, double lambda,
                       int passes) {
  if (features.rows() != atoms.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "feature and atom dimensions differ");
  }
  Eigen::MatrixXd codes = Eigen::MatrixXd::Zero(atoms.cols(), features.cols());
  const Eigen::MatrixXd gram = atoms.transpose() * atoms;
  const Eigen::MatrixXd corr = atoms.transpose() * features;
  update_codes(gram, corr, lambda, std::max(1, passes), codes);
  return codes;
}

LearnResult learn_dictionary(const Eigen::MatrixXd& features,
                             const DictionaryParams& params,
                             const LearnObserver& observer) {
  if (params.atoms < 1) {
    throw Error(ErrorCode::kInvalidArgument, "dictionary needs K >= 1 atoms");
  }
  if (!(params.lambda >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda must be non-negative");
  }
  if (features.cols() == 0 || features.rows() == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "no features to learn from");
  }
  if (!features.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "features must be finite");
  }

  const Eigen::MatrixXd& x = features;
  const int k = params.atoms;
  const int passes = std::max(1, params.code_passes);
  std::mt19937_64 rng(params.seed);

  Eigen::MatrixXd atoms = initial_atoms(x, k, rng);
  Eigen::MatrixXd codes = Eigen::MatrixXd::Zero(k, x.cols());

  LearnResult result;
  auto notify = [&](int it, bool atoms_step, double obj) {
    if (observer) observer(LearnStep{it, atoms_step, atoms, codes, obj});
  };

  // Initial coding against the seeded atoms.
  {
    const Eigen::MatrixXd gram = atoms.transpose() * atoms;
    const Eigen::MatrixXd corr = atoms.transpose() * x;
    update_codes(gram, corr, params.lambda, passes, codes);
    const double obj = coding_objective(x, atoms, codes, params.lambda);
    result.objective_history.push_back(obj);
    notify(0, false, obj);
  }

  for (int it = 1; it <= params.iterations; ++it) {
    // Atom step: exact minimization over one atom at a time, projected onto
    // the unit ball.
    const Eigen::MatrixXd b = x * codes.transpose();
    const Eigen::MatrixXd c = codes * codes.transpose();
    std::vector<Eigen::Index> dead;
    for (Eigen::Index j = 0; j < k; ++j) {
      const double cjj = c(j, j);
      if (cjj <= 0.0) {
        dead.push_back(j);
        continue;
      }
      Eigen::VectorXd u = atoms.col(j) + (b.col(j) - atoms * c.col(j)) / cjj;
      const double norm = u.norm();
      if (norm < 1e-12) continue;
      atoms.col(j) = u / std::max(1.0, norm);
    }
    // An atom with an all-zero code row does not enter the objective, so
    // swapping it for the worst-explained sample leaves the value unchanged.
    if (!dead.empty()) {
      Eigen::VectorXd residual = (x - atoms * codes).colwise().squaredNorm();
      for (Eigen::Index j : dead) {
        Eigen::Index worst = 0;
        const double top = residual.maxCoeff(&worst);
        if (top <= 0.0) break;
        atoms.col(j) = x.col(worst) / x.col(worst).norm();
        residual[worst] = -1.0;
      }
    }
    notify(it, true, coding_objective(x, atoms, codes, params.lambda));

    const Eigen::MatrixXd gram = atoms.transpose() * atoms;
    const Eigen::MatrixXd corr = atoms.transpose() * x;
    update_codes(gram, corr, params.lambda, passes, codes);
    const double obj = coding_objective(x, atoms, codes, params.lambda);
    result.objective_history.push_back(obj);
    notify(it, false, obj);
  }

  result.dictionary.atoms = std::move(atoms);
  result.codes.coefficients = std::move(codes);
  return result;
}

std::vector<int> Segmentation::atom_sequence() const {
  std::vector<int> out;
  out.reserve(segments.size());
  for (const auto& s : segments) out.push_back(s.atom);
  return out;
}

Segmentation segment(const Trajectory& traj, const Dictionary& dict,
                     const GridSpec& grid, std::size_t min_run) {
  if (traj.empty()) {
    throw Error(ErrorCode::kEmptyTrajectory,
                "cannot segment empty trajectory '" + traj.id() + "'");
  }
  if (dict.size() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "dictionary has no atoms");
  }
  if (dict.dim() != grid.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "dictionary dimension does not match grid");
  }
  const std::size_t n = traj.size();
  const auto feats = point_features(traj, grid);
  const auto& atoms = dict.atoms;

  std::vector<int> label(n, -1);
  bool any = false;
  for (std::size_t p = 0; p < n; ++p) {
    if (!feats[p]) continue;
    Eigen::Index best = 0;
    const double top = atoms.row(*feats[p]).maxCoeff(&best);  // first max
    if (top > 0.0) {
      label[p] = static_cast<int>(best);
      any = true;
    }
  }

  Segmentation out;
  if (!any) {
    out.segments.push_back({0, 0, n});
    out.low_confidence = true;
    return out;
  }
  // Unscored points inherit the preceding label (leading ones the first).
  const int first = *std::find_if(label.begin(), label.end(),
                                  [](int l) { return l >= 0; });
  int carry = first;
  for (auto& l : label) {
    if (l < 0) l = carry;
    carry = l;
  }

  auto& runs = out.segments;
  for (std::size_t p = 0; p < n; ++p) {
    if (runs.empty() || runs.back().atom != label[p]) {
      runs.push_back({label[p], p, p + 1});
    } else {
      runs.back().end = p + 1;
    }
  }

  auto support = [&](const Segment& run, int atom) {
    double s = 0.0;
    for (std::size_t p = run.begin; p < run.end; ++p) {
      if (feats[p]) s += atoms(*feats[p], atom);
    }
    return s;
  };

  while (runs.size() > 1) {
    std::size_t shortest = runs.size();
    for (std::size_t r = 0; r < runs.size(); ++r) {
      const std::size_t len = runs[r].end - runs[r].begin;
      if (len < min_run &&
          (shortest == runs.size() ||
           len < runs[shortest].end - runs[shortest].begin)) {
        shortest = r;
      }
    }
    if (shortest == runs.size()) break;

    const Segment run = runs[shortest];
    int target;
    if (shortest == 0) {
      target = runs[1].atom;
    } else if (shortest + 1 == runs.size()) {
      target = runs[shortest - 1].atom;
    } else {
      const int left = runs[shortest - 1].atom;
      const int right = runs[shortest + 1].atom;
      const double sl = support(run, left);
      const double sr = support(run, right);
      target = sl > sr ? left : sr > sl ? right : std::min(left, right);
    }
    runs[shortest].atom = target;

    std::vector<Segment> merged;
    for (const auto& r : runs) {
      if (!merged.empty() && merged.back().atom == r.atom) {
        merged.back().end = r.end;
      } else {
        merged.push_back(r);
      }
    }
    runs = std::move(merged);
  }
  return out;
}

TransitionMatrix build_transitions(std::span<const Segmentation> segmentations,
                                   int k) {
  if (k < 1) {
    throw Error(ErrorCode::kInvalidArgument, "transition matrix needs K >= 1");
  }
  TransitionMatrix t(k);
  for (const auto& seg : segmentations) {
    const auto seq = seg.atom_sequence();
    for (int a : seq) {
      if (a < 0 || a >= k) {
        std::ostringstream msg;
        msg << "atom index " << a << " outside [0, " << k << ")";
        throw Error(ErrorCode::kInvalidArgument, msg.str());
      }
    }
    if (seq.size() == 1) {
      ++t.at(seq[0], seq[0]);
      continue;
    }
    std::set<std::pair<int, int>> seen;
    for (std::size_t s = 0; s + 1 < seq.size(); ++s) {
      if (seen.insert({seq[s], seq[s + 1]}).second) {
        ++t.at(seq[s], seq[s + 1]);
      }
    }
  }
  return t;
}

}  // namespace tasnsc
