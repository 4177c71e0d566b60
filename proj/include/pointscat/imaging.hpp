#pragma once
/** @file imaging.hpp
 * @brief Subspace imaging of point scatterers from far-field data: steering
 *        vectors, signal-subspace projectors (SVD-range and pseudo-inverse),
 *        the reciprocal-residual indicator, grid scanning, peak extraction and
 *        localization scoring.
 *
 * A sampling point z belongs to the scatterer set exactly when its steering
 * vector lies in the range of the clean far-field matrix; the indicator
 * 1/||P phi_z|| therefore blows up at the true positions. Finite arithmetic
 * caps the blow-up at 1/indicator_floor.
 */

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <limits>
#include <optional>
#include <utility>

#include "pointscat/forward.hpp"

namespace pointscat {

inline constexpr double indicator_floor = 1e-12;

/// @brief Test vector phi_z with entries e^{-ik theta_j . z}.
struct SteeringVector {
  CVector entries;
};

inline SteeringVector steering_vector(const Point3& z, const DirectionSet& dirs,
                                      const WaveConfig& w) {
  CVector phi(static_cast<Eigen::Index>(dirs.size()));
  for (Eigen::Index j = 0; j < phi.size(); ++j)
    phi(j) = std::polar(1.0, -w.k * dot(z, dirs.dirs[static_cast<std::size_t>(j)]));
  return SteeringVector{std::move(phi)};
}

/** @brief Signal-subspace rank selection policy.
 *
 * exact-rank:  keep singular values above rho_rel * sigma_1.
 * fixed-rank:  keep exactly r.
 * largest-gap: keep r at the maximal ratio sigma_i / sigma_{i+1}, i <= cap.
 */
struct RankPolicy {
  enum class Mode { exact_rank, fixed_rank, largest_gap };

  Mode mode = Mode::largest_gap;
  double rho_rel = 0.0;  // exact-rank threshold, relative to sigma_1
  int rank = 0;          // fixed-rank value
  int cap = 0;           // largest-gap candidate limit

  static RankPolicy exact(double rho) {
    if (!(rho > 0.0 && rho < 1.0))
      throw std::invalid_argument("RankPolicy: rho_rel must lie in (0, 1)");
    RankPolicy p;
    p.mode = Mode::exact_rank;
    p.rho_rel = rho;
    return p;
  }
  static RankPolicy fixed(int r) {
    if (r < 1) throw std::invalid_argument("RankPolicy: fixed rank must be >= 1");
    RankPolicy p;
    p.mode = Mode::fixed_rank;
    p.rank = r;
    return p;
  }
  static RankPolicy gap(int cap) {
    if (cap < 1) throw std::invalid_argument("RankPolicy: cap must be >= 1");
    RankPolicy p;
    p.mode = Mode::largest_gap;
    p.cap = cap;
    return p;
  }
};

/** @brief Number of signal singular values selected by a policy.
 *
 * For largest-gap, candidate gaps whose upper singular value has already
 * fallen to the numerical floor (1e-14 sigma_1) are skipped so that ratios
 * between round-off values (or exact zeros) cannot win; ties resolve to the
 * smallest index.
 */
inline int select_rank(const Eigen::VectorXd& sv, const RankPolicy& policy) {
  const auto n = static_cast<int>(sv.size());
  const double s1 = sv(0);
  switch (policy.mode) {
    case RankPolicy::Mode::exact_rank: {
      int r = 0;
      while (r < n && sv(r) > policy.rho_rel * s1) ++r;
      return std::max(r, 1);
    }
    case RankPolicy::Mode::fixed_rank: {
      if (policy.rank > n)
        throw std::invalid_argument("RankPolicy: fixed rank exceeds matrix dimension");
      return policy.rank;
    }
    case RankPolicy::Mode::largest_gap: {
      if (policy.cap > n)
        throw std::invalid_argument("RankPolicy: cap exceeds matrix dimension");
      const int limit = std::min(policy.cap, n - 1);
      int best = 1;
      double best_ratio = -1.0;
      for (int i = 1; i <= limit; ++i) {
        if (sv(i - 1) <= 1e-14 * s1) continue;
        const double denom = std::max(sv(i), s1 * 1e-300);
        const double ratio = sv(i - 1) / denom;
        if (ratio > best_ratio) {
          best_ratio = ratio;
          best = i;
        }
      }
      return best;
    }
  }
  return 1;
}

enum class ProjectorSource { svd_range, pseudo_inverse };

/** @brief Orthogonal projection onto the complement of the selected signal
 *         subspace, together with the rank decision that produced it.
 *
 * Idempotent and self-adjoint by construction; rank(I - matrix) = rank_used.
 */
struct Projector {
  CMatrix matrix;
  int rank_used = 0;
  RankPolicy policy;
  ProjectorSource source = ProjectorSource::svd_range;
};

namespace detail {

inline void validate_projector(const CMatrix& p) {
  const double scale = std::max(p.norm(), 1.0);
  if ((p * p - p).norm() > 1e-10 * scale)
    throw std::domain_error("projector not idempotent");
  if ((p - p.adjoint()).norm() > 1e-10 * scale)
    throw std::domain_error("projector not self-adjoint");
}

}  // namespace detail

/** @brief Projector onto the orthogonal complement of the leading range basis
 *         of F: P = I - sum_{i<=r} q_i q_i^* with q_i the left singular
 *         vectors selected by the policy.
 */
inline Projector svd_range_projector(const FarFieldMatrix& f, const RankPolicy& policy) {
  Eigen::JacobiSVD<CMatrix> svd(f.entries, Eigen::ComputeFullU);
  const Eigen::VectorXd sv = svd.singularValues();
  if (!(sv(0) > 0.0))
    throw std::domain_error("degenerate far-field data");
  const int r = select_rank(sv, policy);
  const auto& u = svd.matrixU();
  CMatrix p = CMatrix::Identity(u.rows(), u.rows()) - u.leftCols(r) * u.leftCols(r).adjoint();
  detail::validate_projector(p);
  return Projector{std::move(p), r, policy, ProjectorSource::svd_range};
}

/** @brief Same complement projector through the pseudo-inverse route:
 *         Q = I - F F_r^+, with F_r^+ the rank-truncated Moore-Penrose
 *         pseudo-inverse. Matches svd_range_projector for the same rank.
 */
inline Projector pseudo_inverse_projector(const FarFieldMatrix& f, const RankPolicy& policy) {
  Eigen::JacobiSVD<CMatrix> svd(f.entries, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  if (!(sv(0) > 0.0))
    throw std::domain_error("degenerate far-field data");
  const int r = select_rank(sv, policy);
  Eigen::VectorXd inv_sv = Eigen::VectorXd::Zero(sv.size());
  for (int i = 0; i < r; ++i) inv_sv(i) = 1.0 / sv(i);
  const CMatrix pinv =
      svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().adjoint();
  CMatrix q = CMatrix::Identity(f.entries.rows(), f.entries.rows()) - f.entries * pinv;
  detail::validate_projector(q);
  return Projector{std::move(q), r, policy, ProjectorSource::pseudo_inverse};
}

/// @brief Indicator I_z = 1 / max(||P phi_z||, indicator_floor); finite and
///        positive everywhere, large exactly near scatterers.
inline double indicator(const Point3& z, const Projector& proj, const DirectionSet& dirs,
                        const WaveConfig& w) {
  if (proj.matrix.rows() != static_cast<Eigen::Index>(dirs.size()))
    throw std::invalid_argument("indicator: projector and direction set dimensions differ");
  const auto phi = steering_vector(z, dirs, w);
  return 1.0 / std::max((proj.matrix * phi.entries).norm(), indicator_floor);
}

struct Region {
  double xmin = -10.0;
  double xmax = 10.0;
  double ymin = -10.0;
  double ymax = 10.0;
};

/** @brief Indicator values over a regular grid in the plane z = plane_z,
 *         row-major with y varying over rows and x over columns.
 */
struct Heatmap {
  Region region;
  double step = 0.1;
  double plane_z = 0.0;
  int nx = 0;
  int ny = 0;
  std::vector<double> values;

  double x_at(int ix) const { return region.xmin + step * ix; }
  double y_at(int iy) const { return region.ymin + step * iy; }
  double at(int iy, int ix) const { return values[static_cast<std::size_t>(iy) * nx + ix]; }
};

inline int grid_count(double lo, double hi, double step) {
  return static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

/// @brief Evaluate the indicator at every grid node. Deterministic.
inline Heatmap scan_grid(const Region& region, double step, double plane_z, const Projector& proj,
                         const DirectionSet& dirs, const WaveConfig& w) {
  if (!(step > 0.0)) throw std::invalid_argument("scan_grid: step must be positive");
  if (!(region.xmax >= region.xmin && region.ymax >= region.ymin))
    throw std::invalid_argument("scan_grid: empty region");
  Heatmap h;
  h.region = region;
  h.step = step;
  h.plane_z = plane_z;
  h.nx = grid_count(region.xmin, region.xmax, step);
  h.ny = grid_count(region.ymin, region.ymax, step);
  h.values.resize(static_cast<std::size_t>(h.nx) * h.ny);
  for (int iy = 0; iy < h.ny; ++iy)
    for (int ix = 0; ix < h.nx; ++ix)
      h.values[static_cast<std::size_t>(iy) * h.nx + ix] =
          indicator(Point3{h.x_at(ix), h.y_at(iy), plane_z}, proj, dirs, w);
  return h;
}

/** @brief Strict local maxima of the heatmap over the 8-neighborhood, kept if
 *         >= rel_threshold * global max, merged within 3 grid steps (larger
 *         value wins, ties by row-major order). If `expected` is given, the
 *         top `expected` by indicator value are returned.
 */
inline std::vector<Point3> extract_peaks(const Heatmap& h, std::optional<int> expected,
                                         double rel_threshold) {
  if (h.values.empty()) throw std::invalid_argument("extract_peaks: empty heatmap");
  if (!(rel_threshold > 0.0 && rel_threshold <= 1.0))
    throw std::invalid_argument("extract_peaks: rel_threshold must lie in (0, 1]");
  if (expected && *expected < 1)
    throw std::invalid_argument("extract_peaks: expected count must be >= 1");

  const double cutoff = rel_threshold * *std::max_element(h.values.begin(), h.values.end());

  struct Candidate {
    double value;
    int iy, ix;
  };
  std::vector<Candidate> cands;
  for (int iy = 0; iy < h.ny; ++iy) {
    for (int ix = 0; ix < h.nx; ++ix) {
      const double v = h.at(iy, ix);
      if (v < cutoff) continue;
      bool is_max = true;
      for (int dy = -1; dy <= 1 && is_max; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const int jy = iy + dy, jx = ix + dx;
          if (jy < 0 || jy >= h.ny || jx < 0 || jx >= h.nx) continue;
          if (h.at(jy, jx) >= v) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) cands.push_back({v, iy, ix});
    }
  }
  std::sort(cands.begin(), cands.end(), [&](const Candidate& a, const Candidate& b) {
    if (a.value != b.value) return a.value > b.value;
    return a.iy * h.nx + a.ix < b.iy * h.nx + b.ix;
  });

  std::vector<Candidate> kept;
  for (const auto& c : cands) {
    const bool clear = std::none_of(kept.begin(), kept.end(), [&](const Candidate& k) {
      const double dy = c.iy - k.iy, dx = c.ix - k.ix;
      return dx * dx + dy * dy <= 9.0;
    });
    if (clear) kept.push_back(c);
  }
  if (expected && static_cast<int>(kept.size()) > *expected) kept.resize(*expected);

  std::vector<Point3> peaks;
  peaks.reserve(kept.size());
  for (const auto& c : kept) peaks.emplace_back(h.x_at(c.ix), h.y_at(c.iy), h.plane_z);
  return peaks;
}

/** @brief Optimal one-to-one matching between estimates and ground truth.
 *
 * distances holds the per-pair Euclidean errors in estimate order;
 * truth_index maps each estimate to its matched truth (-1 when unmatched);
 * unmatched_truth lists truth indices left over when counts differ.
 */
struct MatchResult {
  std::vector<double> distances;
  std::vector<std::ptrdiff_t> truth_index;
  std::vector<std::size_t> unmatched_truth;
};

/** @brief Exhaustive minimum-total-distance assignment (supported up to 8
 *         points on the larger side).
 */
inline MatchResult localization_error(const std::vector<Point3>& estimates,
                                      const std::vector<Point3>& truth) {
  if (estimates.empty() || truth.empty())
    throw std::invalid_argument("localization_error: lists must be non-empty");
  if (std::max(estimates.size(), truth.size()) > 8)
    throw std::invalid_argument("localization_error: exhaustive assignment supports at most 8 points");

  const bool estimates_smaller = estimates.size() <= truth.size();
  const auto& small = estimates_smaller ? estimates : truth;
  const auto& large = estimates_smaller ? truth : estimates;

  std::vector<std::size_t> perm(large.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;

  std::vector<std::size_t> best_perm;
  double best_total = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < small.size(); ++i) total += distance(small[i], large[perm[i]]);
    if (total < best_total) {
      best_total = total;
      best_perm.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(small.size()));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  MatchResult result;
  result.truth_index.assign(estimates.size(), -1);
  std::vector<bool> truth_used(truth.size(), false);
  for (std::size_t i = 0; i < small.size(); ++i) {
    const std::size_t est = estimates_smaller ? i : best_perm[i];
    const std::size_t tru = estimates_smaller ? best_perm[i] : i;
    result.truth_index[est] = static_cast<std::ptrdiff_t>(tru);
    truth_used[tru] = true;
  }
  for (std::size_t e = 0; e < estimates.size(); ++e)
    if (result.truth_index[e] >= 0)
      result.distances.push_back(
          distance(estimates[e], truth[static_cast<std::size_t>(result.truth_index[e])]));
  for (std::size_t t = 0; t < truth.size(); ++t)
    if (!truth_used[t]) result.unmatched_truth.push_back(t);
  return result;
}

/// @brief Grid median (average of the two middle values for even counts).
inline double grid_median(const Heatmap& h) {
  std::vector<double> v = h.values;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double med = v[mid];
  if (v.size() % 2 == 0) {
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid) - 1,
                     v.begin() + static_cast<std::ptrdiff_t>(mid));
    med = 0.5 * (med + v[mid - 1]);
  }
  return med;
}

/// @brief Max indicator at the grid nodes nearest the true positions, divided
///        by the grid median; the quantitative stand-in for "clear peaks".
inline double localization_contrast(const Heatmap& h, const std::vector<Point3>& truth) {
  if (truth.empty()) throw std::invalid_argument("localization_contrast: no truth points");
  double best = 0.0;
  for (const auto& t : truth) {
    const int ix = std::clamp(static_cast<int>(std::lround((t.x - h.region.xmin) / h.step)), 0, h.nx - 1);
    const int iy = std::clamp(static_cast<int>(std::lround((t.y - h.region.ymin) / h.step)), 0, h.ny - 1);
    best = std::max(best, h.at(iy, ix));
  }
  return best / grid_median(h);
}

}  // namespace pointscat
