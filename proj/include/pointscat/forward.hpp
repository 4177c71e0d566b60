#pragma once
/** @file forward.hpp
 * @brief Forward multiple-scattering solver for point scatterers.
 *
 * Two independent evaluation routes are provided on purpose:
 *  - the closed-form route through the interaction matrix P(k, alpha),
 *  - the self-consistent Foldy-Lax system for the exciting fields.
 * They agree to solver precision whenever the wavenumber is admissible, which
 * the test suite exploits as a cross-check.
 *
 * Wavenumbers for which det P(k, alpha) = 0 (the excluded set S_alpha) make
 * the closed form meaningless; admissibility is measured by the reciprocal
 * condition number of P rather than the determinant, which is scale-dependent.
 */

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <optional>
#include <utility>

#include "pointscat/wavecore.hpp"

namespace pointscat {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// rcond below this counts as "in or near S_alpha".
inline constexpr double admissibility_rcond_floor = 1e-12;

/** @brief Interaction matrix P(k, alpha): off-diagonal entries are the kernel
 *         couplings Phi_k(y_m, y_j), diagonal entries ik/(4 pi) - alpha_j.
 */
struct InteractionMatrix {
  CMatrix entries;
  double k;
  ScattererSet scatterers;
};

/// @brief Scattering amplitude matrix A = -P^{-1}(k, alpha).
struct ScatteringAmplitudeMatrix {
  CMatrix entries;
};

/// @brief Steering matrix H with H[m][l] = e^{ik y_m . theta_l} (M x N).
struct SteeringMatrixH {
  CMatrix entries;
};

/// @brief Provenance carried along with far-field data.
struct FarFieldMeta {
  bool noisy = false;
  double delta = 0.0;
  std::optional<std::uint64_t> seed;
  std::string generator;
};

/// @brief N x N far-field response matrix F[j][l] = u_inf(theta_j, theta_l),
///        rows indexed by observation direction, columns by incidence.
struct FarFieldMatrix {
  CMatrix entries;
  FarFieldMeta meta;
};

struct AdmissibilityReport {
  bool ok;
  double rcond;
};

inline InteractionMatrix build_interaction_matrix(const ScattererSet& s, const WaveConfig& w) {
  const auto m_count = static_cast<Eigen::Index>(s.size());
  CMatrix p(m_count, m_count);
  const complexd diag_base{0.0, w.k / four_pi};
  for (Eigen::Index m = 0; m < m_count; ++m) {
    for (Eigen::Index j = 0; j < m_count; ++j) {
      p(m, j) = (m == j) ? diag_base - s.alphas[static_cast<std::size_t>(j)]
                         : fundamental_solution(s.points[static_cast<std::size_t>(m)],
                                                s.points[static_cast<std::size_t>(j)], w.k);
    }
  }
  return InteractionMatrix{std::move(p), w.k, s};
}

/// @brief Reciprocal 2-norm condition number check of P. ok iff rcond > 1e-12.
inline AdmissibilityReport check_admissible(const InteractionMatrix& p) {
  Eigen::JacobiSVD<CMatrix> svd(p.entries);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  const double rcond = (smax > 0.0) ? smin / smax : 0.0;
  return AdmissibilityReport{rcond > admissibility_rcond_floor, rcond};
}

/** @brief A = -P^{-1}. Explicit inverse for small M, LU solves against the
 *         identity otherwise; either way the residual ||P(-A) - I||_F must
 *         stay below 1e-10 ||P||_F.
 */
inline ScatteringAmplitudeMatrix amplitude_matrix(const InteractionMatrix& p) {
  if (!check_admissible(p).ok)
    throw std::domain_error("wavenumber in or near S_alpha");
  const Eigen::Index m = p.entries.rows();
  CMatrix a;
  if (m <= 8) {
    a = -p.entries.inverse();
  } else {
    Eigen::PartialPivLU<CMatrix> lu(p.entries);
    a = -lu.solve(CMatrix::Identity(m, m));
  }
  const double resid = (p.entries * (-a) - CMatrix::Identity(m, m)).norm();
  if (resid > 1e-10 * p.entries.norm())
    throw std::domain_error("wavenumber in or near S_alpha");
  return ScatteringAmplitudeMatrix{std::move(a)};
}

/// @brief Response coefficient of a single point scatterer,
///        g(k) = 1 / (alpha - ik/(4 pi)).
inline complexd scattering_strength(complexd alpha, double k) {
  return 1.0 / (alpha - complexd{0.0, k / four_pi});
}

namespace detail {

inline CVector incident_phases(const ScattererSet& s, const Direction& d, double k) {
  CVector e(static_cast<Eigen::Index>(s.size()));
  for (Eigen::Index j = 0; j < e.size(); ++j)
    e(j) = plane_wave(s.points[static_cast<std::size_t>(j)], d, k);
  return e;
}

inline void require_off_sources(const Point3& x, const ScattererSet& s) {
  for (const auto& y : s.points)
    if (distance(x, y) <= 0.0)
      throw std::domain_error("evaluation at source point");
}

}  // namespace detail

/** @brief Scattered field u_s(x, d) = -sum_{m,j} [P^{-1}]_{m,j} e^{ik y_j.d}
 *         Phi_k(x, y_m) of the closed-form solution.
 */
inline complexd scattered_field(const Point3& x, const Direction& d, const ScattererSet& s,
                                const WaveConfig& w) {
  detail::require_off_sources(x, s);
  const auto p = build_interaction_matrix(s, w);
  if (!check_admissible(p).ok)
    throw std::domain_error("wavenumber in or near S_alpha");
  const CVector coeffs = Eigen::PartialPivLU<CMatrix>(p.entries).solve(detail::incident_phases(s, d, w.k));
  complexd acc{0.0, 0.0};
  for (Eigen::Index m = 0; m < coeffs.size(); ++m)
    acc += coeffs(m) * fundamental_solution(x, s.points[static_cast<std::size_t>(m)], w.k);
  return -acc;
}

/// @brief Total field u = u_i + u_s.
inline complexd total_field(const Point3& x, const Direction& d, const ScattererSet& s,
                            const WaveConfig& w) {
  return plane_wave(x, d, w.k) + scattered_field(x, d, s, w);
}

/** @brief Exciting-field coefficients C of the Foldy-Lax system
 *         J C = (e^{ik y_j.d}) with
 *         J[j][i] = delta_ji - (1 - delta_ji) g_i(k) Phi_k(y_j, y_i).
 *
 * C_j is the external field acting on scatterer j; for well-separated
 * scatterers it approaches the bare incident phase.
 */
inline CVector foldy_lax_coefficients(const Direction& d, const ScattererSet& s,
                                      const WaveConfig& w) {
  const auto m_count = static_cast<Eigen::Index>(s.size());
  CVector g(m_count);
  for (Eigen::Index j = 0; j < m_count; ++j) {
    const complexd denom = s.alphas[static_cast<std::size_t>(j)] - complexd{0.0, w.k / four_pi};
    if (std::abs(denom) <= 1e-12)
      throw std::domain_error("scattering strength pole: alpha equals ik/4pi");
    g(j) = 1.0 / denom;
  }
  CMatrix jmat = CMatrix::Identity(m_count, m_count);
  for (Eigen::Index j = 0; j < m_count; ++j)
    for (Eigen::Index i = 0; i < m_count; ++i)
      if (i != j)
        jmat(j, i) = -g(i) * fundamental_solution(s.points[static_cast<std::size_t>(j)],
                                                  s.points[static_cast<std::size_t>(i)], w.k);
  {
    Eigen::JacobiSVD<CMatrix> svd(jmat);
    const auto& sv = svd.singularValues();
    if (!(sv(0) > 0.0) || sv(sv.size() - 1) / sv(0) <= admissibility_rcond_floor)
      throw std::domain_error("Foldy-Lax system singular");
  }
  return Eigen::PartialPivLU<CMatrix>(jmat).solve(detail::incident_phases(s, d, w.k));
}

/** @brief Total field through the Foldy-Lax route:
 *         u = e^{ik x.d} + sum_j g_j(k) C_j Phi_k(x, y_j).
 *
 * Independent of the closed-form route; used as its oracle.
 */
inline complexd foldy_lax_total_field(const Point3& x, const Direction& d, const ScattererSet& s,
                                      const WaveConfig& w) {
  detail::require_off_sources(x, s);
  const CVector c = foldy_lax_coefficients(d, s, w);
  complexd acc = plane_wave(x, d, w.k);
  for (Eigen::Index j = 0; j < c.size(); ++j)
    acc += scattering_strength(s.alphas[static_cast<std::size_t>(j)], w.k) * c(j) *
           fundamental_solution(x, s.points[static_cast<std::size_t>(j)], w.k);
  return acc;
}

/// @brief Far-field pattern u_inf(obs, d) = -sum_{m,j} [P^{-1}]_{m,j}
///        e^{ik (y_j.d - obs.y_m)}.
inline complexd far_field_pattern(const Direction& obs, const Direction& d, const ScattererSet& s,
                                  const WaveConfig& w) {
  const auto p = build_interaction_matrix(s, w);
  if (!check_admissible(p).ok)
    throw std::domain_error("wavenumber in or near S_alpha");
  const CVector coeffs = Eigen::PartialPivLU<CMatrix>(p.entries).solve(detail::incident_phases(s, d, w.k));
  complexd acc{0.0, 0.0};
  for (Eigen::Index m = 0; m < coeffs.size(); ++m)
    acc += coeffs(m) * std::polar(1.0, -w.k * dot(s.points[static_cast<std::size_t>(m)], obs));
  return -acc;
}

inline SteeringMatrixH steering_matrix(const ScattererSet& s, const DirectionSet& dirs,
                                       const WaveConfig& w) {
  CMatrix h(static_cast<Eigen::Index>(s.size()), static_cast<Eigen::Index>(dirs.size()));
  for (Eigen::Index m = 0; m < h.rows(); ++m)
    for (Eigen::Index l = 0; l < h.cols(); ++l)
      h(m, l) = plane_wave(s.points[static_cast<std::size_t>(m)],
                           dirs.dirs[static_cast<std::size_t>(l)], w.k);
  return SteeringMatrixH{std::move(h)};
}

/** @brief Clean far-field response matrix over a shared incidence/observation
 *         set: F[j][l] = u_inf(theta_j, theta_l).
 *
 * Entries are evaluated by the explicit double sum (not the H* A H product) so
 * the factorization identity can serve as an independent consistency check.
 */
inline FarFieldMatrix synthesize_far_field(const DirectionSet& dirs, const ScattererSet& s,
                                           const WaveConfig& w) {
  const auto p = build_interaction_matrix(s, w);
  if (!check_admissible(p).ok)
    throw std::domain_error("wavenumber in or near S_alpha");
  const auto a = amplitude_matrix(p);
  const auto n = static_cast<Eigen::Index>(dirs.size());
  const auto m_count = static_cast<Eigen::Index>(s.size());

  // Phase tables: in(q, l) = e^{ik y_q.theta_l}, the steering phases.
  CMatrix in_phase(m_count, n);
  for (Eigen::Index q = 0; q < m_count; ++q)
    for (Eigen::Index l = 0; l < n; ++l)
      in_phase(q, l) = plane_wave(s.points[static_cast<std::size_t>(q)],
                                  dirs.dirs[static_cast<std::size_t>(l)], w.k);

  CMatrix f(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index l = 0; l < n; ++l) {
      complexd acc{0.0, 0.0};
      for (Eigen::Index m = 0; m < m_count; ++m)
        for (Eigen::Index q = 0; q < m_count; ++q)
          acc += a.entries(m, q) * in_phase(q, l) * std::conj(in_phase(m, j));
      f(j, l) = acc;
    }
  }
  return FarFieldMatrix{std::move(f), FarFieldMeta{}};
}

/** @brief Far-field matrix of the single-scattering (no multiple scattering)
 *         model with per-scatterer strengths tau_m:
 *         F[j][l] = sum_m tau_m e^{ik(y_m.theta_l - theta_j.y_m)}.
 *
 * Defaults tau_m = g_m(k), the single-scatterer reduction of the full model.
 */
inline FarFieldMatrix born_far_field(const DirectionSet& dirs, const ScattererSet& s,
                                     const WaveConfig& w,
                                     const std::optional<std::vector<complexd>>& strengths = {}) {
  std::vector<complexd> tau;
  if (strengths) {
    if (strengths->size() != s.size())
      throw std::invalid_argument("born_far_field: one strength per scatterer required");
    tau = *strengths;
  } else {
    tau.reserve(s.size());
    for (const auto& a : s.alphas) tau.push_back(scattering_strength(a, w.k));
  }
  const auto n = static_cast<Eigen::Index>(dirs.size());
  CMatrix f = CMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index l = 0; l < n; ++l)
      for (std::size_t m = 0; m < s.size(); ++m)
        f(j, l) += tau[m] * std::polar(1.0, w.k * (dot(s.points[m], dirs.dirs[static_cast<std::size_t>(l)]) -
                                                   dot(s.points[m], dirs.dirs[static_cast<std::size_t>(j)])));
  return FarFieldMatrix{std::move(f), FarFieldMeta{}};
}

}  // namespace pointscat
