#pragma once
/** @file wavecore.hpp
 * @brief Geometric and wave primitives: points, unit directions, wavenumber,
 *        scatterer collections, the Helmholtz fundamental solution and plane waves.
 *
 * Lengths are dimensionless; the wavelength 2*pi/k sets the scale.
 */

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace pointscat {

using complexd = std::complex<double>;

inline constexpr double four_pi = 4.0 * std::numbers::pi;

/// @brief Point in R^3.
struct Point3 {
  double x{0.0};
  double y{0.0};
  double z{0.0};

  Point3() = default;
  Point3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {
    if (!(std::isfinite(x) && std::isfinite(y) && std::isfinite(z)))
      throw std::invalid_argument("Point3: coordinates must be finite");
  }
};

inline double distance(const Point3& a, const Point3& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

/// @brief Unit vector in R^3. Constructors normalize their input.
struct Direction {
  double ux{1.0};
  double uy{0.0};
  double uz{0.0};

  Direction() = default;
  Direction(double x, double y, double z) {
    if (!(std::isfinite(x) && std::isfinite(y) && std::isfinite(z)))
      throw std::invalid_argument("Direction: components must be finite");
    const double n = std::sqrt(x * x + y * y + z * z);
    if (n < 1e-300)
      throw std::invalid_argument("Direction: zero vector has no direction");
    ux = x / n;
    uy = y / n;
    uz = z / n;
  }
};

inline double dot(const Point3& p, const Direction& d) {
  return p.x * d.ux + p.y * d.uy + p.z * d.uz;
}

inline double dot(const Direction& a, const Direction& b) {
  return a.ux * b.ux + a.uy * b.uy + a.uz * b.uz;
}

/// @brief Wave configuration: the wavenumber k > 0.
struct WaveConfig {
  double k;

  explicit WaveConfig(double wavenumber) : k(wavenumber) {
    if (!(std::isfinite(k) && k > 0.0))
      throw std::invalid_argument("WaveConfig: wavenumber must be positive and finite");
  }
};

/** @brief A collection of point scatterers: positions y_m and complex
 *         scattering coefficients alpha_m.
 *
 * Invariants enforced at construction: equal list lengths, M >= 1, pairwise
 * distinct positions, and Im(alpha_j) >= 0 for every j (the well-posedness
 * hypothesis of the forward model).
 */
struct ScattererSet {
  std::vector<Point3> points;
  std::vector<complexd> alphas;

  ScattererSet(std::vector<Point3> pts, std::vector<complexd> coeffs)
      : points(std::move(pts)), alphas(std::move(coeffs)) {
    if (points.empty())
      throw std::invalid_argument("ScattererSet: at least one scatterer required");
    if (points.size() != alphas.size())
      throw std::invalid_argument("ScattererSet: positions and coefficients differ in length");
    for (std::size_t m = 0; m < points.size(); ++m) {
      for (std::size_t j = m + 1; j < points.size(); ++j) {
        if (distance(points[m], points[j]) <= 0.0)
          throw std::invalid_argument("ScattererSet: coincident scatterer positions");
      }
    }
    for (const auto& a : alphas) {
      if (!(std::isfinite(a.real()) && std::isfinite(a.imag())))
        throw std::invalid_argument("ScattererSet: non-finite scattering coefficient");
      if (a.imag() < 0.0)
        throw std::invalid_argument("ScattererSet: Im(alpha) must be non-negative");
    }
  }

  std::size_t size() const { return points.size(); }
};

/// @brief A finite set of pairwise distinct unit directions, used both for
///        incidence and observation.
struct DirectionSet {
  std::vector<Direction> dirs;

  explicit DirectionSet(std::vector<Direction> directions) : dirs(std::move(directions)) {
    if (dirs.empty())
      throw std::invalid_argument("DirectionSet: at least one direction required");
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      for (std::size_t j = i + 1; j < dirs.size(); ++j) {
        const double dx = dirs[i].ux - dirs[j].ux;
        const double dy = dirs[i].uy - dirs[j].uy;
        const double dz = dirs[i].uz - dirs[j].uz;
        if (std::sqrt(dx * dx + dy * dy + dz * dz) <= 1e-12)
          throw std::invalid_argument("DirectionSet: directions must be pairwise distinct");
      }
    }
  }

  std::size_t size() const { return dirs.size(); }
};

/** @brief Outgoing fundamental solution of the Helmholtz equation,
 *         e^{ik|x-y|} / (4 pi |x-y|).
 *
 * Symmetric in (x, y); modulus 1/(4 pi |x-y|). Throws on coincident points.
 */
inline complexd fundamental_solution(const Point3& x, const Point3& y, double k) {
  if (!(std::isfinite(k) && k >= 0.0))
    throw std::invalid_argument("fundamental_solution: wavenumber must be finite and >= 0");
  const double r = distance(x, y);
  if (r <= 0.0)
    throw std::domain_error("singular kernel");
  return std::polar(1.0 / (four_pi * r), k * r);
}

/// @brief Plane wave e^{ik x.d} with unit direction of propagation d.
inline complexd plane_wave(const Point3& x, const Direction& d, double k) {
  return std::polar(1.0, k * dot(x, d));
}

/** @brief n directions uniformly spaced on the unit circle in the z = 0 plane:
 *         theta_j = (cos(2 pi j / n), sin(2 pi j / n), 0), j = 0..n-1.
 *
 * Deterministic and reproducible bit-for-bit.
 */
inline DirectionSet uniform_circle_directions(std::size_t n) {
  if (n == 0)
    throw std::invalid_argument("uniform_circle_directions: need at least one direction");
  std::vector<Direction> dirs;
  dirs.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    dirs.emplace_back(std::cos(t), std::sin(t), 0.0);
  }
  return DirectionSet(std::move(dirs));
}

}  // namespace pointscat
