#pragma once
/** @file noise.hpp
 * @brief Reproducible synthetic measurement noise:
 *        F_noisy = F + delta * max|F_ij| * (U(-1,1) + i U(-1,1)) per entry.
 *
 * Draws are counter-indexed (splitmix64 of seed and the row-major entry
 * index), so the output is a pure function of (F, delta, seed) and does not
 * depend on evaluation order or storage layout.
 */

#include <cstdint>

#include "pointscat/forward.hpp"

namespace pointscat {

inline constexpr const char* noise_generator_name = "splitmix64-counter";

struct NoiseSpec {
  double delta = 0.0;
  std::uint64_t seed = 0;

  NoiseSpec(double delta_, std::uint64_t seed_) : delta(delta_), seed(seed_) {
    if (!(std::isfinite(delta) && delta >= 0.0))
      throw std::invalid_argument("NoiseSpec: delta must be finite and >= 0");
  }
};

namespace detail {

// splitmix64 finalizer applied to a per-draw counter; standard constants.
inline std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Map to [-1, 1) using the top 53 bits.
inline double unit_symmetric(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * (2.0 / 9007199254740992.0) - 1.0;
}

}  // namespace detail

/** @brief Additive complex uniform perturbation scaled by the largest entry
 *         modulus. Entry (i, j) of an N-column matrix consumes draws
 *         2*(i*N+j) and 2*(i*N+j)+1 (real part first).
 */
inline FarFieldMatrix add_noise(const FarFieldMatrix& f, const NoiseSpec& spec) {
  const Eigen::Index rows = f.entries.rows();
  const Eigen::Index cols = f.entries.cols();
  const double scale = spec.delta * f.entries.cwiseAbs().maxCoeff();
  CMatrix noisy(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const auto t = static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(cols) +
                     static_cast<std::uint64_t>(j);
      const double re = detail::unit_symmetric(detail::splitmix64_at(spec.seed, 2 * t));
      const double im = detail::unit_symmetric(detail::splitmix64_at(spec.seed, 2 * t + 1));
      noisy(i, j) = f.entries(i, j) + scale * complexd{re, im};
    }
  }
  FarFieldMeta meta;
  meta.noisy = true;
  meta.delta = spec.delta;
  meta.seed = spec.seed;
  meta.generator = noise_generator_name;
  return FarFieldMatrix{std::move(noisy), std::move(meta)};
}

}  // namespace pointscat
