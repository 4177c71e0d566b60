#include <catch2/catch_amalgamated.hpp>

#include "test_helpers.hpp"

using namespace pointscat;

namespace {
const double k2pi = 2 * std::numbers::pi;

FarFieldMatrix benchmark_far_field(std::size_t n = 20) {
  return synthesize_far_field(uniform_circle_directions(n), testutil::three_scatterers(),
                              WaveConfig(k2pi));
}
}  // namespace

TEST_CASE("zero noise factor returns the input exactly") {
  const auto f = benchmark_far_field();
  const auto noisy = add_noise(f, NoiseSpec(0.0, 12345));
  REQUIRE(noisy.entries == f.entries);
  REQUIRE(noisy.meta.noisy);
  REQUIRE(noisy.meta.delta == 0.0);
}

TEST_CASE("noise is a pure function of (F, delta, seed)") {
  const auto f = benchmark_far_field();
  const auto a = add_noise(f, NoiseSpec(0.2, 99));
  const auto b = add_noise(f, NoiseSpec(0.2, 99));
  REQUIRE(a.entries == b.entries);

  const auto c = add_noise(f, NoiseSpec(0.2, 100));
  REQUIRE(a.entries != c.entries);

  REQUIRE(a.meta.noisy);
  REQUIRE(a.meta.delta == 0.2);
  REQUIRE(a.meta.seed.value() == 99);
  REQUIRE(a.meta.generator == noise_generator_name);
}

TEST_CASE("perturbation bound and empirical mean") {
  const auto f = benchmark_far_field();
  const double mx = f.entries.cwiseAbs().maxCoeff();
  const double delta = 0.2;
  const auto noisy = add_noise(f, NoiseSpec(delta, 7));

  const CMatrix diff = noisy.entries - f.entries;
  double mean_dev = 0.0;
  for (Eigen::Index i = 0; i < diff.rows(); ++i) {
    for (Eigen::Index j = 0; j < diff.cols(); ++j) {
      const double dev = std::abs(diff(i, j));
      REQUIRE(dev <= delta * std::sqrt(2.0) * mx);
      mean_dev += dev;
    }
  }
  mean_dev /= static_cast<double>(diff.size());
  // mean modulus of delta*(U + iU) over the square is ~0.765*delta
  REQUIRE(mean_dev >= 0.08 * mx);
  REQUIRE(mean_dev <= 0.18 * mx);
}

TEST_CASE("noise composes and records the last application") {
  const auto f = benchmark_far_field();
  const auto once = add_noise(f, NoiseSpec(0.1, 1));
  const auto twice = add_noise(once, NoiseSpec(0.05, 2));
  REQUIRE(twice.meta.delta == 0.05);
  REQUIRE(twice.meta.seed.value() == 2);
  // second application perturbs relative to the already-noisy maximum
  const double mx = once.entries.cwiseAbs().maxCoeff();
  REQUIRE((twice.entries - once.entries).cwiseAbs().maxCoeff() <= 0.05 * std::sqrt(2.0) * mx);
}

TEST_CASE("draws are row-major counter-indexed, independent of layout") {
  // entry (i, j) of an N-column matrix must consume draws 2(iN+j), 2(iN+j)+1
  const auto f = benchmark_far_field(4);
  const double mx = f.entries.cwiseAbs().maxCoeff();
  const auto noisy = add_noise(f, NoiseSpec(0.3, 42));
  const Eigen::Index i = 2, j = 1;
  const auto t = static_cast<std::uint64_t>(i * 4 + j);
  const complexd expected =
      f.entries(i, j) +
      0.3 * mx *
          complexd{detail::unit_symmetric(detail::splitmix64_at(42, 2 * t)),
                   detail::unit_symmetric(detail::splitmix64_at(42, 2 * t + 1))};
  REQUIRE(noisy.entries(i, j) == expected);
}

TEST_CASE("invalid noise specs are rejected") {
  REQUIRE_THROWS_AS(NoiseSpec(-0.1, 0), std::invalid_argument);
  REQUIRE_THROWS_AS(NoiseSpec(std::numeric_limits<double>::quiet_NaN(), 0),
                    std::invalid_argument);
}
