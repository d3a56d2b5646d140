#include <cmath>
#include <vector>

#include "critscan/analysis.hpp"
#include "critscan/configdist.hpp"
#include "doctest.h"
#include "testkit.hpp"

using namespace critscan;

namespace {

// exact bounded Zipf over the configurations of n spins: P(rank r) ~ 1/r
ConfigDistribution zipf_distribution(int n) {
  ConfigDistribution dist;
  dist.n = n;
  const std::size_t k = std::size_t{1} << n;
  double z = 0.0;
  for (std::size_t r = 1; r <= k; ++r) z += 1.0 / static_cast<double>(r);
  for (std::size_t r = 1; r <= k; ++r) {
    dist.codes.push_back(r - 1);
    dist.probs.push_back(1.0 / (static_cast<double>(r) * z));
  }
  return dist;
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("critical exponent is exact on a constructed power decay") {
  // symmetric three-point cap at t = 1, then R = 0.3 * eps^0.5 on the high
  // side with eps = (t - t_max) / t_max inside the default window
  ResponseCurve curve;
  curve.t_grid = {0.98, 1.0, 1.02, 1.06, 1.09, 1.14, 1.21, 1.29};
  curve.r_values = {1.9, 2.0, 1.9};
  for (std::size_t i = 3; i < curve.t_grid.size(); ++i) {
    const double eps = curve.t_grid[i] - 1.0;
    curve.r_values.push_back(0.3 * std::pow(eps, 0.5));
  }
  curve.s_values.assign(curve.t_grid.size(), 0.0);

  const auto fit = critical_exponent(curve);
  CHECK(fit.t_max == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.exponent == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(fit.std_error == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(fit.points == 5);

  // narrowing the window below two usable points is a numeric failure
  CHECK_THROWS_AS(critical_exponent(curve, 0.28, 0.30), numeric_error);
  CHECK_THROWS_AS(critical_exponent(curve, 0.3, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(critical_exponent(curve, 0.0, 0.3), std::invalid_argument);
}

TEST_CASE("critical exponent refuses a boundary peak") {
  ResponseCurve rising;
  rising.t_grid = {1.0, 2.0, 3.0};
  rising.r_values = {0.1, 0.2, 0.3};
  rising.s_values = {0.0, 0.0, 0.0};
  CHECK_THROWS_AS(critical_exponent(rising), std::invalid_argument);
}

TEST_CASE("entropy-energy curve is exactly linear for tuned degeneracies") {
  // four levels with degeneracy 2^k at spacing (4/3) ln 2 in -ln P: each of
  // the 4 equal-width bins then holds one level at its center, so
  // ln(count) against bin center has slope exactly 1
  ConfigDistribution dist;
  dist.n = 4;
  const double d = 4.0 / 3.0 * std::log(2.0);
  std::vector<double> level_p(4);
  double norm = 0.0;
  for (int k = 0; k < 4; ++k) {
    level_p[k] = std::exp(-d * k);
    norm += static_cast<double>(1 << k) * level_p[k];
  }
  ConfigCode code = 0;
  for (int k = 0; k < 4; ++k)
    for (int copy = 0; copy < (1 << k); ++copy) {
      dist.codes.push_back(code++);
      dist.probs.push_back(level_p[k] / norm);
    }

  const auto fit = entropy_energy_curve(dist, 4);
  REQUIRE_FALSE(fit.degenerate);
  REQUIRE(fit.bin_x.size() == 4);
  CHECK(fit.slope == doctest::Approx(1.0).epsilon(1e-9));
  // the residual sum is computed by cancellation (syy - slope * sxy), which
  // floors the measurable nonlinearity near sqrt(eps)
  CHECK(fit.rel_nonlinearity < 1e-6);
  for (std::size_t b = 0; b < 4; ++b)
    CHECK(fit.bin_s[b] ==
          doctest::Approx(static_cast<double>(b) * std::log(2.0))
              .epsilon(1e-9));
}

TEST_CASE("a bounded Zipf law shows unit slope and low curvature") {
  const auto dist = zipf_distribution(8);
  const auto fit = entropy_energy_curve(dist, 7, 0.1, 1.0);
  REQUIRE_FALSE(fit.degenerate);
  CHECK(fit.slope == doctest::Approx(1.0).epsilon(0.1));
  CHECK(fit.rel_nonlinearity < 0.05);
}

TEST_CASE("entropy-energy curve flags degenerate inputs") {
  // uniform: zero span in -ln P
  ConfigDistribution uniform;
  uniform.n = 3;
  for (ConfigCode c = 0; c < 8; ++c) {
    uniform.codes.push_back(c);
    uniform.probs.push_back(0.125);
  }
  CHECK(entropy_energy_curve(uniform, 4).degenerate);

  // two probability levels occupy fewer than 3 bins
  ConfigDistribution two_level;
  two_level.n = 2;
  two_level.codes = {0, 1, 2};
  two_level.probs = {0.5, 0.25, 0.25};
  CHECK(entropy_energy_curve(two_level, 5).degenerate);

  CHECK_THROWS_AS(entropy_energy_curve(uniform, 1), std::invalid_argument);
  CHECK_THROWS_AS(entropy_energy_curve(uniform, 4, 0.8, 0.2),
                  std::invalid_argument);
  CHECK_THROWS_AS(entropy_energy_curve(uniform, 4, -0.1, 1.0),
                  std::invalid_argument);
}

TEST_CASE("peak-versus-size scan keeps its books straight") {
  const auto model = testkit::random_model(6, 0.5, 314);
  const auto data = testkit::maxent_sampled(model, 1.0, 4000, 315);
  const std::vector<std::size_t> sizes{2, 3, 4};
  const auto grid = log_t_grid(0.3, 4.0, 60);

  const auto scan = tmax_vs_size(data, sizes, 10, 42, grid);
  CHECK(scan.sizes == sizes);
  REQUIRE(scan.t_mean.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(scan.used[i] + scan.skipped[i] == 10);
    CHECK(scan.t_std[i] >= 0.0);
    if (scan.used[i] > 0) CHECK(scan.t_mean[i] > 0.0);
  }

  // deterministic, seed-sensitive
  const auto again = tmax_vs_size(data, sizes, 10, 42, grid);
  CHECK(scan.t_mean == again.t_mean);
  CHECK(scan.t_std == again.t_std);
  const auto other = tmax_vs_size(data, sizes, 10, 43, grid);
  CHECK(scan.t_mean != other.t_mean);

  // three usable sizes support both fit families
  CHECK(scan.exp_fit.valid);
  CHECK(scan.power_fit.valid);
  CHECK(scan.exp_fit.rss >= 0.0);
  CHECK(scan.power_fit.rss >= 0.0);

  // a single size cannot be extrapolated
  const auto single = tmax_vs_size(data, {3}, 10, 42, grid);
  CHECK_FALSE(single.exp_fit.valid);
  CHECK_FALSE(single.power_fit.valid);
}

TEST_CASE("peak-versus-size scan validates its inputs") {
  const auto data = testkit::independent_coins(4, 64, 1);
  const auto grid = log_t_grid(0.5, 2.0, 10);
  CHECK_THROWS_AS(tmax_vs_size(data, {}, 5, 1, grid), std::invalid_argument);
  CHECK_THROWS_AS(tmax_vs_size(data, {0, 2}, 5, 1, grid),
                  std::invalid_argument);
  CHECK_THROWS_AS(tmax_vs_size(data, {2, 2}, 5, 1, grid),
                  std::invalid_argument);
  CHECK_THROWS_AS(tmax_vs_size(data, {2, 5}, 5, 1, grid),
                  std::invalid_argument);
}

TEST_CASE("correlation scan from spins equals an explicit cast") {
  const auto model = testkit::random_model(6, 0.6, 99);
  const auto data = testkit::maxent_sampled(model, 1.0, 3000, 100);
  const auto grid = log_t_grid(0.3, 4.0, 50);

  ReturnMatrix cast;
  cast.returns = Matrix(data.rows, data.cols);
  for (std::size_t k = 0; k < data.spins.size(); ++k)
    cast.returns.values[k] = static_cast<double>(data.spins[k]);

  const auto implicit = tmax_vs_correlation(data, nullptr, 3, 12, 7, grid);
  const auto explicit_scan = tmax_vs_correlation(data, &cast, 3, 12, 7, grid);
  CHECK(implicit.correlation == explicit_scan.correlation);
  CHECK(implicit.t_max == explicit_scan.t_max);
  CHECK(implicit.skipped == explicit_scan.skipped);
  CHECK(implicit.correlation.size() + implicit.skipped == 12);

  if (implicit.fit_valid) {
    CHECK(std::isfinite(implicit.slope));
    CHECK(implicit.r2 >= 0.0);
    CHECK(implicit.r2 <= 1.0 + 1e-12);
  }

  const auto again = tmax_vs_correlation(data, nullptr, 3, 12, 7, grid);
  CHECK(implicit.t_max == again.t_max);
}

TEST_CASE("correlation scan skips constant columns and bad sizes") {
  BinaryMatrix data(200, 3);
  for (std::size_t r = 0; r < 200; ++r) {
    data.at(r, 0) = 1;  // constant column
    data.at(r, 1) = (r * 7 % 13) < 6 ? 1 : -1;
    data.at(r, 2) = (r * 5 % 11) < 5 ? 1 : -1;
  }
  const auto grid = log_t_grid(0.5, 2.0, 20);
  const auto scan = tmax_vs_correlation(data, nullptr, 2, 3, 5, grid);
  CHECK(scan.correlation.size() + scan.skipped == 3);
  CHECK(scan.skipped >= 2);  // both subsets touching the constant column

  CHECK_THROWS_AS(tmax_vs_correlation(data, nullptr, 1, 3, 5, grid),
                  std::invalid_argument);
  CHECK_THROWS_AS(tmax_vs_correlation(data, nullptr, 4, 3, 5, grid),
                  std::invalid_argument);
  ReturnMatrix mismatched;
  mismatched.returns = Matrix(200, 2);
  CHECK_THROWS_AS(tmax_vs_correlation(data, &mismatched, 2, 3, 5, grid),
                  std::invalid_argument);
}

TEST_CASE("sliding windows tile the series") {
  const auto model = testkit::random_model(4, 0.5, 55);
  const auto data = testkit::maxent_sampled(model, 1.0, 100, 56);
  const auto grid = log_t_grid(0.3, 4.0, 40);

  const auto result = sliding_tmax(data, 40, 20, grid);
  CHECK(result.window == 40);
  CHECK(result.step == 20);
  REQUIRE(result.window_end.size() == 4);  // (100 - 40) / 20 + 1
  CHECK(result.window_end ==
        std::vector<std::size_t>{40, 60, 80, 100});
  for (std::size_t w = 0; w < 4; ++w) {
    if (result.valid[w])
      CHECK(std::isfinite(result.t_max[w]));
    else
      CHECK(std::isnan(result.t_max[w]));
  }

  // non-overlapping tiling
  const auto tiles = sliding_tmax(data, 25, 25, grid);
  CHECK(tiles.window_end.size() == 4);

  // window = 0 selects the resolution floor 2^(n+2)
  const auto floor_run = sliding_tmax(data, 0, 10, grid);
  CHECK(floor_run.window == 64);
  CHECK(floor_run.window_end.size() == (100 - 64) / 10 + 1);

  const auto again = sliding_tmax(data, 40, 20, grid);
  CHECK(result.valid == again.valid);
  for (std::size_t w = 0; w < 4; ++w)
    if (result.valid[w]) CHECK(result.t_max[w] == again.t_max[w]);
}

TEST_CASE("perfectly ordered windows have no interior peak") {
  const auto data = testkit::ordered_pair(3, 200);
  const auto grid = log_t_grid(0.5, 2.0, 15);
  const auto result = sliding_tmax(data, 50, 50, grid);
  REQUIRE(result.window_end.size() == 4);
  for (std::size_t w = 0; w < 4; ++w) {
    CHECK(result.valid[w] == 0);
    CHECK(std::isnan(result.t_max[w]));
  }
}

TEST_CASE("sliding windows validate their inputs") {
  const auto data = testkit::independent_coins(3, 100, 2);
  const auto grid = log_t_grid(0.5, 2.0, 10);
  CHECK_THROWS_AS(sliding_tmax(data, 200, 10, grid), std::invalid_argument);
  CHECK_THROWS_AS(sliding_tmax(data, 50, 0, grid), std::invalid_argument);
  CHECK_THROWS_AS(sliding_tmax(BinaryMatrix{}, 10, 10, grid),
                  std::invalid_argument);
  // default window 2^(n+2) overflows for wide systems
  BinaryMatrix wide(2, 39);
  CHECK_THROWS_AS(sliding_tmax(wide, 0, 1, grid), std::invalid_argument);
}

}  // TEST_SUITE
