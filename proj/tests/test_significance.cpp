#include <cmath>

#include "critscan/significance.hpp"
#include "doctest.h"
#include "testkit.hpp"

using namespace critscan;

TEST_SUITE("significance") {

TEST_CASE("multiplicities of a small hand example") {
  BinaryMatrix data(4, 2);
  // rows: A A B C with A = (-,-), B = (+,-), C = (-,+)
  data.at(2, 0) = 1;
  data.at(3, 1) = 1;
  const auto profile = multiplicities(data);
  CHECK(profile.m == 4);
  // two singletons, one configuration seen twice
  REQUIRE(profile.multiplicities.size() == 2);
  CHECK(profile.multiplicities[0] == std::pair<std::size_t, std::size_t>{1, 2});
  CHECK(profile.multiplicities[1] == std::pair<std::size_t, std::size_t>{2, 1});

  const auto [h_s, h_k] = entropy_pair(profile);
  CHECK(h_s == doctest::Approx(1.5 * std::log(2.0)).epsilon(1e-14));
  CHECK(h_k == doctest::Approx(std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("occupation counts account for every observation") {
  const auto data = testkit::independent_coins(6, 500, 21);
  const auto profile = multiplicities(data);
  std::size_t total = 0;
  for (const auto& [k, mk] : profile.multiplicities) total += k * mk;
  CHECK(total == profile.m);
}

TEST_CASE("entropy decomposition identity holds to 1e-10") {
  // H[K] = H[s] - sum_k (k m_k / M) ln m_k
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto data = testkit::independent_coins(5, 300, 50 + seed);
    const auto profile = multiplicities(data);
    const auto [h_s, h_k] = entropy_pair(profile);
    double correction = 0.0;
    const double m = static_cast<double>(profile.m);
    for (const auto& [k, mk] : profile.multiplicities)
      correction += static_cast<double>(k) * static_cast<double>(mk) / m *
                    std::log(static_cast<double>(mk));
    CHECK(h_k == doctest::Approx(h_s - correction).epsilon(1e-10));
  }
}

TEST_CASE("independent coins sit near maximal sequence entropy") {
  // at M = 2^(n+2) samples the plug-in bias is about 0.125 nats, so n must
  // be large enough for that to stay within the 2% band
  const int n = 12;
  const std::size_t m = std::size_t{1} << (n + 2);
  const auto data = testkit::independent_coins(n, m, 9);
  const auto [h_s, h_k] = entropy_pair(multiplicities(data));
  CHECK(h_s ==
        doctest::Approx(n * std::log(2.0)).epsilon(0.02));  // within 2%
  CHECK(h_k < 0.5 * h_s);
}

TEST_CASE("strongly ordered data collapse next to the origin") {
  const auto data = testkit::ordered_pair(6, 128);
  const auto [h_s, h_k] = entropy_pair(multiplicities(data));
  CHECK(h_s == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(h_k == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("significance curve is deterministic and exhaustive when possible") {
  const auto data = testkit::independent_coins(6, 400, 77);
  const std::vector<std::size_t> sizes{2, 4, 6};
  const auto a = significance_curve(data, sizes, 20, 5);
  const auto b = significance_curve(data, sizes, 20, 5);
  CHECK(a.h_s_mean == b.h_s_mean);  // bitwise
  CHECK(a.h_k_mean == b.h_k_mean);
  CHECK(a.h_s_std == b.h_s_std);

  CHECK(a.n_subsets_used[0] == 15);  // C(6,2) = 15 fits under 20
  CHECK(a.n_subsets_used[1] == 15);  // C(6,4) = 15
  CHECK(a.n_subsets_used[2] == 1);   // full system only
  CHECK(a.h_s_std[2] == 0.0);        // single subset, zero spread

  for (std::size_t i = 0; i < sizes.size(); ++i) {
    CHECK(a.h_s_mean[i] > 0.0);
    CHECK(a.h_k_mean[i] >= 0.0);
    CHECK(a.h_k_mean[i] <= a.h_s_mean[i] + 1e-12);
  }
}

TEST_CASE("significance curve validates its inputs") {
  const auto data = testkit::independent_coins(4, 50, 1);
  CHECK_THROWS_AS(significance_curve(data, {}, 10, 0), std::invalid_argument);
  CHECK_THROWS_AS(significance_curve(data, {2, 2}, 10, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(significance_curve(data, {5}, 10, 0), std::invalid_argument);
  CHECK_THROWS_AS(significance_curve(data, {2}, 0, 0), std::invalid_argument);
}

TEST_CASE("theoretical bound vanishes at both endpoints and rises between") {
  const std::size_t m = 2000;
  std::vector<double> grid;
  const double log_m = std::log(static_cast<double>(m));
  for (int i = 0; i <= 40; ++i) grid.push_back(log_m * i / 40.0);
  const auto bound = theoretical_bound(m, grid);

  CHECK(bound.h_k_bound.front() == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(bound.h_k_bound.back() == doctest::Approx(0.0).epsilon(1e-9));
  double peak = 0.0;
  for (double v : bound.h_k_bound) {
    CHECK(v >= 0.0);
    peak = std::max(peak, v);
  }
  CHECK(peak > 1.0);  // a substantial interior envelope
  // never above the diagonal H[K] <= H[s]
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(bound.h_k_bound[i] <= grid[i] + 1e-9);
}

TEST_CASE("interpolation of the bound is piecewise linear") {
  BoundCurve bound;
  bound.h_s_grid = {0.0, 1.0, 2.0};
  bound.h_k_bound = {0.0, 0.5, 0.0};
  CHECK(interpolate_bound(bound, 0.5) == doctest::Approx(0.25));
  CHECK(interpolate_bound(bound, 1.5) == doctest::Approx(0.25));
  CHECK(interpolate_bound(bound, -1.0) == 0.0);
  CHECK(interpolate_bound(bound, 5.0) == 0.0);
}

TEST_CASE("undersampling threshold picks the H[K] maximum") {
  SignificanceCurve curve;
  curve.sizes = {2, 4, 6, 8};
  curve.h_s_mean = {1.0, 2.0, 3.0, 4.0};
  curve.h_s_std = {0.0, 0.0, 0.0, 0.0};
  curve.h_k_mean = {0.2, 0.9, 0.5, 0.1};
  curve.h_k_std = {0.0, 0.0, 0.0, 0.0};
  curve.n_subsets_used = {10, 10, 10, 1};
  BoundCurve bound;
  bound.h_s_grid = {0.0, 5.0};
  bound.h_k_bound = {0.0, 5.0};

  const auto report = undersampling_threshold(curve, bound);
  CHECK(report.n_threshold == 4);
  CHECK_FALSE(report.beyond_tested);
  CHECK(report.h_k_at_threshold == doctest::Approx(0.9));

  curve.h_k_mean = {0.1, 0.2, 0.3, 0.4};  // still rising
  const auto rising = undersampling_threshold(curve, bound);
  CHECK(rising.beyond_tested);
  CHECK(rising.n_threshold == 8);
  CHECK(rising.verdict.find("beyond") != std::string::npos);
}

}  // TEST_SUITE
