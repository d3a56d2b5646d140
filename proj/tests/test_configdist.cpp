#include <algorithm>
#include <cmath>

#include "critscan/configdist.hpp"
#include "critscan/maxent.hpp"
#include "critscan/rng.hpp"
#include "doctest.h"
#include "testkit.hpp"

using namespace critscan;

namespace {

// random distribution over a random subset of the 2^n codes
ConfigDistribution random_dist(int n, std::size_t support, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<ConfigCode> codes;
  while (codes.size() < support) {
    const ConfigCode c = rng.below(std::uint64_t{1} << n);
    if (std::find(codes.begin(), codes.end(), c) == codes.end())
      codes.push_back(c);
  }
  std::sort(codes.begin(), codes.end());
  std::vector<double> probs(support);
  double z = 0.0;
  for (auto& p : probs) {
    p = 0.05 + rng.uniform01();
    z += p;
  }
  for (auto& p : probs) p /= z;
  return make_distribution(n, std::move(codes), std::move(probs));
}

}  // namespace

TEST_SUITE("configdist") {

TEST_CASE("distribution invariants are enforced") {
  CHECK_THROWS_AS(make_distribution(2, {1, 0}, {0.5, 0.5}),
                  std::invalid_argument);  // not ascending
  CHECK_THROWS_AS(make_distribution(2, {0, 1}, {0.5, 0.4}),
                  std::invalid_argument);  // sum != 1
  CHECK_THROWS_AS(make_distribution(2, {0, 1}, {1.0, 0.0}),
                  std::invalid_argument);  // non-positive
  CHECK_THROWS_AS(make_distribution(2, {0, 4}, {0.5, 0.5}),
                  std::invalid_argument);  // code out of space
  CHECK_NOTHROW(make_distribution(2, {0, 3}, {0.25, 0.75}));
}

TEST_CASE("empirical distribution counts configurations") {
  BinaryMatrix data(4, 2);
  // rows: (-,-) (+,-) (-,-) (+,+)
  data.at(1, 0) = 1;
  data.at(3, 0) = 1;
  data.at(3, 1) = 1;
  const auto dist = empirical_distribution(data);
  REQUIRE(dist.codes == std::vector<ConfigCode>{0, 1, 3});
  CHECK(dist.probs[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(dist.probs[1] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(dist.probs[2] == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("rescale at t = 1 is the identity, exactly") {
  const auto d = random_dist(5, 12, 42);
  const auto r = rescale(d, 1.0);
  CHECK(r.codes == d.codes);
  CHECK(r.probs == d.probs);  // bitwise
}

TEST_CASE("rescale at t = 1/2 squares and renormalizes") {
  const auto d = make_distribution(2, {0, 1, 2}, {0.5, 0.25, 0.25});
  const auto r = rescale(d, 0.5);
  // squares {1/4, 1/16, 1/16} normalize to {2/3, 1/6, 1/6}
  CHECK(r.probs[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(r.probs[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(r.probs[2] == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("rescale composes multiplicatively and flattens at high t") {
  const auto d = random_dist(6, 20, 7);
  const auto ab = rescale(rescale(d, 2.0), 1.5);
  const auto direct = rescale(d, 3.0);
  for (std::size_t i = 0; i < d.probs.size(); ++i)
    CHECK(ab.probs[i] == doctest::Approx(direct.probs[i]).epsilon(1e-12));

  const auto flat = rescale(d, 1e6);
  for (double p : flat.probs)
    CHECK(p == doctest::Approx(1.0 / 20.0).epsilon(1e-4));

  CHECK_THROWS_AS(rescale(d, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(rescale(d, -1.0), std::invalid_argument);
}

TEST_CASE("entropy oracles") {
  const auto u = make_distribution(2, {0, 1, 2, 3}, {0.25, 0.25, 0.25, 0.25});
  CHECK(shannon_entropy(u) == doctest::Approx(std::log(4.0)).epsilon(1e-14));
  const auto d = make_distribution(2, {0, 1, 2}, {0.5, 0.25, 0.25});
  for (const auto& oracle : testkit::response_oracles())
    if (oracle.description == "entropy of {1/2,1/4,1/4}")
      CHECK(shannon_entropy(d) ==
            doctest::Approx(oracle.expected).epsilon(oracle.tolerance));
}

TEST_CASE("two-point response oracle at the operating temperature") {
  const auto d = make_distribution(1, {0, 1}, {0.8, 0.2});
  const auto oracle = testkit::response_oracles().front();
  const std::vector<double> grid{1.0};

  ResponseOptions var_opts{1e-3, ResponseEstimator::variance};
  const auto var_curve = response_function(d, grid, var_opts);
  CHECK(var_curve.r_values[0] ==
        doctest::Approx(oracle.expected).epsilon(oracle.tolerance));

  ResponseOptions fd_opts{1e-5, ResponseEstimator::finite_difference};
  const auto fd_curve = response_function(d, grid, fd_opts);
  CHECK(fd_curve.r_values[0] ==
        doctest::Approx(oracle.expected).epsilon(1e-8));
}

TEST_CASE("finite-difference and variance estimators agree to 1e-6") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto d = random_dist(8, 40 + 8 * seed, 100 + seed);
    const auto grid = log_t_grid(0.2, 5.0, 25);
    const auto fd = response_function(
        d, grid, {1e-5, ResponseEstimator::finite_difference});
    const auto var =
        response_function(d, grid, {1e-3, ResponseEstimator::variance});
    for (std::size_t i = 0; i < grid.size(); ++i)
      CHECK(fd.r_values[i] ==
            doctest::Approx(var.r_values[i]).epsilon(1e-6));
  }
}

TEST_CASE("response matches the brute-force reference") {
  const auto d = random_dist(7, 50, 11);
  const std::vector<double> grid{0.3, 0.7, 1.0, 1.9, 4.2};
  const auto curve =
      response_function(d, grid, {1e-3, ResponseEstimator::variance});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(curve.r_values[i] ==
          doctest::Approx(testkit::brute_force_response(d, grid[i]))
              .epsilon(1e-11));
    CHECK(curve.s_values[i] ==
          doctest::Approx(testkit::brute_force_entropy(d, grid[i]))
              .epsilon(1e-11));
  }
}

TEST_CASE("single-configuration support degenerates cleanly") {
  const auto d = make_distribution(3, {5}, {1.0});
  const auto curve = response_function(d, default_t_grid());
  CHECK(curve.degenerate);
  for (double r : curve.r_values) CHECK(r == 0.0);
  for (double s : curve.s_values) CHECK(s == 0.0);
}

TEST_CASE("find_t_max refines an exact parabola to its vertex") {
  ResponseCurve curve;
  curve.t_grid = {0.8, 0.9, 1.0, 1.1, 1.2};
  const double tv = 0.97, rv = 3.0;
  for (double t : curve.t_grid)
    curve.r_values.push_back(rv - 2.0 * (t - tv) * (t - tv));
  curve.s_values.assign(5, 0.0);

  const auto peak = find_t_max(curve);
  CHECK_FALSE(peak.at_boundary);
  CHECK(peak.t_max == doctest::Approx(tv).epsilon(1e-12));
  CHECK(peak.r_max == doctest::Approx(rv).epsilon(1e-12));
}

TEST_CASE("find_t_max flags boundary peaks") {
  ResponseCurve curve;
  curve.t_grid = {1.0, 2.0, 3.0};
  curve.r_values = {3.0, 2.0, 1.0};
  curve.s_values = {0.0, 0.0, 0.0};
  const auto peak = find_t_max(curve);
  CHECK(peak.at_boundary);
  CHECK(peak.t_max == 1.0);
  CHECK(peak.r_max == 3.0);
}

TEST_CASE("KL divergence basics") {
  const auto p = make_distribution(1, {0, 1}, {0.5, 0.5});
  const auto q = make_distribution(1, {0, 1}, {0.25, 0.75});
  CHECK(kl_divergence(p, p) == doctest::Approx(0.0).epsilon(1e-15));
  // 0.5 ln 2 + 0.5 ln(2/3) = 0.5 ln(4/3)
  CHECK(kl_divergence(p, q) ==
        doctest::Approx(0.5 * std::log(4.0 / 3.0)).epsilon(1e-14));
  CHECK(kl_divergence(p, q) >= 0.0);

  const auto narrow = make_distribution(1, {0}, {1.0});
  CHECK_NOTHROW(kl_divergence(narrow, p));
  CHECK_THROWS_AS(kl_divergence(p, narrow), std::invalid_argument);
}

TEST_CASE("rank spectrum sorts descending with code tie-breaks") {
  const auto d =
      make_distribution(3, {1, 2, 4, 6}, {0.2, 0.4, 0.2, 0.2});
  const auto ranks = rank_spectrum(d);
  CHECK(ranks == std::vector<double>{0.4, 0.2, 0.2, 0.2});
  CHECK(std::is_sorted(ranks.rbegin(), ranks.rend()));
}

TEST_CASE("net orientation summarises magnetization") {
  BinaryMatrix data(3, 2);
  data.at(0, 0) = 1;
  data.at(0, 1) = 1;  // m = 1
  data.at(1, 0) = 1;  // m = 0
  const auto net = net_orientation(data);  // m values: 1, 0, -1
  CHECK(net.series == std::vector<double>{1.0, 0.0, -1.0});
  CHECK(net.histogram == std::vector<std::size_t>{1, 1, 1});
  CHECK(net.mean_abs == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("default temperature grid spans [0.2, 5] with 200 points") {
  const auto grid = default_t_grid();
  REQUIRE(grid.size() == 200);
  CHECK(grid.front() == 0.2);
  CHECK(grid.back() == 5.0);
  CHECK(std::is_sorted(grid.begin(), grid.end()));
  // log-spacing: constant ratio
  const double ratio = grid[1] / grid[0];
  CHECK(grid[100] / grid[99] == doctest::Approx(ratio).epsilon(1e-10));
  CHECK_THROWS_AS(log_t_grid(0.0, 5.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(log_t_grid(1.0, 0.5, 10), std::invalid_argument);
}

TEST_CASE("response grid must be valid") {
  const auto d = random_dist(4, 6, 3);
  CHECK_THROWS_AS(response_function(d, {}), std::invalid_argument);
  CHECK_THROWS_AS(response_function(d, {1.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(response_function(d, {-1.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(response_function(d, {1.0, 2.0}, {0.7}),
                  std::invalid_argument);
}

}  // TEST_SUITE
