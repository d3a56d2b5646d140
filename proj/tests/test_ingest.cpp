#include <cmath>
#include <set>

#include "critscan/ingest.hpp"
#include "doctest.h"
#include "testkit.hpp"

using namespace critscan;

TEST_SUITE("ingest") {

TEST_CASE("log returns of an exponential ramp are exact") {
  PriceSeries prices;
  prices.prices = Matrix(3, 1);
  prices.prices.at(0, 0) = 1.0;
  prices.prices.at(1, 0) = std::exp(1.0);
  prices.prices.at(2, 0) = std::exp(3.0);
  prices.labels = {"a"};

  const auto ret = compute_returns(prices);
  REQUIRE(ret.returns.rows == 2);
  REQUIRE(ret.returns.cols == 1);
  CHECK(ret.returns.at(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ret.returns.at(1, 0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(ret.labels == std::vector<std::string>{"a"});
}

TEST_CASE("returns reject bad prices with a location") {
  PriceSeries prices;
  prices.prices = Matrix(2, 2);
  prices.prices.at(0, 0) = 1.0;
  prices.prices.at(0, 1) = 2.0;
  prices.prices.at(1, 0) = 3.0;
  prices.prices.at(1, 1) = -1.0;
  CHECK_THROWS_WITH_AS(compute_returns(prices),
                       doctest::Contains("row 2, column 2"),
                       std::invalid_argument);

  PriceSeries single;
  single.prices = Matrix(1, 1);
  single.prices.at(0, 0) = 1.0;
  CHECK_THROWS_AS(compute_returns(single), std::invalid_argument);
}

TEST_CASE("binarize maps signs and honours the zero policy") {
  ReturnMatrix ret;
  ret.returns = Matrix(4, 2);
  // column 1: + 0 - 0 ; column 2: - + 0 +
  ret.returns.at(0, 0) = 0.5;
  ret.returns.at(1, 0) = 0.0;
  ret.returns.at(2, 0) = -0.5;
  ret.returns.at(3, 0) = 0.0;
  ret.returns.at(0, 1) = -0.1;
  ret.returns.at(1, 1) = 0.1;
  ret.returns.at(2, 1) = 0.0;
  ret.returns.at(3, 1) = 0.1;

  SUBCASE("carry repeats the previous sign, -1 before any") {
    const auto b = binarize(ret, ZeroPolicy::carry);
    CHECK(b.at(0, 0) == 1);
    CHECK(b.at(1, 0) == 1);
    CHECK(b.at(2, 0) == -1);
    CHECK(b.at(3, 0) == -1);
    CHECK(b.at(2, 1) == 1);

    ReturnMatrix leading;
    leading.returns = Matrix(1, 1);  // single zero, nothing to carry
    const auto lb = binarize(leading, ZeroPolicy::carry);
    CHECK(lb.at(0, 0) == -1);
  }
  SUBCASE("fixed mappings") {
    CHECK(binarize(ret, ZeroPolicy::minus_one).at(1, 0) == -1);
    CHECK(binarize(ret, ZeroPolicy::plus_one).at(1, 0) == 1);
  }
  SUBCASE("drop-row removes rows containing any zero") {
    const auto b = binarize(ret, ZeroPolicy::drop_row);
    REQUIRE(b.rows == 1);
    CHECK(b.at(0, 0) == 1);
    CHECK(b.at(0, 1) == -1);
  }
}

TEST_CASE("binarize rejects all-dropped and non-finite input") {
  ReturnMatrix zeros;
  zeros.returns = Matrix(2, 1);
  CHECK_THROWS_AS(binarize(zeros, ZeroPolicy::drop_row),
                  std::invalid_argument);

  ReturnMatrix nan;
  nan.returns = Matrix(1, 1);
  nan.returns.at(0, 0) = std::nan("");
  CHECK_THROWS_AS(binarize(nan), std::invalid_argument);
}

TEST_CASE("encode packs spin b+1 into bit b") {
  CHECK(encode(std::vector<std::int8_t>{-1, -1}) == 0);
  CHECK(encode(std::vector<std::int8_t>{1, -1}) == 1);
  CHECK(encode(std::vector<std::int8_t>{-1, 1}) == 2);
  CHECK(encode(std::vector<std::int8_t>{1, 1, 1}) == 7);
  CHECK_THROWS_AS(encode(std::vector<std::int8_t>{0, 1}),
                  std::invalid_argument);
}

TEST_CASE("decode inverts encode for every 4-spin code") {
  for (ConfigCode code = 0; code < 16; ++code)
    CHECK(encode(decode(code, 4)) == code);
  CHECK_THROWS_AS(decode(16, 4), std::invalid_argument);
  CHECK_THROWS_AS(decode(0, 0), std::invalid_argument);
}

TEST_CASE("mean correlation of exact copies and mirrors") {
  ReturnMatrix ret;
  ret.returns = Matrix(6, 3);
  for (std::size_t t = 0; t < 6; ++t) {
    const double v = static_cast<double>(t) - 2.5;
    ret.returns.at(t, 0) = v;
    ret.returns.at(t, 1) = 2.0 * v;   // perfectly correlated
    ret.returns.at(t, 2) = -v + 0.3;  // perfectly anticorrelated
  }
  const std::vector<std::size_t> first_two{0, 1};
  CHECK(mean_correlation(ret, first_two) == doctest::Approx(1.0).epsilon(1e-12));
  const std::vector<std::size_t> mixed{0, 2};
  CHECK(mean_correlation(ret, mixed) == doctest::Approx(-1.0).epsilon(1e-12));
  // all three pairs: (+1) + (-1) + (-1) over 3
  const std::vector<std::size_t> all{0, 1, 2};
  CHECK(mean_correlation(ret, all) ==
        doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("mean correlation rejects constant columns and bad subsets") {
  ReturnMatrix ret;
  ret.returns = Matrix(4, 2);
  for (std::size_t t = 0; t < 4; ++t) {
    ret.returns.at(t, 0) = static_cast<double>(t);
    ret.returns.at(t, 1) = 1.0;
  }
  const std::vector<std::size_t> both{0, 1};
  CHECK_THROWS_WITH_AS(mean_correlation(ret, both),
                       doctest::Contains("column 2"), std::invalid_argument);
  const std::vector<std::size_t> dup{0, 0};
  CHECK_THROWS_AS(mean_correlation(ret, dup), std::invalid_argument);
  const std::vector<std::size_t> out{0, 5};
  CHECK_THROWS_AS(mean_correlation(ret, out), std::invalid_argument);
}

TEST_CASE("random subsets enumerate exhaustively when they fit") {
  const auto subs = random_subsets(4, 2, 10, 99);
  REQUIRE(subs.size() == 6);  // C(4,2)
  CHECK(subs.front() == std::vector<std::size_t>{0, 1});
  CHECK(subs.back() == std::vector<std::size_t>{2, 3});
  for (std::size_t i = 1; i < subs.size(); ++i) CHECK(subs[i - 1] < subs[i]);
}

TEST_CASE("random subsets are distinct, sorted, and seed-deterministic") {
  const auto a = random_subsets(20, 5, 50, 7);
  const auto b = random_subsets(20, 5, 50, 7);
  const auto c = random_subsets(20, 5, 50, 8);
  CHECK(a == b);
  CHECK(a != c);
  REQUIRE(a.size() == 50);
  std::set<std::vector<std::size_t>> seen;
  for (const auto& s : a) {
    REQUIRE(s.size() == 5);
    CHECK(std::is_sorted(s.begin(), s.end()));
    CHECK(s.back() < 20);
    CHECK(seen.insert(s).second);  // no duplicates
  }
  CHECK_THROWS_AS(random_subsets(4, 5, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(random_subsets(4, 0, 1, 0), std::invalid_argument);
}

TEST_CASE("select_columns keeps order, data, and labels") {
  auto data = testkit::independent_coins(5, 40, 123);
  const std::vector<std::size_t> subset{4, 1};
  const auto sub = select_columns(data, subset);
  REQUIRE(sub.rows == 40);
  REQUIRE(sub.cols == 2);
  CHECK(sub.labels == std::vector<std::string>{"s5", "s2"});
  for (std::size_t t = 0; t < 40; ++t) {
    CHECK(sub.at(t, 0) == data.at(t, 4));
    CHECK(sub.at(t, 1) == data.at(t, 1));
  }
}

}  // TEST_SUITE
