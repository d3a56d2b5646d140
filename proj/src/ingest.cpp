#include "critscan/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "critscan/rng.hpp"

namespace critscan {

namespace {

[[noreturn]] void bad_input(const std::string& what) {
  throw std::invalid_argument(what);
}

// C(n_total, n) saturated at `cap`
std::size_t binom_capped(std::size_t n_total, std::size_t n, std::size_t cap) {
  if (n > n_total) return 0;
  n = std::min(n, n_total - n);
  unsigned __int128 c = 1;
  for (std::size_t i = 0; i < n; ++i) {
    c = c * (n_total - i) / (i + 1);  // exact: product of i+1 consecutive ints
    if (c > cap) return cap;
  }
  return static_cast<std::size_t>(c);
}

void check_subset(std::size_t n_cols, std::span<const std::size_t> subset) {
  std::vector<std::size_t> seen(subset.begin(), subset.end());
  std::sort(seen.begin(), seen.end());
  if (subset.empty()) bad_input("subset is empty");
  if (seen.back() >= n_cols)
    bad_input("subset index " + std::to_string(seen.back()) +
              " out of range for " + std::to_string(n_cols) + " columns");
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
    bad_input("subset contains duplicate indices");
}

}  // namespace

ReturnMatrix compute_returns(const PriceSeries& prices) {
  const Matrix& p = prices.prices;
  if (p.rows < 2) bad_input("need at least 2 price rows to form returns");
  if (p.cols == 0) bad_input("price matrix has no columns");
  for (std::size_t r = 0; r < p.rows; ++r)
    for (std::size_t c = 0; c < p.cols; ++c) {
      const double v = p.at(r, c);
      if (!std::isfinite(v) || v <= 0.0)
        bad_input("price must be positive and finite (row " +
                  std::to_string(r + 1) + ", column " + std::to_string(c + 1) +
                  ")");
    }
  ReturnMatrix out;
  out.labels = prices.labels;
  out.returns = Matrix(p.rows - 1, p.cols);
  for (std::size_t r = 0; r + 1 < p.rows; ++r)
    for (std::size_t c = 0; c < p.cols; ++c)
      out.returns.at(r, c) = std::log(p.at(r + 1, c) / p.at(r, c));
  return out;
}

BinaryMatrix binarize(const ReturnMatrix& returns, ZeroPolicy policy) {
  const Matrix& r = returns.returns;
  if (r.rows == 0 || r.cols == 0) bad_input("return matrix is empty");
  for (double v : r.values)
    if (!std::isfinite(v)) bad_input("return matrix contains non-finite value");

  std::vector<std::size_t> keep;
  keep.reserve(r.rows);
  for (std::size_t i = 0; i < r.rows; ++i) {
    if (policy == ZeroPolicy::drop_row) {
      bool has_zero = false;
      for (std::size_t c = 0; c < r.cols; ++c)
        if (r.at(i, c) == 0.0) has_zero = true;
      if (has_zero) continue;
    }
    keep.push_back(i);
  }
  if (keep.empty()) bad_input("all rows dropped by zero policy");

  BinaryMatrix out(keep.size(), r.cols);
  out.labels = returns.labels;
  std::vector<std::int8_t> last(r.cols, -1);
  for (std::size_t k = 0; k < keep.size(); ++k)
    for (std::size_t c = 0; c < r.cols; ++c) {
      const double v = r.at(keep[k], c);
      std::int8_t s;
      if (v > 0.0)
        s = 1;
      else if (v < 0.0)
        s = -1;
      else
        switch (policy) {
          case ZeroPolicy::carry: s = last[c]; break;
          case ZeroPolicy::minus_one: s = -1; break;
          case ZeroPolicy::plus_one: s = 1; break;
          default: s = -1; break;  // unreachable: rows with zeros dropped
        }
      out.at(k, c) = s;
      last[c] = s;
    }
  return out;
}

ConfigCode encode(std::span<const std::int8_t> spins) {
  if (spins.empty() || spins.size() > 64)
    bad_input("encode needs between 1 and 64 spins");
  ConfigCode code = 0;
  for (std::size_t b = 0; b < spins.size(); ++b) {
    const std::int8_t s = spins[b];
    if (s != 1 && s != -1) bad_input("spins must be -1 or +1");
    if (s == 1) code |= ConfigCode{1} << b;
  }
  return code;
}

std::vector<std::int8_t> decode(ConfigCode code, int n) {
  if (n < 1 || n > 64) bad_input("decode needs n between 1 and 64");
  if (n < 64 && (code >> n) != 0)
    bad_input("code has bits set beyond position " + std::to_string(n));
  std::vector<std::int8_t> spins(n);
  for (int b = 0; b < n; ++b)
    spins[b] = (code >> b) & 1 ? std::int8_t{1} : std::int8_t{-1};
  return spins;
}

double mean_correlation(const ReturnMatrix& returns,
                        std::span<const std::size_t> subset) {
  const Matrix& r = returns.returns;
  check_subset(r.cols, subset);
  if (subset.size() < 2) bad_input("mean correlation needs at least 2 columns");
  if (r.rows < 2) bad_input("mean correlation needs at least 2 rows");

  const std::size_t m = r.rows, n = subset.size();
  std::vector<double> mean(n, 0.0), sd(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t t = 0; t < m; ++t) mean[j] += r.at(t, subset[j]);
    mean[j] /= static_cast<double>(m);
    for (std::size_t t = 0; t < m; ++t) {
      const double d = r.at(t, subset[j]) - mean[j];
      sd[j] += d * d;
    }
    if (sd[j] == 0.0)
      bad_input("column " + std::to_string(subset[j] + 1) +
                " is constant; correlation undefined");
    sd[j] = std::sqrt(sd[j]);
  }

  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      double cov = 0.0;
      for (std::size_t t = 0; t < m; ++t)
        cov += (r.at(t, subset[a]) - mean[a]) * (r.at(t, subset[b]) - mean[b]);
      total += cov / (sd[a] * sd[b]);
      ++pairs;
    }
  return total / static_cast<double>(pairs);
}

std::vector<std::vector<std::size_t>> random_subsets(std::size_t n_total,
                                                     std::size_t n,
                                                     std::size_t count,
                                                     std::uint64_t seed) {
  if (n == 0 || n > n_total) bad_input("subset size must be in [1, n_total]");
  if (count == 0) bad_input("subset count must be positive");

  const std::size_t n_comb = binom_capped(n_total, n, count + 1);
  std::vector<std::vector<std::size_t>> out;

  if (n_comb <= count) {
    // everything fits: enumerate lexicographically
    std::vector<std::size_t> cur(n);
    std::iota(cur.begin(), cur.end(), 0);
    while (true) {
      out.push_back(cur);
      // advance to next combination
      std::size_t i = n;
      while (i > 0 && cur[i - 1] == n_total - n + (i - 1)) --i;
      if (i == 0) break;
      ++cur[i - 1];
      for (std::size_t j = i; j < n; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
  }

  Rng rng(seed);
  std::set<std::vector<std::size_t>> seen;
  std::vector<std::size_t> pool(n_total);
  while (out.size() < count) {
    // partial Fisher-Yates: first n entries become a uniform random subset
    std::iota(pool.begin(), pool.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = i + rng.below(n_total - i);
      std::swap(pool[i], pool[j]);
    }
    std::vector<std::size_t> subset(pool.begin(), pool.begin() + n);
    std::sort(subset.begin(), subset.end());
    if (seen.insert(subset).second) out.push_back(std::move(subset));
  }
  return out;
}

BinaryMatrix select_columns(const BinaryMatrix& data,
                            std::span<const std::size_t> subset) {
  check_subset(data.cols, subset);
  BinaryMatrix out(data.rows, subset.size());
  for (std::size_t j = 0; j < subset.size(); ++j) {
    if (subset[j] < data.labels.size()) {
      if (out.labels.size() != subset.size()) out.labels.resize(subset.size());
      out.labels[j] = data.labels[subset[j]];
    }
    for (std::size_t t = 0; t < data.rows; ++t)
      out.at(t, j) = data.at(t, subset[j]);
  }
  return out;
}

ReturnMatrix select_columns(const ReturnMatrix& returns,
                            std::span<const std::size_t> subset) {
  check_subset(returns.returns.cols, subset);
  ReturnMatrix out;
  out.returns = Matrix(returns.returns.rows, subset.size());
  for (std::size_t j = 0; j < subset.size(); ++j) {
    if (subset[j] < returns.labels.size()) {
      if (out.labels.size() != subset.size()) out.labels.resize(subset.size());
      out.labels[j] = returns.labels[subset[j]];
    }
    for (std::size_t t = 0; t < returns.returns.rows; ++t)
      out.returns.at(t, j) = returns.returns.at(t, subset[j]);
  }
  return out;
}

}  // namespace critscan
