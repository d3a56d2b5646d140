#include "critscan/powerlaw.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "critscan/parallel.hpp"
#include "critscan/rng.hpp"

namespace critscan {

namespace {

constexpr std::uint64_t k_max_support = std::uint64_t{1} << 24;

void check_x_max(std::uint64_t x_max) {
  if (x_max < 2) throw std::invalid_argument("x_max must be at least 2");
  if (x_max > k_max_support)
    throw std::invalid_argument("x_max exceeds exact-evaluation bound 2^24");
}

std::vector<double> ln_table(std::uint64_t x_max) {
  std::vector<double> lnx(x_max);
  for (std::uint64_t x = 1; x <= x_max; ++x)
    lnx[x - 1] = std::log(static_cast<double>(x));
  return lnx;
}

// zeta, zeta', zeta'' in one pass
struct ZetaTriple {
  double z0, z1, z2;
};

ZetaTriple zeta_triple(const std::vector<double>& lnx, double beta) {
  ZetaTriple t{0.0, 0.0, 0.0};
  for (double l : lnx) {
    const double w = std::exp(-beta * l);
    t.z0 += w;
    t.z1 -= w * l;
    t.z2 += w * l * l;
  }
  return t;
}

// model mean of ln x at exponent beta; shifted to survive extreme beta
double model_mean(const std::vector<double>& lnx, double beta) {
  const double shift = beta > 0.0 ? 0.0 : -beta * lnx.back();
  double z = 0.0, zl = 0.0;
  for (double l : lnx) {
    const double w = std::exp(-beta * l - shift);
    z += w;
    zl += w * l;
  }
  return zl / z;
}

double mle_core(const std::vector<double>& lnx, double target) {
  // model mean is strictly decreasing in beta; bracket then bisect
  double lo = -5.0, hi = 20.0;
  int widen = 0;
  while (model_mean(lnx, lo) < target) {
    lo *= 2.0;
    if (++widen > 4) throw numeric_error("MLE bracket failed (beta too low)");
  }
  widen = 0;
  while (model_mean(lnx, hi) > target) {
    hi *= 2.0;
    if (++widen > 4) throw numeric_error("MLE bracket failed (beta too high)");
  }
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (model_mean(lnx, mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  const double beta = 0.5 * (lo + hi);
  if (std::abs(model_mean(lnx, beta) - target) > 1e-8)
    throw numeric_error("MLE first-order condition not met");
  return beta;
}

double mean_log(const std::vector<std::uint64_t>& sample,
                const std::vector<double>& lnx, std::uint64_t x_max) {
  if (sample.empty()) throw std::invalid_argument("empty sample");
  double sum = 0.0;
  for (std::uint64_t x : sample) {
    if (x < 1 || x > x_max)
      throw std::invalid_argument("observation outside [1, x_max]");
    sum += lnx[x - 1];
  }
  return sum / static_cast<double>(sample.size());
}

// cumulative (unnormalized) weights of the fitted law, shifted for safety
std::vector<double> cumulative_weights(const std::vector<double>& lnx,
                                       double beta) {
  const double shift = beta > 0.0 ? 0.0 : -beta * lnx.back();
  std::vector<double> cum(lnx.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < lnx.size(); ++i) {
    acc += std::exp(-beta * lnx[i] - shift);
    cum[i] = acc;
  }
  return cum;
}

void draw_into(std::vector<std::uint64_t>& out, const std::vector<double>& cum,
               Rng& rng) {
  const double total = cum.back();
  for (auto& x : out) {
    const double u = rng.uniform01() * total;
    const auto it = std::lower_bound(cum.begin(), cum.end(), u);
    x = static_cast<std::uint64_t>(it - cum.begin()) + 1;
  }
}

double ks_core(const std::vector<std::uint64_t>& sample,
               const std::vector<double>& cum, std::uint64_t x_max) {
  std::vector<double> emp(x_max, 0.0);
  for (std::uint64_t x : sample) emp[x - 1] += 1.0;
  const double inv_n = 1.0 / static_cast<double>(sample.size());
  const double inv_z = 1.0 / cum.back();
  double acc = 0.0, d = 0.0;
  for (std::uint64_t i = 0; i < x_max; ++i) {
    acc += emp[i] * inv_n;
    d = std::max(d, std::abs(acc - cum[i] * inv_z));
  }
  return d;
}

}  // namespace

double zeta_sum(std::uint64_t x_max, double beta, int d) {
  check_x_max(x_max);
  if (d < 0 || d > 2) throw std::invalid_argument("zeta_sum needs d in {0,1,2}");
  double sum = 0.0;
  for (std::uint64_t x = 1; x <= x_max; ++x) {
    const double l = std::log(static_cast<double>(x));
    double term = std::exp(-beta * l);
    for (int i = 0; i < d; ++i) term *= -l;
    sum += term;
  }
  return sum;
}

double mle_exponent(const std::vector<std::uint64_t>& sample,
                    std::uint64_t x_max) {
  check_x_max(x_max);
  const auto lnx = ln_table(x_max);
  const double target = mean_log(sample, lnx, x_max);
  if (target == 0.0)
    throw std::invalid_argument("all observations equal 1; exponent unbounded");
  if (target >= lnx.back())
    throw std::invalid_argument(
        "all observations equal x_max; exponent unbounded");
  return mle_core(lnx, target);
}

double mle_sigma(std::uint64_t x_max, double beta, std::size_t n) {
  check_x_max(x_max);
  if (n == 0) throw std::invalid_argument("sigma needs n > 0");
  const auto lnx = ln_table(x_max);
  const auto [z0, z1, z2] = zeta_triple(lnx, beta);
  const double var = z2 / z0 - (z1 / z0) * (z1 / z0);
  if (!(var > 0.0)) throw numeric_error("degenerate Fisher information");
  return 1.0 / std::sqrt(static_cast<double>(n) * var);
}

std::vector<std::uint64_t> sample_power_law(double beta, std::uint64_t x_max,
                                            std::size_t n,
                                            std::uint64_t seed) {
  check_x_max(x_max);
  if (n == 0) throw std::invalid_argument("sample size must be positive");
  const auto lnx = ln_table(x_max);
  const auto cum = cumulative_weights(lnx, beta);
  Rng rng(seed);
  std::vector<std::uint64_t> out(n);
  draw_into(out, cum, rng);
  return out;
}

double ks_statistic(const std::vector<std::uint64_t>& sample,
                    std::uint64_t x_max, double beta) {
  check_x_max(x_max);
  if (sample.empty()) throw std::invalid_argument("empty sample");
  for (std::uint64_t x : sample)
    if (x < 1 || x > x_max)
      throw std::invalid_argument("observation outside [1, x_max]");
  const auto lnx = ln_table(x_max);
  return ks_core(sample, cumulative_weights(lnx, beta), x_max);
}

std::vector<std::uint64_t> rerank_by_frequency(
    const std::vector<std::uint64_t>& sample) {
  if (sample.empty()) throw std::invalid_argument("empty sample");
  std::vector<std::uint64_t> sorted = sample;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::pair<std::uint64_t, std::size_t>> freq;  // (value, count)
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    freq.emplace_back(sorted[i], j - i);
    i = j;
  }
  std::stable_sort(freq.begin(), freq.end(),
                   [](const auto& a, const auto& b) {
                     if (a.second != b.second) return a.second > b.second;
                     return a.first < b.first;
                   });
  std::vector<std::pair<std::uint64_t, std::uint64_t>> rank_of(freq.size());
  for (std::size_t r = 0; r < freq.size(); ++r)
    rank_of[r] = {freq[r].first, r + 1};
  std::sort(rank_of.begin(), rank_of.end());
  std::vector<std::uint64_t> out(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const auto it = std::lower_bound(
        rank_of.begin(), rank_of.end(),
        std::make_pair(sample[i], std::uint64_t{0}));
    out[i] = it->second;
  }
  return out;
}

FitReport bootstrap_pvalue(const std::vector<std::uint64_t>& sample,
                           std::uint64_t x_max, std::size_t n_boot,
                           std::uint64_t seed, bool rerank_null) {
  check_x_max(x_max);
  if (n_boot < 100)
    throw std::invalid_argument("bootstrap needs at least 100 replicates");

  const auto lnx = ln_table(x_max);
  const double target = mean_log(sample, lnx, x_max);
  if (target == 0.0 || target >= lnx.back())
    throw std::invalid_argument("degenerate sample; exponent unbounded");
  const double beta0 = mle_core(lnx, target);
  const auto cum0 = cumulative_weights(lnx, beta0);
  const double d0 = ks_core(sample, cum0, x_max);

  std::vector<double> d_boot(n_boot);
  parallel_for(n_boot, [&](std::size_t b) {
    Rng rng(derive_seed(seed, b));
    std::vector<std::uint64_t> synth(sample.size());
    draw_into(synth, cum0, rng);
    if (rerank_null) synth = rerank_by_frequency(synth);
    const double t = mean_log(synth, lnx, x_max);
    if (t == 0.0 || t >= lnx.back()) {
      d_boot[b] = HUGE_VAL;  // degenerate replicate: count as extreme
      return;
    }
    const double beta_b = mle_core(lnx, t);
    d_boot[b] = ks_core(synth, cumulative_weights(lnx, beta_b), x_max);
  });

  std::size_t exceed = 0;
  for (double d : d_boot)
    if (d > d0) ++exceed;

  FitReport report;
  report.beta_hat = beta0;
  report.sigma = mle_sigma(x_max, beta0, sample.size());
  report.ks_d = d0;
  report.p_value = static_cast<double>(exceed) / static_cast<double>(n_boot);
  report.n = sample.size();
  report.x_max = x_max;
  report.verdict = report.p_value < 0.05
                       ? "power law rejected (p < 0.05)"
                       : "power law not rejected";
  return report;
}

FitReport zipf_test(const ConfigDistribution& dist,
                    const std::vector<std::uint64_t>& counts,
                    XMaxPolicy policy, std::size_t n_boot, std::uint64_t seed,
                    bool rerank_null) {
  validate(dist);
  if (counts.size() != dist.codes.size())
    throw std::invalid_argument("counts/support size mismatch");
  if (dist.codes.size() < 2)
    throw std::invalid_argument(
        "zipf test needs at least 2 distinct configurations");
  for (std::uint64_t c : counts)
    if (c == 0) throw std::invalid_argument("counts must be positive");

  std::uint64_t x_max;
  if (policy == XMaxPolicy::distinct) {
    x_max = dist.codes.size();
  } else {
    if (dist.n > 24)
      throw std::invalid_argument(
          "full state space exceeds exact-evaluation bound (n > 24)");
    x_max = std::uint64_t{1} << dist.n;
  }

  // ranks by descending count, ties by ascending code
  std::vector<std::size_t> order(counts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (counts[a] != counts[b]) return counts[a] > counts[b];
    return dist.codes[a] < dist.codes[b];
  });
  std::vector<std::uint64_t> sample;
  for (std::size_t r = 0; r < order.size(); ++r)
    sample.insert(sample.end(), counts[order[r]], r + 1);

  return bootstrap_pvalue(sample, x_max, n_boot, seed, rerank_null);
}

}  // namespace critscan
