#pragma once
// Maximum-likelihood fitting and bootstrap testing of the bounded discrete
// power law p(x) ~ x^(-beta) on x = 1..x_max. The exponent solves the
// first-order condition mean(ln x) = -zeta'/zeta with zeta(x_max, beta) the
// truncated zeta normalizer; goodness of fit is a KS statistic calibrated by
// a parametric bootstrap.

#include <cstdint>
#include <string>
#include <vector>

#include "critscan/configdist.hpp"
#include "critscan/types.hpp"

namespace critscan {

// sum over x = 1..x_max of x^(-beta) * (-ln x)^d, d in {0, 1, 2};
// d = 1 gives d(zeta)/d(beta), d = 2 gives the second derivative
double zeta_sum(std::uint64_t x_max, double beta, int d);

// MLE of beta for observations in [1, x_max]; bisection on the first-order
// condition, |residual| < 1e-8 guaranteed on return
double mle_exponent(const std::vector<std::uint64_t>& sample,
                    std::uint64_t x_max);

// asymptotic standard error: 1 / sqrt(n * Var_model(ln x))
double mle_sigma(std::uint64_t x_max, double beta, std::size_t n);

// inverse-CDF sampler on the integer support
std::vector<std::uint64_t> sample_power_law(double beta, std::uint64_t x_max,
                                            std::size_t n,
                                            std::uint64_t seed);

double ks_statistic(const std::vector<std::uint64_t>& sample,
                    std::uint64_t x_max, double beta);

struct FitReport {
  double beta_hat = 0.0;
  double sigma = 0.0;
  double ks_d = 0.0;
  double p_value = 0.0;
  std::size_t n = 0;
  std::uint64_t x_max = 0;
  std::string verdict;
};

// Parametric bootstrap: fit, then compare the observed KS distance against
// synthetic samples refit under the fitted law (x_max held fixed). With
// rerank_null set, each synthetic sample is relabeled by its own frequency
// ranks before refitting — the correct null when the data are themselves
// frequency ranks, since ranking is part of the measurement.
FitReport bootstrap_pvalue(const std::vector<std::uint64_t>& sample,
                           std::uint64_t x_max, std::size_t n_boot,
                           std::uint64_t seed, bool rerank_null = false);

// relabel values as 1, 2, ... by descending frequency (ties: smaller value
// first), preserving element order
std::vector<std::uint64_t> rerank_by_frequency(
    const std::vector<std::uint64_t>& sample);

enum class XMaxPolicy {
  distinct,         // x_max = number of distinct configurations observed
  full_state_space  // x_max = 2^n
};

// Zipf analysis of a configuration distribution: configurations become ranks
// (by descending probability, ties by ascending code), each repeated by its
// observed count, then bootstrap-tested with the reranked null.
FitReport zipf_test(const ConfigDistribution& dist,
                    const std::vector<std::uint64_t>& counts,
                    XMaxPolicy policy, std::size_t n_boot, std::uint64_t seed,
                    bool rerank_null = true);

}  // namespace critscan
