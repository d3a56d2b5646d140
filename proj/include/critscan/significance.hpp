#pragma once
// Undersampling diagnostics. For M observations of binary configurations,
// m_k counts the distinct configurations seen exactly k times; from these
// multiplicities come the sequence entropy H[s] and the occupation entropy
// H[K], whose peak across subsystem sizes marks the undersampling threshold.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "critscan/types.hpp"

namespace critscan {

struct SamplingProfile {
  std::size_t m = 0;  // number of observations
  // (k, m_k) with k ascending, m_k > 0; sum of k * m_k equals m
  std::vector<std::pair<std::size_t, std::size_t>> multiplicities;
};

SamplingProfile multiplicities(const BinaryMatrix& data);

// (H[s], H[K]) in nats:
//   H[s] = -sum_k (k m_k / M) ln(k / M)
//   H[K] = -sum_k q_k ln q_k with q_k = k m_k / M
std::pair<double, double> entropy_pair(const SamplingProfile& profile);

struct SignificanceCurve {
  std::vector<std::size_t> sizes;
  std::vector<double> h_s_mean, h_s_std;
  std::vector<double> h_k_mean, h_k_std;
  std::vector<std::size_t> n_subsets_used;
};

// H[s], H[K] averaged over random column subsets of each size; exhaustive
// when the number of size-n subsets does not exceed n_subsets
SignificanceCurve significance_curve(const BinaryMatrix& data,
                                     const std::vector<std::size_t>& sizes,
                                     std::size_t n_subsets,
                                     std::uint64_t seed);

struct BoundCurve {
  std::vector<double> h_s_grid;
  std::vector<double> h_k_bound;
};

// theoretical envelope of H[K] as a function of H[s] for fixed M, from the
// one-parameter multiplicity family m_k ~ k^(-1-mu), mu in [-1, 4], joined
// to the exact endpoints (0, 0) and (ln M, 0)
BoundCurve theoretical_bound(std::size_t m,
                             const std::vector<double>& h_s_grid);

double interpolate_bound(const BoundCurve& bound, double h_s);

struct ThresholdReport {
  std::size_t n_threshold = 0;  // size at the maximum of mean H[K]
  bool beyond_tested = false;   // H[K] still rising at the largest size
  double h_k_at_threshold = 0.0;
  double bound_at_threshold = 0.0;
  std::string verdict;
};

ThresholdReport undersampling_threshold(const SignificanceCurve& curve,
                                        const BoundCurve& bound);

}  // namespace critscan
