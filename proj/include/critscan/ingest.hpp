#pragma once
// Price/return ingestion and sign binarization. Downstream modules only see
// BinaryMatrix data; everything here is about getting from raw series to
// clean -1/+1 configurations plus the column-subset utilities built on them.

#include <cstdint>
#include <span>
#include <vector>

#include "critscan/types.hpp"

namespace critscan {

// log-returns r_t = ln(p_{t+1} / p_t); output has one row fewer than input
ReturnMatrix compute_returns(const PriceSeries& prices);

// What to do with exact-zero returns when taking signs.
enum class ZeroPolicy {
  carry,      // repeat previous sign in the same column; -1 before any sign
  minus_one,  // map zero to -1
  plus_one,   // map zero to +1
  drop_row    // remove rows containing any zero
};

BinaryMatrix binarize(const ReturnMatrix& returns,
                      ZeroPolicy policy = ZeroPolicy::carry);

// bit b of the code is set iff spin b+1 is up; n <= 64
ConfigCode encode(std::span<const std::int8_t> spins);
std::vector<std::int8_t> decode(ConfigCode code, int n);

// mean Pearson correlation over all pairs of the selected columns
double mean_correlation(const ReturnMatrix& returns,
                        std::span<const std::size_t> subset);

// `count` distinct size-n column subsets (each sorted ascending), drawn
// without replacement; exhaustive in lexicographic order when C(n_total, n)
// does not exceed `count`. Deterministic in `seed`.
std::vector<std::vector<std::size_t>> random_subsets(std::size_t n_total,
                                                     std::size_t n,
                                                     std::size_t count,
                                                     std::uint64_t seed);

BinaryMatrix select_columns(const BinaryMatrix& data,
                            std::span<const std::size_t> subset);
ReturnMatrix select_columns(const ReturnMatrix& returns,
                            std::span<const std::size_t> subset);

}  // namespace critscan
