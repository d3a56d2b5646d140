#include "critscan/significance.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "critscan/configdist.hpp"
#include "critscan/ingest.hpp"
#include "critscan/parallel.hpp"
#include "critscan/rng.hpp"

namespace critscan {

SamplingProfile multiplicities(const BinaryMatrix& data) {
  if (data.rows == 0 || data.cols == 0)
    throw std::invalid_argument("multiplicities of empty data");
  std::vector<ConfigCode> obs(data.rows);
  for (std::size_t r = 0; r < data.rows; ++r)
    obs[r] = encode({data.row(r), data.cols});
  std::sort(obs.begin(), obs.end());

  std::map<std::size_t, std::size_t> m_k;  // occupation count -> multiplicity
  for (std::size_t i = 0; i < obs.size();) {
    std::size_t j = i;
    while (j < obs.size() && obs[j] == obs[i]) ++j;
    ++m_k[j - i];
    i = j;
  }

  SamplingProfile profile;
  profile.m = data.rows;
  profile.multiplicities.assign(m_k.begin(), m_k.end());
  return profile;
}

std::pair<double, double> entropy_pair(const SamplingProfile& profile) {
  if (profile.m == 0 || profile.multiplicities.empty())
    throw std::invalid_argument("entropy of empty sampling profile");
  const double m = static_cast<double>(profile.m);
  double h_s = 0.0, h_k = 0.0;
  for (const auto& [k, mk] : profile.multiplicities) {
    const double q = static_cast<double>(k) * static_cast<double>(mk) / m;
    h_s -= q * std::log(static_cast<double>(k) / m);
    h_k -= q * std::log(q);
  }
  return {h_s, h_k};
}

SignificanceCurve significance_curve(const BinaryMatrix& data,
                                     const std::vector<std::size_t>& sizes,
                                     std::size_t n_subsets,
                                     std::uint64_t seed) {
  if (sizes.empty()) throw std::invalid_argument("no subsystem sizes given");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0 || sizes[i] > data.cols)
      throw std::invalid_argument("subsystem size out of range");
    if (i > 0 && sizes[i] <= sizes[i - 1])
      throw std::invalid_argument("sizes must be strictly increasing");
  }
  if (n_subsets == 0) throw std::invalid_argument("n_subsets must be positive");

  SignificanceCurve curve;
  curve.sizes = sizes;
  for (std::size_t si = 0; si < sizes.size(); ++si) {
    const auto subsets =
        random_subsets(data.cols, sizes[si], n_subsets, derive_seed(seed, si));
    std::vector<double> hs(subsets.size()), hk(subsets.size());
    parallel_for(subsets.size(), [&](std::size_t j) {
      const auto sub = select_columns(data, subsets[j]);
      const auto [a, b] = entropy_pair(multiplicities(sub));
      hs[j] = a;
      hk[j] = b;
    });
    const double cnt = static_cast<double>(subsets.size());
    double ms = 0.0, mk = 0.0;
    for (std::size_t j = 0; j < subsets.size(); ++j) {
      ms += hs[j];
      mk += hk[j];
    }
    ms /= cnt;
    mk /= cnt;
    double vs = 0.0, vk = 0.0;
    for (std::size_t j = 0; j < subsets.size(); ++j) {
      vs += (hs[j] - ms) * (hs[j] - ms);
      vk += (hk[j] - mk) * (hk[j] - mk);
    }
    const double denom = subsets.size() > 1 ? cnt - 1.0 : 1.0;
    curve.h_s_mean.push_back(ms);
    curve.h_s_std.push_back(std::sqrt(vs / denom));
    curve.h_k_mean.push_back(mk);
    curve.h_k_std.push_back(std::sqrt(vk / denom));
    curve.n_subsets_used.push_back(subsets.size());
  }
  return curve;
}

BoundCurve theoretical_bound(std::size_t m,
                             const std::vector<double>& h_s_grid) {
  if (m < 2) throw std::invalid_argument("bound needs at least 2 observations");

  const double log_m = std::log(static_cast<double>(m));
  std::vector<double> log_k(m);
  for (std::size_t k = 1; k <= m; ++k)
    log_k[k - 1] = std::log(static_cast<double>(k));

  // family points (H[s], H[K]) for mu sweeping [-1, 4]; under m_k ~ k^(-1-mu)
  // the occupation weights are q_k ~ k^(-mu), and H[K] is capped at H[s]
  // because the continuous relaxation admits m_k < 1
  const int n_mu = 512;
  std::vector<std::pair<double, double>> pts(n_mu);
  parallel_for(n_mu, [&](std::size_t i) {
    const double mu =
        -1.0 + 5.0 * static_cast<double>(i) / static_cast<double>(n_mu - 1);
    double w_max = -HUGE_VAL;
    for (std::size_t k = 0; k < m; ++k)
      w_max = std::max(w_max, -mu * log_k[k]);
    double z = 0.0;
    for (std::size_t k = 0; k < m; ++k) z += std::exp(-mu * log_k[k] - w_max);
    double h_s = 0.0, h_k = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double q = std::exp(-mu * log_k[k] - w_max) / z;
      if (q <= 0.0) continue;
      h_s -= q * (log_k[k] - log_m);
      h_k -= q * std::log(q);
    }
    pts[i] = {h_s, std::min(h_k, h_s)};
  });

  pts.push_back({0.0, 0.0});
  pts.push_back({log_m, 0.0});
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const auto& a, const auto& b) {
                          return a.first == b.first;
                        }),
            pts.end());

  BoundCurve bound;
  bound.h_s_grid = h_s_grid;
  bound.h_k_bound.resize(h_s_grid.size());
  for (std::size_t i = 0; i < h_s_grid.size(); ++i) {
    const double x = h_s_grid[i];
    if (x <= pts.front().first) {
      bound.h_k_bound[i] = 0.0;
      continue;
    }
    if (x >= pts.back().first) {
      bound.h_k_bound[i] = 0.0;
      continue;
    }
    auto it = std::lower_bound(
        pts.begin(), pts.end(), x,
        [](const auto& p, double v) { return p.first < v; });
    const auto& [x1, y1] = *it;
    if (x1 == x) {
      bound.h_k_bound[i] = y1;
      continue;
    }
    const auto& [x0, y0] = *(it - 1);
    bound.h_k_bound[i] = y0 + (y1 - y0) * (x - x0) / (x1 - x0);
  }
  return bound;
}

double interpolate_bound(const BoundCurve& bound, double h_s) {
  if (bound.h_s_grid.empty())
    throw std::invalid_argument("empty bound curve");
  const auto& xs = bound.h_s_grid;
  if (h_s <= xs.front()) return bound.h_k_bound.front();
  if (h_s >= xs.back()) return bound.h_k_bound.back();
  const auto it = std::lower_bound(xs.begin(), xs.end(), h_s);
  const std::size_t j = static_cast<std::size_t>(it - xs.begin());
  const double x0 = xs[j - 1], x1 = xs[j];
  const double y0 = bound.h_k_bound[j - 1], y1 = bound.h_k_bound[j];
  if (x1 == x0) return y1;
  return y0 + (y1 - y0) * (h_s - x0) / (x1 - x0);
}

ThresholdReport undersampling_threshold(const SignificanceCurve& curve,
                                        const BoundCurve& bound) {
  if (curve.sizes.empty())
    throw std::invalid_argument("empty significance curve");
  std::size_t best = 0;
  for (std::size_t i = 1; i < curve.h_k_mean.size(); ++i)
    if (curve.h_k_mean[i] > curve.h_k_mean[best]) best = i;

  ThresholdReport report;
  report.n_threshold = curve.sizes[best];
  report.beyond_tested = best + 1 == curve.sizes.size();
  report.h_k_at_threshold = curve.h_k_mean[best];
  report.bound_at_threshold =
      bound.h_s_grid.empty() ? 0.0
                             : interpolate_bound(bound, curve.h_s_mean[best]);
  if (report.beyond_tested)
    report.verdict = "H[K] still rising at size " +
                     std::to_string(report.n_threshold) +
                     "; undersampling threshold beyond tested sizes";
  else
    report.verdict = "undersampling threshold at size " +
                     std::to_string(report.n_threshold) +
                     "; larger subsystems are undersampled";
  return report;
}

}  // namespace critscan
