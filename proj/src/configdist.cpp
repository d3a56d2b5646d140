#include "critscan/configdist.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "critscan/ingest.hpp"
#include "critscan/parallel.hpp"

namespace critscan {

namespace {

// entropy of P_t given l_i = ln P(s_i), evaluated with shifted exponentials
double entropy_at(const std::vector<double>& l, double t) {
  const double inv_t = 1.0 / t;
  double a_max = -HUGE_VAL;
  for (double li : l) a_max = std::max(a_max, li * inv_t);
  double z = 0.0;
  for (double li : l) z += std::exp(li * inv_t - a_max);
  const double log_z = std::log(z);
  double s = 0.0;
  for (double li : l) {
    const double a = li * inv_t - a_max;
    s -= std::exp(a) / z * (a - log_z);
  }
  return s;
}

// Var_{P_t}(ln P) / t^2
double variance_response(const std::vector<double>& l, double t) {
  const double inv_t = 1.0 / t;
  double a_max = -HUGE_VAL;
  for (double li : l) a_max = std::max(a_max, li * inv_t);
  double z = 0.0;
  for (double li : l) z += std::exp(li * inv_t - a_max);
  double mean = 0.0;
  for (double li : l) mean += std::exp(li * inv_t - a_max) / z * li;
  double var = 0.0;
  for (double li : l) {
    const double d = li - mean;
    var += std::exp(li * inv_t - a_max) / z * d * d;
  }
  return var * inv_t * inv_t;
}

void check_grid(const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw std::invalid_argument("temperature grid is empty");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0))
      throw std::invalid_argument("temperature grid must be positive");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1]))
      throw std::invalid_argument(
          "temperature grid must be strictly increasing");
  }
}

}  // namespace

void validate(const ConfigDistribution& dist) {
  if (dist.n < 1 || dist.n > 64)
    throw std::invalid_argument("distribution needs n between 1 and 64");
  if (dist.codes.empty())
    throw std::invalid_argument("distribution has empty support");
  if (dist.codes.size() != dist.probs.size())
    throw std::invalid_argument("codes/probs size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < dist.codes.size(); ++i) {
    if (dist.n < 64 && (dist.codes[i] >> dist.n) != 0)
      throw std::invalid_argument("code exceeds configuration space");
    if (i > 0 && !(dist.codes[i] > dist.codes[i - 1]))
      throw std::invalid_argument("codes must be ascending and unique");
    if (!(dist.probs[i] > 0.0) || !std::isfinite(dist.probs[i]))
      throw std::invalid_argument("probabilities must be positive and finite");
    sum += dist.probs[i];
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("probabilities sum to " + std::to_string(sum) +
                                ", expected 1");
}

ConfigDistribution make_distribution(int n, std::vector<ConfigCode> codes,
                                     std::vector<double> probs) {
  ConfigDistribution dist{n, std::move(codes), std::move(probs)};
  validate(dist);
  return dist;
}

ConfigDistribution empirical_distribution(const BinaryMatrix& data) {
  if (data.rows == 0 || data.cols == 0)
    throw std::invalid_argument("empirical distribution of empty data");
  std::vector<ConfigCode> obs(data.rows);
  for (std::size_t r = 0; r < data.rows; ++r)
    obs[r] = encode({data.row(r), data.cols});
  std::sort(obs.begin(), obs.end());

  ConfigDistribution dist;
  dist.n = static_cast<int>(data.cols);
  const double inv_m = 1.0 / static_cast<double>(data.rows);
  for (std::size_t i = 0; i < obs.size();) {
    std::size_t j = i;
    while (j < obs.size() && obs[j] == obs[i]) ++j;
    dist.codes.push_back(obs[i]);
    dist.probs.push_back(static_cast<double>(j - i) * inv_m);
    i = j;
  }
  return dist;
}

ConfigDistribution rescale(const ConfigDistribution& dist, double t) {
  validate(dist);
  if (!(t > 0.0)) throw std::invalid_argument("temperature must be positive");
  if (t == 1.0) return dist;

  const double inv_t = 1.0 / t;
  std::vector<double> a(dist.probs.size());
  double a_max = -HUGE_VAL;
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = std::log(dist.probs[i]) * inv_t;
    a_max = std::max(a_max, a[i]);
  }
  double z = 0.0;
  for (double ai : a) z += std::exp(ai - a_max);
  ConfigDistribution out;
  out.n = dist.n;
  out.codes = dist.codes;
  out.probs.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out.probs[i] = std::exp(a[i] - a_max) / z;
  return out;
}

double shannon_entropy(const ConfigDistribution& dist) {
  validate(dist);
  double s = 0.0;
  for (double p : dist.probs) s -= p * std::log(p);
  return s;
}

double kl_divergence(const ConfigDistribution& p, const ConfigDistribution& q) {
  validate(p);
  validate(q);
  if (p.n != q.n) throw std::invalid_argument("KL divergence: n mismatch");
  double kl = 0.0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < p.codes.size(); ++i) {
    while (j < q.codes.size() && q.codes[j] < p.codes[i]) ++j;
    if (j == q.codes.size() || q.codes[j] != p.codes[i])
      throw std::invalid_argument(
          "KL divergence undefined: support of p not contained in q");
    kl += p.probs[i] * (std::log(p.probs[i]) - std::log(q.probs[j]));
  }
  return kl;
}

ResponseCurve response_function(const ConfigDistribution& dist,
                                const std::vector<double>& t_grid,
                                const ResponseOptions& opts) {
  validate(dist);
  check_grid(t_grid);
  if (!(opts.dt > 0.0) || !(opts.dt < 0.5))
    throw std::invalid_argument("finite-difference step must be in (0, 0.5)");

  ResponseCurve curve;
  curve.t_grid = t_grid;
  curve.r_values.assign(t_grid.size(), 0.0);
  curve.s_values.assign(t_grid.size(), 0.0);
  if (dist.codes.size() == 1) {
    curve.degenerate = true;
    return curve;
  }

  std::vector<double> l(dist.probs.size());
  for (std::size_t i = 0; i < l.size(); ++i) l[i] = std::log(dist.probs[i]);

  parallel_for(t_grid.size(), [&](std::size_t i) {
    const double t = t_grid[i];
    curve.s_values[i] = entropy_at(l, t);
    if (opts.estimator == ResponseEstimator::finite_difference) {
      const double s_hi = entropy_at(l, t * (1.0 + opts.dt));
      const double s_lo = entropy_at(l, t * (1.0 - opts.dt));
      curve.r_values[i] = (s_hi - s_lo) / (2.0 * opts.dt);
    } else {
      curve.r_values[i] = variance_response(l, t);
    }
  });
  return curve;
}

PeakResult find_t_max(const ResponseCurve& curve) {
  const std::size_t m = curve.t_grid.size();
  if (m == 0 || curve.r_values.size() != m)
    throw std::invalid_argument("response curve is empty or inconsistent");

  std::size_t best = 0;
  for (std::size_t i = 1; i < m; ++i)
    if (curve.r_values[i] > curve.r_values[best]) best = i;

  PeakResult peak{curve.t_grid[best], curve.r_values[best],
                  best == 0 || best + 1 == m};
  if (peak.at_boundary || m < 3) return peak;

  // quadratic through the three points around the argmax
  const double x0 = curve.t_grid[best - 1], x1 = curve.t_grid[best],
               x2 = curve.t_grid[best + 1];
  const double y0 = curve.r_values[best - 1], y1 = curve.r_values[best],
               y2 = curve.r_values[best + 1];
  const double denom = (x0 - x1) * (x0 - x2) * (x1 - x2);
  const double a =
      (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom;
  const double b =
      (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) /
      denom;
  if (a < 0.0) {
    const double tv = -b / (2.0 * a);
    if (tv > x0 && tv < x2) {
      const double c =
          y1 - a * x1 * x1 - b * x1;  // parabola matches the middle point
      const double rv = a * tv * tv + b * tv + c;
      if (rv >= peak.r_max) {
        peak.t_max = tv;
        peak.r_max = rv;
      }
    }
  }
  return peak;
}

std::vector<double> rank_spectrum(const ConfigDistribution& dist) {
  validate(dist);
  std::vector<std::size_t> idx(dist.probs.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (dist.probs[a] != dist.probs[b]) return dist.probs[a] > dist.probs[b];
    return dist.codes[a] < dist.codes[b];
  });
  std::vector<double> out(idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r) out[r] = dist.probs[idx[r]];
  return out;
}

NetOrientation net_orientation(const BinaryMatrix& data) {
  if (data.rows == 0 || data.cols == 0)
    throw std::invalid_argument("net orientation of empty data");
  NetOrientation out;
  out.series.resize(data.rows);
  out.histogram.assign(data.cols + 1, 0);
  double abs_sum = 0.0;
  for (std::size_t r = 0; r < data.rows; ++r) {
    long long sum = 0;
    std::size_t ups = 0;
    for (std::size_t c = 0; c < data.cols; ++c) {
      sum += data.at(r, c);
      if (data.at(r, c) == 1) ++ups;
    }
    out.series[r] = static_cast<double>(sum) / static_cast<double>(data.cols);
    ++out.histogram[ups];
    abs_sum += std::abs(out.series[r]);
  }
  out.mean_abs = abs_sum / static_cast<double>(data.rows);
  return out;
}

std::vector<double> log_t_grid(double t_min, double t_max, int points) {
  if (!(t_min > 0.0) || !(t_max > t_min))
    throw std::invalid_argument("need 0 < t_min < t_max");
  if (points < 2) throw std::invalid_argument("grid needs at least 2 points");
  std::vector<double> grid(points);
  const double lo = std::log(t_min), hi = std::log(t_max);
  for (int i = 0; i < points; ++i)
    grid[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) /
                                static_cast<double>(points - 1));
  grid.front() = t_min;
  grid.back() = t_max;
  return grid;
}

std::vector<double> default_t_grid() { return log_t_grid(0.2, 5.0, 200); }

}  // namespace critscan
