#include "critscan/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "critscan/ingest.hpp"
#include "critscan/parallel.hpp"
#include "critscan/rng.hpp"

namespace critscan {

namespace {

struct LinearFit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0, rss = 0.0;
};

LinearFit ols(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t k = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.rss = std::max(0.0, syy - fit.slope * sxy);
  fit.r2 = syy > 0.0 ? 1.0 - fit.rss / syy : 0.0;
  return fit;
}

// least squares of t ~ t_inf - b * phi for fixed phi values
bool profile_fit(const std::vector<double>& phi, const std::vector<double>& t,
                 double* t_inf, double* b, double* rss) {
  const std::size_t k = phi.size();
  double s1 = static_cast<double>(k), sp = 0.0, spp = 0.0, st = 0.0,
         spt = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sp += phi[i];
    spp += phi[i] * phi[i];
    st += t[i];
    spt += phi[i] * t[i];
  }
  const double det = s1 * spp - sp * sp;
  if (!(std::abs(det) > 1e-14 * std::max(1.0, spp))) return false;
  // normal equations for t = a0 + a1 * phi; then b = -a1
  const double a0 = (spp * st - sp * spt) / det;
  const double a1 = (s1 * spt - sp * st) / det;
  double r = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double e = t[i] - (a0 + a1 * phi[i]);
    r += e * e;
  }
  *t_inf = a0;
  *b = -a1;
  *rss = r;
  return true;
}

ScalingFit fit_family(const std::vector<double>& n,
                      const std::vector<double>& t, bool exponential) {
  ScalingFit best;
  if (n.size() < 3) return best;
  best.rss = HUGE_VAL;

  auto rss_at = [&](double c) {
    std::vector<double> phi(n.size());
    for (std::size_t i = 0; i < n.size(); ++i)
      phi[i] = exponential ? std::exp(-c * n[i]) : std::pow(n[i], -c);
    double t_inf, b, rss;
    if (!profile_fit(phi, t, &t_inf, &b, &rss)) return HUGE_VAL;
    return rss;
  };

  const double starts_exp[] = {0.05, 0.15, 0.5, 1.5, 5.0};
  const double starts_pow[] = {0.25, 0.5, 1.0, 2.0, 4.0};
  double best_c = 0.0;
  bool found = false;
  for (double c0 : exponential ? starts_exp : starts_pow) {
    // golden-section refinement on log c around each start
    double lo = std::log(c0 / 4.0), hi = std::log(c0 * 4.0);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = hi - gr * (hi - lo), b2 = lo + gr * (hi - lo);
    double fa = rss_at(std::exp(a)), fb = rss_at(std::exp(b2));
    for (int it = 0; it < 60; ++it) {
      if (fa < fb) {
        hi = b2;
        b2 = a;
        fb = fa;
        a = hi - gr * (hi - lo);
        fa = rss_at(std::exp(a));
      } else {
        lo = a;
        a = b2;
        fa = fb;
        b2 = lo + gr * (hi - lo);
        fb = rss_at(std::exp(b2));
      }
    }
    const double c = std::exp(0.5 * (lo + hi));
    const double r = rss_at(c);
    if (r < best.rss) {
      best.rss = r;
      best_c = c;
      found = true;
    }
  }
  if (!found || !std::isfinite(best.rss)) return best;

  std::vector<double> phi(n.size());
  for (std::size_t i = 0; i < n.size(); ++i)
    phi[i] = exponential ? std::exp(-best_c * n[i]) : std::pow(n[i], -best_c);
  double t_inf, b, rss;
  if (!profile_fit(phi, t, &t_inf, &b, &rss)) return best;
  best.t_inf = t_inf;
  best.amplitude = b;
  best.rate = best_c;
  best.rss = rss;
  best.valid = true;
  return best;
}

}  // namespace

TmaxScaling tmax_vs_size(const BinaryMatrix& data,
                         const std::vector<std::size_t>& sizes,
                         std::size_t n_subsets, std::uint64_t seed,
                         const std::vector<double>& t_grid) {
  if (sizes.empty()) throw std::invalid_argument("no subsystem sizes given");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0 || sizes[i] > data.cols)
      throw std::invalid_argument("subsystem size out of range");
    if (i > 0 && sizes[i] <= sizes[i - 1])
      throw std::invalid_argument("sizes must be strictly increasing");
  }

  TmaxScaling out;
  out.sizes = sizes;
  for (std::size_t si = 0; si < sizes.size(); ++si) {
    const auto subsets =
        random_subsets(data.cols, sizes[si], n_subsets, derive_seed(seed, si));
    std::vector<double> tm(subsets.size(),
                           std::numeric_limits<double>::quiet_NaN());
    parallel_for(subsets.size(), [&](std::size_t j) {
      const auto dist = empirical_distribution(select_columns(data, subsets[j]));
      const auto curve = response_function(dist, t_grid);
      if (curve.degenerate) return;
      const auto peak = find_t_max(curve);
      if (!peak.at_boundary) tm[j] = peak.t_max;
    });
    double sum = 0.0;
    std::size_t used = 0;
    for (double v : tm)
      if (std::isfinite(v)) {
        sum += v;
        ++used;
      }
    const double mean = used > 0 ? sum / static_cast<double>(used) : 0.0;
    double var = 0.0;
    for (double v : tm)
      if (std::isfinite(v)) var += (v - mean) * (v - mean);
    out.t_mean.push_back(mean);
    out.t_std.push_back(used > 1 ? std::sqrt(var / (used - 1.0)) : 0.0);
    out.used.push_back(used);
    out.skipped.push_back(subsets.size() - used);
  }

  std::vector<double> ns, ts;
  for (std::size_t i = 0; i < out.sizes.size(); ++i)
    if (out.used[i] > 0) {
      ns.push_back(static_cast<double>(out.sizes[i]));
      ts.push_back(out.t_mean[i]);
    }
  out.exp_fit = fit_family(ns, ts, true);
  out.power_fit = fit_family(ns, ts, false);
  return out;
}

CorrelationScan tmax_vs_correlation(const BinaryMatrix& spins,
                                    const ReturnMatrix* returns,
                                    std::size_t n, std::size_t n_subsets,
                                    std::uint64_t seed,
                                    const std::vector<double>& t_grid) {
  if (n < 2 || n > spins.cols)
    throw std::invalid_argument("subset size out of range");
  if (returns && returns->returns.cols != spins.cols)
    throw std::invalid_argument("returns/spins column mismatch");

  ReturnMatrix spin_returns;  // spin values reinterpreted for correlations
  if (!returns) {
    spin_returns.returns = Matrix(spins.rows, spins.cols);
    for (std::size_t k = 0; k < spins.spins.size(); ++k)
      spin_returns.returns.values[k] = static_cast<double>(spins.spins[k]);
    returns = &spin_returns;
  }

  const auto subsets = random_subsets(spins.cols, n, n_subsets, seed);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> corr(subsets.size(), nan), tmax(subsets.size(), nan);
  parallel_for(subsets.size(), [&](std::size_t j) {
    const auto dist = empirical_distribution(select_columns(spins, subsets[j]));
    const auto curve = response_function(dist, t_grid);
    if (curve.degenerate) return;
    const auto peak = find_t_max(curve);
    if (peak.at_boundary) return;
    try {
      corr[j] = mean_correlation(*returns, subsets[j]);
    } catch (const std::invalid_argument&) {
      return;  // constant column in this subset
    }
    tmax[j] = peak.t_max;
  });

  CorrelationScan out;
  for (std::size_t j = 0; j < subsets.size(); ++j)
    if (std::isfinite(corr[j]) && std::isfinite(tmax[j])) {
      out.correlation.push_back(corr[j]);
      out.t_max.push_back(tmax[j]);
    }
  out.skipped = subsets.size() - out.correlation.size();
  if (out.correlation.size() >= 2) {
    const LinearFit fit = ols(out.correlation, out.t_max);
    if (std::isfinite(fit.slope)) {
      out.slope = fit.slope;
      out.intercept = fit.intercept;
      out.r2 = fit.r2;
      out.fit_valid = true;
    }
  }
  return out;
}

EntropyEnergyFit entropy_energy_curve(const ConfigDistribution& dist,
                                      int n_bins, double lo_frac,
                                      double hi_frac) {
  validate(dist);
  if (n_bins < 2) throw std::invalid_argument("need at least 2 bins");
  if (!(lo_frac >= 0.0) || !(hi_frac <= 1.0) || !(lo_frac < hi_frac))
    throw std::invalid_argument("need 0 <= lo_frac < hi_frac <= 1");

  std::vector<double> x(dist.probs.size());  // -U = -ln P
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = -std::log(dist.probs[i]);
  const auto [mn_it, mx_it] = std::minmax_element(x.begin(), x.end());
  const double span = *mx_it - *mn_it;

  EntropyEnergyFit out;
  if (span <= 0.0) {
    out.degenerate = true;
    return out;
  }
  const double lo = *mn_it + lo_frac * span;
  const double hi = *mn_it + hi_frac * span;
  const double width = (hi - lo) / static_cast<double>(n_bins);

  std::vector<std::size_t> counts(n_bins, 0);
  for (double xi : x) {
    if (xi < lo || xi > hi) continue;
    int b = static_cast<int>((xi - lo) / width);
    if (b >= n_bins) b = n_bins - 1;
    ++counts[b];
  }
  for (int b = 0; b < n_bins; ++b)
    if (counts[b] > 0) {
      out.bin_x.push_back(lo + (b + 0.5) * width);
      out.bin_s.push_back(std::log(static_cast<double>(counts[b])));
    }
  if (out.bin_x.size() < 3) {
    out.degenerate = true;
    return out;
  }

  const LinearFit fit = ols(out.bin_x, out.bin_s);
  out.slope = fit.slope;
  out.intercept = fit.intercept;
  double f_min = HUGE_VAL, f_max = -HUGE_VAL;
  for (double xi : out.bin_x) {
    const double f = fit.intercept + fit.slope * xi;
    f_min = std::min(f_min, f);
    f_max = std::max(f_max, f);
  }
  const double range = f_max - f_min;
  if (!(range > 0.0)) {
    out.degenerate = true;
    return out;
  }
  out.rel_nonlinearity =
      std::sqrt(fit.rss / static_cast<double>(out.bin_x.size())) / range;
  return out;
}

ExponentFit critical_exponent(const ResponseCurve& curve, double eps_lo,
                              double eps_hi) {
  if (!(eps_lo > 0.0) || !(eps_hi > eps_lo))
    throw std::invalid_argument("need 0 < eps_lo < eps_hi");
  const auto peak = find_t_max(curve);
  if (peak.at_boundary)
    throw std::invalid_argument(
        "response peak sits on the grid boundary; exponent undefined");

  std::vector<double> le, lr;
  for (std::size_t i = 0; i < curve.t_grid.size(); ++i) {
    const double eps = (curve.t_grid[i] - peak.t_max) / peak.t_max;
    if (eps < eps_lo || eps > eps_hi) continue;
    if (!(curve.r_values[i] > 0.0)) continue;
    le.push_back(std::log(eps));
    lr.push_back(std::log(curve.r_values[i]));
  }
  if (le.size() < 2)
    throw numeric_error("too few grid points in the scaling window");

  const LinearFit fit = ols(le, lr);
  ExponentFit out;
  out.exponent = fit.slope;
  out.t_max = peak.t_max;
  out.points = le.size();
  if (le.size() > 2) {
    double sxx = 0.0, mx = 0.0;
    for (double v : le) mx += v;
    mx /= static_cast<double>(le.size());
    for (double v : le) sxx += (v - mx) * (v - mx);
    out.std_error = std::sqrt(
        fit.rss / static_cast<double>(le.size() - 2) / sxx);
  }
  return out;
}

SlidingResult sliding_tmax(const BinaryMatrix& data, std::size_t window,
                           std::size_t step,
                           const std::vector<double>& t_grid) {
  if (data.rows == 0 || data.cols == 0)
    throw std::invalid_argument("empty spin data");
  if (step == 0) throw std::invalid_argument("step must be positive");
  if (window == 0) {
    if (data.cols + 2 > 40)
      throw std::invalid_argument("default window 2^(n+2) too large");
    window = std::size_t{1} << (data.cols + 2);
  }
  if (window > data.rows)
    throw std::invalid_argument("window exceeds number of rows");

  SlidingResult out;
  out.window = window;
  out.step = step;
  const std::size_t count = (data.rows - window) / step + 1;
  out.window_end.resize(count);
  out.t_max.assign(count, std::numeric_limits<double>::quiet_NaN());
  out.valid.assign(count, 0);

  parallel_for(count, [&](std::size_t w) {
    const std::size_t start = w * step;
    BinaryMatrix sub(window, data.cols);
    sub.labels = data.labels;
    std::copy(data.row(start), data.row(start) + window * data.cols,
              sub.spins.begin());
    out.window_end[w] = start + window;
    const auto dist = empirical_distribution(sub);
    const auto curve = response_function(dist, t_grid);
    if (curve.degenerate) return;
    const auto peak = find_t_max(curve);
    if (peak.at_boundary) return;
    out.t_max[w] = peak.t_max;
    out.valid[w] = 1;
  });
  return out;
}

}  // namespace critscan
