#pragma once
// Higher-level scans built on the response machinery: peak temperature
// versus subsystem size and correlation, entropy-energy linearity, the
// critical exponent of the response decay, and sliding-window stationarity.

#include <cstdint>
#include <vector>

#include "critscan/configdist.hpp"
#include "critscan/types.hpp"

namespace critscan {

struct ScalingFit {
  double t_inf = 0.0;     // extrapolated peak temperature
  double amplitude = 0.0; // b in t(n) = t_inf - b * phi_c(n)
  double rate = 0.0;      // c
  double rss = 0.0;
  bool valid = false;
};

struct TmaxScaling {
  std::vector<std::size_t> sizes;
  std::vector<double> t_mean, t_std;
  std::vector<std::size_t> used, skipped;  // subsets kept / dropped per size
  ScalingFit exp_fit;    // phi_c(n) = exp(-c n)
  ScalingFit power_fit;  // phi_c(n) = n^(-c)
};

// mean peak temperature over random column subsets of each size; subsets with
// a degenerate distribution or a boundary peak are skipped. Fits need at
// least 3 sizes.
TmaxScaling tmax_vs_size(const BinaryMatrix& data,
                         const std::vector<std::size_t>& sizes,
                         std::size_t n_subsets, std::uint64_t seed,
                         const std::vector<double>& t_grid);

struct CorrelationScan {
  std::vector<double> correlation;  // mean pairwise correlation per subset
  std::vector<double> t_max;
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
  bool fit_valid = false;  // needs at least 2 usable subsets
  std::size_t skipped = 0;
};

// peak temperature against mean correlation over random size-n subsets;
// correlations come from `returns` when given, otherwise from the spins
CorrelationScan tmax_vs_correlation(const BinaryMatrix& spins,
                                    const ReturnMatrix* returns,
                                    std::size_t n, std::size_t n_subsets,
                                    std::uint64_t seed,
                                    const std::vector<double>& t_grid);

struct EntropyEnergyFit {
  std::vector<double> bin_x;  // bin centers in -U = -ln P
  std::vector<double> bin_s;  // ln(number of distinct configurations in bin)
  double slope = 0.0, intercept = 0.0;
  double rel_nonlinearity = 0.0;  // RMS residual / range of fitted values
  bool degenerate = false;        // too few bins or zero span
};

// microcanonical entropy versus energy; lo_frac/hi_frac restrict the fit to
// a fraction of the -U span
EntropyEnergyFit entropy_energy_curve(const ConfigDistribution& dist,
                                      int n_bins, double lo_frac = 0.0,
                                      double hi_frac = 1.0);

struct ExponentFit {
  double exponent = 0.0;
  double std_error = 0.0;
  double t_max = 0.0;
  std::size_t points = 0;
};

// log-log slope of R against eps = (t - t_max) / t_max on the high side of
// the peak, restricted to eps in [eps_lo, eps_hi]
ExponentFit critical_exponent(const ResponseCurve& curve, double eps_lo = 0.05,
                              double eps_hi = 0.3);

struct SlidingResult {
  std::vector<std::size_t> window_end;  // row index past the window
  std::vector<double> t_max;            // NaN where invalid
  std::vector<int> valid;
  std::size_t window = 0, step = 0;
};

// peak temperature over sliding row windows; window = 0 selects 2^(n+2)
// rows, the resolution floor for n spins
SlidingResult sliding_tmax(const BinaryMatrix& data, std::size_t window,
                           std::size_t step,
                           const std::vector<double>& t_grid);

}  // namespace critscan
