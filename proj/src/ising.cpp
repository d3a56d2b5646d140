#include "critscan/ising.hpp"

#include <cmath>
#include <limits>

#include "critscan/parallel.hpp"

namespace critscan {

PairwiseModel ising_model(const LatticeSpec& spec, double coupling,
                          double field) {
  if (spec.side < 2) throw std::invalid_argument("lattice side must be >= 2");
  const int l = spec.side;
  PairwiseModel m = zero_model(l * l);
  auto site = [l](int x, int y) { return (y % l) * l + (x % l); };
  auto add_bond = [&](int i, int j) {
    m.j.at(i, j) += coupling;  // l = 2 wraps onto the same pair twice
    m.j.at(j, i) += coupling;
  };
  for (int y = 0; y < l; ++y)
    for (int x = 0; x < l; ++x) {
      const int i = y * l + x;
      if (x + 1 < l || spec.periodic) add_bond(i, site(x + 1, y));
      if (y + 1 < l || spec.periodic) add_bond(i, site(x, y + 1));
    }
  for (double& hi : m.h) hi = field;
  return m;
}

ResponseCurve exact_response_curve(const LatticeSpec& spec,
                                   const std::vector<double>& t_grid,
                                   double coupling) {
  if (t_grid.empty()) throw std::invalid_argument("temperature grid is empty");
  for (std::size_t i = 0; i < t_grid.size(); ++i)
    if (!(t_grid[i] > 0.0) || (i > 0 && !(t_grid[i] > t_grid[i - 1])))
      throw std::invalid_argument(
          "temperature grid must be positive and strictly increasing");
  if (spec.side * spec.side > 20)
    throw std::invalid_argument("exact curve limited to side^2 <= 20 spins");

  const auto u = enumerate_utilities(ising_model(spec, coupling));
  ResponseCurve curve;
  curve.t_grid = t_grid;
  curve.r_values.resize(t_grid.size());
  curve.s_values.resize(t_grid.size());
  parallel_for(t_grid.size(), [&](std::size_t k) {
    const double beta = 1.0 / t_grid[k];
    double a_max = -HUGE_VAL;
    for (double ui : u) a_max = std::max(a_max, ui * beta);
    double z = 0.0;
    for (double ui : u) z += std::exp(ui * beta - a_max);
    double mean = 0.0;
    for (double ui : u) mean += std::exp(ui * beta - a_max) / z * ui;
    double var = 0.0, s = 0.0;
    const double log_z = std::log(z);
    for (double ui : u) {
      const double p = std::exp(ui * beta - a_max) / z;
      const double d = ui - mean;
      var += p * d * d;
      s -= p * (ui * beta - a_max - log_z);
    }
    curve.r_values[k] = var * beta * beta;
    curve.s_values[k] = s;
  });
  return curve;
}

KldCurve kld_benchmark(const LatticeSpec& spec, double t_crit,
                       const std::vector<double>& x_grid) {
  if (!(t_crit > 0.0))
    throw std::invalid_argument("critical temperature must be positive");
  for (double x : x_grid)
    if (!(x < 1.0))
      throw std::invalid_argument("relative distance must satisfy x < 1");

  const auto p_crit = exact_gibbs(ising_model(spec), t_crit);
  KldCurve curve;
  curve.t_crit = t_crit;
  curve.x_grid = x_grid;
  curve.kld.resize(x_grid.size());
  parallel_for(x_grid.size(), [&](std::size_t i) {
    curve.kld[i] = kl_divergence(p_crit, rescale(p_crit, 1.0 - x_grid[i]));
  });
  return curve;
}

BenchmarkReport benchmark_compare(const LatticeSpec& spec,
                                  double t_max_empirical,
                                  double empirical_kld) {
  if (!(t_max_empirical > 0.0))
    throw std::invalid_argument("empirical peak temperature must be positive");

  const auto curve = exact_response_curve(spec, default_t_grid());
  const auto peak = find_t_max(curve);

  BenchmarkReport report;
  report.t_crit = peak.t_max;
  // same relative displacement as the empirical peak seen from the operating
  // point at t = 1: x = (t_max - 1) / t_max
  report.x = (t_max_empirical - 1.0) / t_max_empirical;
  const auto p_crit = exact_gibbs(ising_model(spec), peak.t_max);
  report.benchmark_kld =
      kl_divergence(p_crit, rescale(p_crit, 1.0 - report.x));
  report.empirical_kld = empirical_kld;
  report.ratio = report.benchmark_kld > 0.0
                     ? empirical_kld / report.benchmark_kld
                     : std::numeric_limits<double>::quiet_NaN();
  return report;
}

std::vector<double> default_x_grid() {
  std::vector<double> grid(60);
  for (int i = 0; i < 60; ++i)
    grid[i] = -0.5 + static_cast<double>(i) / 59.0;
  return grid;
}

}  // namespace critscan
