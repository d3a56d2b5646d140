#pragma once
// Square-lattice Ising benchmark: an L x L ferromagnet with periodic
// boundaries expressed as a PairwiseModel, its exact response curve from full
// enumeration, and the KL-divergence benchmark that calibrates how far an
// empirical operating point sits from the response peak.

#include <cstdint>
#include <vector>

#include "critscan/configdist.hpp"
#include "critscan/maxent.hpp"
#include "critscan/types.hpp"

namespace critscan {

struct LatticeSpec {
  int side = 3;
  bool periodic = true;
};

// nearest-neighbour couplings of strength `coupling` (L = 2 wraps both ways,
// doubling the bond), uniform field
PairwiseModel ising_model(const LatticeSpec& spec, double coupling = 1.0,
                          double field = 0.0);

// exact S(t) and R(t) = Var(U) / t^2 by enumeration; side^2 <= 20
ResponseCurve exact_response_curve(const LatticeSpec& spec,
                                   const std::vector<double>& t_grid,
                                   double coupling = 1.0);

struct KldCurve {
  std::vector<double> x_grid;  // relative distance x = (t_crit - t) / t_crit
  std::vector<double> kld;     // KL(P_crit || rescale(P_crit, 1 - x))
  double t_crit = 0.0;
};

// divergence accumulated when the operating temperature misses t_crit by a
// relative distance x; x = 0 gives 0 by construction
KldCurve kld_benchmark(const LatticeSpec& spec, double t_crit,
                       const std::vector<double>& x_grid);

struct BenchmarkReport {
  double t_crit = 0.0;         // peak of the exact lattice response
  double x = 0.0;              // relative distance of the empirical peak from 1
  double benchmark_kld = 0.0;  // lattice divergence at that distance
  double empirical_kld = 0.0;
  double ratio = 0.0;          // empirical / benchmark
};

// compares an empirical peak (found at temperature t_max_empirical with
// divergence empirical_kld from the operating point) against the lattice
// yardstick at the same relative distance
BenchmarkReport benchmark_compare(const LatticeSpec& spec,
                                  double t_max_empirical,
                                  double empirical_kld);

// 60 points spanning [-0.5, 0.5]
std::vector<double> default_x_grid();

}  // namespace critscan
