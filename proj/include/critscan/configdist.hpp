#pragma once
// Configuration distributions and the inverse-criticality machinery: a
// distribution P over binary configurations is reinterpreted as a Boltzmann
// ensemble at temperature 1 with utility U = ln P, the one-parameter family
// P_t ~ P^(1/t) is scanned in t, and the response R = t * dS/dt is used to
// locate the entropy-response peak.

#include <cstdint>
#include <vector>

#include "critscan/types.hpp"

namespace critscan {

struct ConfigDistribution {
  int n = 0;                     // spins per configuration
  std::vector<ConfigCode> codes;  // ascending, unique
  std::vector<double> probs;      // positive, sums to 1 within 1e-12
};

// throws std::invalid_argument when the invariants above are violated
void validate(const ConfigDistribution& dist);
ConfigDistribution make_distribution(int n, std::vector<ConfigCode> codes,
                                     std::vector<double> probs);

ConfigDistribution empirical_distribution(const BinaryMatrix& data);

// P_t(s) = P(s)^(1/t) / sum; computed in log space; t = 1 returns the input
// unchanged so the operating point is exact
ConfigDistribution rescale(const ConfigDistribution& dist, double t);

double shannon_entropy(const ConfigDistribution& dist);

// KL(p || q) in nats; requires support(p) within support(q)
double kl_divergence(const ConfigDistribution& p, const ConfigDistribution& q);

enum class ResponseEstimator {
  finite_difference,  // R = t * dS/dt via central difference with step dt * t
  variance            // R = Var_{P_t}(ln P) / t^2
};

struct ResponseOptions {
  double dt = 1e-3;  // relative step for the finite-difference estimator
  ResponseEstimator estimator = ResponseEstimator::finite_difference;
};

struct ResponseCurve {
  std::vector<double> t_grid;
  std::vector<double> r_values;
  std::vector<double> s_values;  // entropy S(t), in nats
  bool degenerate = false;       // single-configuration support: R = S = 0
};

ResponseCurve response_function(const ConfigDistribution& dist,
                                const std::vector<double>& t_grid,
                                const ResponseOptions& opts = {});

struct PeakResult {
  double t_max = 0.0;
  double r_max = 0.0;
  bool at_boundary = false;  // argmax on the first/last grid point
};

// grid argmax refined by a quadratic through the three surrounding points
PeakResult find_t_max(const ResponseCurve& curve);

// probabilities in descending order; ties broken by ascending code
std::vector<double> rank_spectrum(const ConfigDistribution& dist);

struct NetOrientation {
  std::vector<double> series;          // m_t = mean spin per row
  std::vector<std::size_t> histogram;  // counts by number of up spins (0..n)
  double mean_abs = 0.0;
};

NetOrientation net_orientation(const BinaryMatrix& data);

// log-spaced grid; default_t_grid() = 200 points spanning [0.2, 5]
std::vector<double> log_t_grid(double t_min, double t_max, int points);
std::vector<double> default_t_grid();

}  // namespace critscan
