#pragma once
// Pairwise maximum-entropy models over binary spins:
//   U(s) = 1/2 sum_ij J_ij s_i s_j + sum_i h_i s_i,  P(s) ~ exp(U(s)/t)
// with exact enumeration for small n, Glauber dynamics sampling, regularized
// pseudolikelihood inference, and two-replica overlap diagnostics.

#include <cstdint>
#include <span>
#include <vector>

#include "critscan/configdist.hpp"
#include "critscan/types.hpp"

namespace critscan {

struct PairwiseModel {
  int n = 0;
  Matrix j;               // n x n, symmetric, zero diagonal
  std::vector<double> h;  // length n
};

// throws std::invalid_argument if shape, symmetry (1e-12), or diagonal is off
void validate(const PairwiseModel& model);

PairwiseModel zero_model(int n);

double utility(const PairwiseModel& model, std::span<const std::int8_t> spins);

// U(s) for every configuration, indexed by code; n <= 20
std::vector<double> enumerate_utilities(const PairwiseModel& model);

// full Boltzmann distribution at temperature t over all 2^n codes; n <= 20
ConfigDistribution exact_gibbs(const PairwiseModel& model, double t);

// P(s_i | s_rest) = (1 + s_i tanh(a_i / t)) / 2 with a_i the local field
double conditional_prob(const PairwiseModel& model,
                        std::span<const std::int8_t> spins, std::size_t i,
                        double t);

// Glauber dynamics from a uniform random start: one sweep = n single-spin
// attempts at uniformly random sites, flip accepted when W > u; records one
// configuration per sweep after n_equil sweeps
BinaryMatrix glauber_simulate(const PairwiseModel& model, double t,
                              std::size_t n_equil, std::size_t n_record,
                              std::uint64_t seed);

struct InferOptions {
  double lambda = 1e-4;       // L2 penalty weight on all parameters
  double grad_tol = 1e-6;     // max-norm convergence threshold
  std::size_t max_iters = 10000;
};

// Mean log-pseudolikelihood of conditional `row` minus lambda * |theta|^2.
// theta holds the couplings in slots k != row and the field in slot row;
// fills *grad when non-null. Exposed so the analytic gradient can be checked
// against finite differences.
double pml_objective(const BinaryMatrix& data, std::size_t row,
                     const std::vector<double>& theta, double lambda,
                     std::vector<double>* grad);

struct InferResult {
  PairwiseModel model;
  double max_grad_norm = 0.0;  // across rows, at termination
  std::size_t iterations = 0;  // worst row
  double objective = 0.0;      // summed penalized mean log-pseudolikelihood
};

// Regularized pseudolikelihood: each conditional is maximized independently
// by gradient ascent with backtracking line search, then J is symmetrized.
InferResult rpml_infer(const BinaryMatrix& data, const InferOptions& opts = {});

// Delta = sqrt(n) * RMS over i<j of (J_est - J_true)
double reconstruction_error(const PairwiseModel& estimate,
                            const PairwiseModel& truth);

// add symmetric Gaussian noise to the couplings, scaled so that
// reconstruction_error(perturbed, model) equals delta exactly
PairwiseModel perturb_model(const PairwiseModel& model, double delta,
                            std::uint64_t seed);

// Sherrington-Kirkpatrick draw: J_ij ~ N(0, 1/n) off-diagonal, h = 0
PairwiseModel sk_model(int n, std::uint64_t seed);

struct OverlapCurves {
  std::vector<double> t_grid;
  std::vector<double> r_q;     // Var(q) of the two-replica overlap
  std::vector<double> r_u;     // Var(U) / t^2 from replica one
  std::vector<double> q_mean;
  std::vector<double> u_mean;
  std::vector<int> frozen;     // 1 when a replica stopped moving entirely
  PeakResult q_peak, u_peak;
};

// two independent Glauber replicas per temperature; overlap
// q = (1/n) sum_i s1_i s2_i across recorded sweeps
OverlapCurves overlap_variance(const PairwiseModel& model,
                               const std::vector<double>& t_grid,
                               std::size_t n_equil, std::size_t n_record,
                               std::uint64_t seed);

}  // namespace critscan
