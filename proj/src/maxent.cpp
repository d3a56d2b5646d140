#include "critscan/maxent.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "critscan/parallel.hpp"
#include "critscan/rng.hpp"

namespace critscan {

namespace {

constexpr int k_enum_limit = 20;

// ln(2 cosh a) without overflow
double ln2cosh(double a) {
  const double x = std::abs(a);
  return x + std::log1p(std::exp(-2.0 * x));
}

void check_spins(const BinaryMatrix& data) {
  if (data.rows == 0 || data.cols == 0)
    throw std::invalid_argument("empty spin data");
  for (std::int8_t s : data.spins)
    if (s != 1 && s != -1)
      throw std::invalid_argument("spin data must be -1 or +1");
}

double exact_utility(const PairwiseModel& m,
                     const std::vector<std::int8_t>& s) {
  double u = 0.0;
  for (int i = 0; i < m.n; ++i) {
    double f = m.h[i];
    for (int j = 0; j < m.n; ++j) f += 0.5 * m.j.at(i, j) * s[j];
    u += s[i] * f;
  }
  return u;
}

// shared evaluator for the row-wise penalized pseudolikelihood
double pml_core(const std::vector<double>& sd, std::size_t m, int n,
                std::size_t row, const std::vector<double>& th, double lambda,
                std::vector<double>* grad) {
  double obj = 0.0;
  if (grad) std::fill(grad->begin(), grad->end(), 0.0);
  for (std::size_t t = 0; t < m; ++t) {
    const double* st = sd.data() + t * n;
    double a = th[row];
    for (int k = 0; k < n; ++k)
      if (static_cast<std::size_t>(k) != row) a += th[k] * st[k];
    const double y = st[row];
    obj += y * a - ln2cosh(a);
    if (grad) {
      const double r = y - std::tanh(a);
      for (int k = 0; k < n; ++k)
        (*grad)[k] += r * (static_cast<std::size_t>(k) == row ? 1.0 : st[k]);
    }
  }
  const double inv_m = 1.0 / static_cast<double>(m);
  obj *= inv_m;
  double pen = 0.0;
  for (double v : th) pen += v * v;
  obj -= lambda * pen;
  if (grad)
    for (int k = 0; k < n; ++k)
      (*grad)[k] = (*grad)[k] * inv_m - 2.0 * lambda * th[k];
  return obj;
}

std::vector<double> spins_as_doubles(const BinaryMatrix& data) {
  std::vector<double> sd(data.spins.size());
  for (std::size_t k = 0; k < sd.size(); ++k)
    sd[k] = static_cast<double>(data.spins[k]);
  return sd;
}

}  // namespace

double pml_objective(const BinaryMatrix& data, std::size_t row,
                     const std::vector<double>& theta, double lambda,
                     std::vector<double>* grad) {
  check_spins(data);
  if (row >= data.cols) throw std::invalid_argument("row index out of range");
  if (theta.size() != data.cols)
    throw std::invalid_argument("theta must have one slot per column");
  if (grad) grad->assign(data.cols, 0.0);
  return pml_core(spins_as_doubles(data), data.rows,
                  static_cast<int>(data.cols), row, theta, lambda, grad);
}

void validate(const PairwiseModel& model) {
  if (model.n < 1) throw std::invalid_argument("model needs n >= 1");
  const std::size_t n = static_cast<std::size_t>(model.n);
  if (model.j.rows != n || model.j.cols != n)
    throw std::invalid_argument("coupling matrix must be n x n");
  if (model.h.size() != n)
    throw std::invalid_argument("field vector must have length n");
  for (std::size_t i = 0; i < n; ++i) {
    if (model.j.at(i, i) != 0.0)
      throw std::invalid_argument("coupling diagonal must be zero");
    for (std::size_t k = i + 1; k < n; ++k)
      if (std::abs(model.j.at(i, k) - model.j.at(k, i)) > 1e-12)
        throw std::invalid_argument("coupling matrix must be symmetric");
  }
  for (double v : model.j.values)
    if (!std::isfinite(v))
      throw std::invalid_argument("couplings must be finite");
  for (double v : model.h)
    if (!std::isfinite(v)) throw std::invalid_argument("fields must be finite");
}

PairwiseModel zero_model(int n) {
  if (n < 1) throw std::invalid_argument("model needs n >= 1");
  PairwiseModel m;
  m.n = n;
  m.j = Matrix(n, n);
  m.h.assign(n, 0.0);
  return m;
}

double utility(const PairwiseModel& model, std::span<const std::int8_t> spins) {
  if (spins.size() != static_cast<std::size_t>(model.n))
    throw std::invalid_argument("spin vector length mismatch");
  double u = 0.0;
  for (int i = 0; i < model.n; ++i) {
    double pair = 0.0;
    for (int j = 0; j < model.n; ++j) pair += model.j.at(i, j) * spins[j];
    u += spins[i] * (0.5 * pair + model.h[i]);
  }
  return u;
}

std::vector<double> enumerate_utilities(const PairwiseModel& model) {
  validate(model);
  if (model.n > k_enum_limit)
    throw std::invalid_argument("enumeration limited to n <= 20");
  const int n = model.n;
  const std::size_t size = std::size_t{1} << n;

  std::vector<std::int8_t> s(n, -1);
  std::vector<double> f(n);  // local fields: f_i = sum_j J_ij s_j + h_i
  auto refresh = [&] {
    for (int i = 0; i < n; ++i) {
      double fi = model.h[i];
      for (int j = 0; j < n; ++j) fi += model.j.at(i, j) * s[j];
      f[i] = fi;
    }
  };
  refresh();

  std::vector<double> u(size);
  double cur = exact_utility(model, s);
  u[0] = cur;  // Gray code 0 = all spins down
  for (std::size_t k = 1; k < size; ++k) {
    const int bit = std::countr_zero(k);
    cur += -2.0 * s[bit] * f[bit];
    s[bit] = static_cast<std::int8_t>(-s[bit]);
    for (int j = 0; j < n; ++j) f[j] += 2.0 * model.j.at(j, bit) * s[bit];
    if ((k & 0xfff) == 0) {  // cap incremental drift on long enumerations
      refresh();
      cur = exact_utility(model, s);
    }
    u[k ^ (k >> 1)] = cur;
  }
  return u;
}

ConfigDistribution exact_gibbs(const PairwiseModel& model, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("temperature must be positive");
  const auto u = enumerate_utilities(model);
  const double inv_t = 1.0 / t;
  double a_max = -HUGE_VAL;
  for (double ui : u) a_max = std::max(a_max, ui * inv_t);
  double z = 0.0;
  for (double ui : u) z += std::exp(ui * inv_t - a_max);

  ConfigDistribution dist;
  dist.n = model.n;
  dist.codes.resize(u.size());
  dist.probs.resize(u.size());
  for (std::size_t c = 0; c < u.size(); ++c) {
    dist.codes[c] = c;
    dist.probs[c] = std::exp(u[c] * inv_t - a_max) / z;
  }
  return dist;
}

double conditional_prob(const PairwiseModel& model,
                        std::span<const std::int8_t> spins, std::size_t i,
                        double t) {
  if (!(t > 0.0)) throw std::invalid_argument("temperature must be positive");
  if (spins.size() != static_cast<std::size_t>(model.n) || i >= spins.size())
    throw std::invalid_argument("bad spin vector or site index");
  double a = model.h[i];
  for (int j = 0; j < model.n; ++j)
    a += model.j.at(i, j) * spins[j];  // zero diagonal excludes site i
  return 0.5 * (1.0 + spins[i] * std::tanh(a / t));
}

BinaryMatrix glauber_simulate(const PairwiseModel& model, double t,
                              std::size_t n_equil, std::size_t n_record,
                              std::uint64_t seed) {
  validate(model);
  if (!(t > 0.0)) throw std::invalid_argument("temperature must be positive");
  if (n_record == 0) throw std::invalid_argument("must record at least 1 sweep");
  const int n = model.n;
  Rng rng(seed);

  std::vector<std::int8_t> s(n);
  for (auto& si : s) si = static_cast<std::int8_t>(rng.spin());
  std::vector<double> f(n);
  for (int i = 0; i < n; ++i) {
    double fi = model.h[i];
    for (int j = 0; j < n; ++j) fi += model.j.at(i, j) * s[j];
    f[i] = fi;
  }

  BinaryMatrix out(n_record, n);
  out.labels.resize(n);
  for (int i = 0; i < n; ++i) out.labels[i] = "s" + std::to_string(i + 1);

  const std::size_t total = n_equil + n_record;
  for (std::size_t sweep = 0; sweep < total; ++sweep) {
    for (int a = 0; a < n; ++a) {
      const std::size_t i = rng.below(static_cast<std::uint64_t>(n));
      const double w = 0.5 * (1.0 - s[i] * std::tanh(f[i] / t));
      const double u = rng.uniform01();
      if (w > u) {
        s[i] = static_cast<std::int8_t>(-s[i]);
        for (int j = 0; j < n; ++j) f[j] += 2.0 * model.j.at(j, i) * s[i];
      }
    }
    if (sweep >= n_equil) {
      std::copy(s.begin(), s.end(), out.row(sweep - n_equil));
    }
  }
  return out;
}

InferResult rpml_infer(const BinaryMatrix& data, const InferOptions& opts) {
  check_spins(data);
  const int n = static_cast<int>(data.cols);
  const std::size_t m = data.rows;
  if (n < 2) throw std::invalid_argument("inference needs at least 2 columns");
  if (!(opts.lambda >= 0.0))
    throw std::invalid_argument("lambda must be non-negative");

  const std::vector<double> sd = spins_as_doubles(data);

  Matrix j_rows(n, n);  // row i holds couplings from conditional i
  std::vector<double> h(n, 0.0);
  std::vector<double> row_grad(n, 0.0), row_obj(n, 0.0);
  std::vector<std::size_t> row_iters(n, 0);
  std::vector<int> row_fail(n, 0);

  parallel_for(static_cast<std::size_t>(n), [&](std::size_t row) {
    const int i = static_cast<int>(row);
    std::vector<double> th(n, 0.0), g(n), th_try(n);

    auto eval = [&](const std::vector<double>& p, std::vector<double>* grad) {
      return pml_core(sd, m, n, row, p, opts.lambda, grad);
    };

    double obj = eval(th, &g);
    double step = 1.0;
    std::size_t it = 0;
    double gnorm = 0.0;
    for (; it < opts.max_iters; ++it) {
      gnorm = 0.0;
      double gg = 0.0;
      for (double v : g) {
        gnorm = std::max(gnorm, std::abs(v));
        gg += v * v;
      }
      if (gnorm < opts.grad_tol) break;
      // backtracking ascent step with an Armijo condition
      bool moved = false;
      while (step >= 1e-14) {
        for (int k = 0; k < n; ++k) th_try[k] = th[k] + step * g[k];
        const double obj_try = eval(th_try, nullptr);
        if (obj_try >= obj + 1e-4 * step * gg) {
          th.swap(th_try);
          obj = eval(th, &g);
          step = std::min(step * 1.5, 1e3);
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;  // step underflow; gnorm reported below
    }
    row_grad[row] = gnorm;
    row_obj[row] = obj;
    row_iters[row] = it;
    row_fail[row] = gnorm >= opts.grad_tol ? 1 : 0;
    for (int k = 0; k < n; ++k)
      if (k != i) j_rows.at(row, k) = th[k];
    h[row] = th[i];
  });

  double worst_grad = 0.0, total_obj = 0.0;
  std::size_t worst_iters = 0;
  bool failed = false;
  for (int i = 0; i < n; ++i) {
    worst_grad = std::max(worst_grad, row_grad[i]);
    worst_iters = std::max(worst_iters, row_iters[i]);
    total_obj += row_obj[i];
    if (row_fail[i]) failed = true;
  }
  if (failed)
    throw numeric_error(
        "pseudolikelihood ascent did not converge; gradient max-norm " +
        std::to_string(worst_grad));

  InferResult result;
  result.model = zero_model(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      if (i != k)
        result.model.j.at(i, k) =
            0.5 * (j_rows.at(i, k) + j_rows.at(k, i));
  result.model.h = h;
  result.max_grad_norm = worst_grad;
  result.iterations = worst_iters;
  result.objective = total_obj;
  return result;
}

double reconstruction_error(const PairwiseModel& estimate,
                            const PairwiseModel& truth) {
  validate(estimate);
  validate(truth);
  if (estimate.n != truth.n)
    throw std::invalid_argument("model size mismatch");
  const int n = estimate.n;
  if (n < 2) return 0.0;
  double ss = 0.0;
  std::size_t cnt = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double d = estimate.j.at(i, j) - truth.j.at(i, j);
      ss += d * d;
      ++cnt;
    }
  return std::sqrt(static_cast<double>(n)) *
         std::sqrt(ss / static_cast<double>(cnt));
}

PairwiseModel perturb_model(const PairwiseModel& model, double delta,
                            std::uint64_t seed) {
  validate(model);
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be >= 0");
  PairwiseModel out = model;
  if (delta == 0.0 || model.n < 2) return out;

  const int n = model.n;
  Rng rng(seed);
  Matrix noise(n, n);
  double ss = 0.0;
  std::size_t cnt = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double e = rng.normal();
      noise.at(i, j) = noise.at(j, i) = e;
      ss += e * e;
      ++cnt;
    }
  const double rms = std::sqrt(static_cast<double>(n)) *
                     std::sqrt(ss / static_cast<double>(cnt));
  if (rms == 0.0) throw numeric_error("degenerate perturbation draw");
  const double scale = delta / rms;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) out.j.at(i, j) += scale * noise.at(i, j);
  return out;
}

PairwiseModel sk_model(int n, std::uint64_t seed) {
  PairwiseModel m = zero_model(n);
  if (n < 2) return m;
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      m.j.at(i, j) = m.j.at(j, i) = scale * rng.normal();
  return m;
}

OverlapCurves overlap_variance(const PairwiseModel& model,
                               const std::vector<double>& t_grid,
                               std::size_t n_equil, std::size_t n_record,
                               std::uint64_t seed) {
  validate(model);
  if (t_grid.empty()) throw std::invalid_argument("temperature grid is empty");
  for (std::size_t i = 0; i < t_grid.size(); ++i)
    if (!(t_grid[i] > 0.0) || (i > 0 && !(t_grid[i] > t_grid[i - 1])))
      throw std::invalid_argument(
          "temperature grid must be positive and strictly increasing");
  if (n_record < 2)
    throw std::invalid_argument("overlap needs at least 2 recorded sweeps");

  const std::size_t nt = t_grid.size();
  std::vector<BinaryMatrix> runs(2 * nt);
  parallel_for(2 * nt, [&](std::size_t task) {
    runs[task] = glauber_simulate(model, t_grid[task / 2], n_equil, n_record,
                                  derive_seed(seed, task));
  });

  OverlapCurves out;
  out.t_grid = t_grid;
  out.r_q.resize(nt);
  out.r_u.resize(nt);
  out.q_mean.resize(nt);
  out.u_mean.resize(nt);
  out.frozen.assign(nt, 0);
  const double inv_n = 1.0 / static_cast<double>(model.n);
  const double inv_m = 1.0 / static_cast<double>(n_record);

  for (std::size_t k = 0; k < nt; ++k) {
    const BinaryMatrix& r1 = runs[2 * k];
    const BinaryMatrix& r2 = runs[2 * k + 1];
    double q1 = 0.0, q2 = 0.0, u1 = 0.0, u2 = 0.0;
    for (std::size_t s = 0; s < n_record; ++s) {
      long long dot = 0;
      for (int i = 0; i < model.n; ++i)
        dot += static_cast<int>(r1.at(s, i)) * static_cast<int>(r2.at(s, i));
      const double q = static_cast<double>(dot) * inv_n;
      q1 += q;
      q2 += q * q;
      const double u = utility(model, {r1.row(s), r1.cols});
      u1 += u;
      u2 += u * u;
    }
    q1 *= inv_m;
    q2 *= inv_m;
    u1 *= inv_m;
    u2 *= inv_m;
    out.q_mean[k] = q1;
    out.u_mean[k] = u1;
    out.r_q[k] = std::max(0.0, q2 - q1 * q1);
    out.r_u[k] = std::max(0.0, u2 - u1 * u1) / (t_grid[k] * t_grid[k]);

    for (const BinaryMatrix* run : {&r1, &r2}) {
      bool moved = false;
      for (std::size_t s = 1; s < n_record && !moved; ++s)
        for (int i = 0; i < model.n; ++i)
          if (run->at(s, i) != run->at(0, i)) {
            moved = true;
            break;
          }
      if (!moved) out.frozen[k] = 1;
    }
  }

  ResponseCurve qc{t_grid, out.r_q, std::vector<double>(nt, 0.0), false};
  ResponseCurve uc{t_grid, out.r_u, std::vector<double>(nt, 0.0), false};
  out.q_peak = find_t_max(qc);
  out.u_peak = find_t_max(uc);
  return out;
}

}  // namespace critscan
