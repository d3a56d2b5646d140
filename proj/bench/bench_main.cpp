// Timing harness for the parallel kernels. Each workload runs once through
// the serial reference path (worker cap 1) and once through the OpenMP path
// (hardware default), reports the speedup, and verifies the outputs are
// bit-identical — the per-task seed derivation makes worker count
// unobservable in the results.

#include <chrono>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include "critscan/configdist.hpp"
#include "critscan/maxent.hpp"
#include "critscan/parallel.hpp"
#include "critscan/powerlaw.hpp"
#include "critscan/rng.hpp"
#include "critscan/significance.hpp"
#include "critscan/types.hpp"

using namespace critscan;

namespace {

template <typename F>
double time_once(F&& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

bool bits_equal(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

// run `fn` (which returns a vector<double> fingerprint) under both worker
// policies and report
template <typename F>
void compare(const std::string& name, F&& fn) {
  set_max_jobs(1);
  std::vector<double> serial_out;
  const double t_serial = time_once([&] { serial_out = fn(); });

  set_max_jobs(0);
  std::vector<double> parallel_out;
  const double t_parallel = time_once([&] { parallel_out = fn(); });

  const bool same = bits_equal(serial_out, parallel_out);
  std::printf("%-28s serial %8.1f ms   parallel %8.1f ms   speedup %.2fx   %s\n",
              name.c_str(), 1e3 * t_serial, 1e3 * t_parallel,
              t_serial / t_parallel,
              same ? "bit-identical" : "MISMATCH");
}

BinaryMatrix random_spins(int n, std::size_t m, std::uint64_t seed) {
  BinaryMatrix data(m, static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c) data.labels.push_back("s" + std::to_string(c + 1));
  Rng rng(seed);
  for (auto& s : data.spins) s = static_cast<std::int8_t>(rng.spin());
  return data;
}

}  // namespace

int main() {
  // many response curves: the grid loop inside response_function
  const auto spins_a = random_spins(9, 20000, 11);
  const auto dist_a = empirical_distribution(spins_a);
  compare("response grid (2000 pts)", [&] {
    const auto curve = response_function(dist_a, log_t_grid(0.2, 5.0, 2000));
    return curve.r_values;
  });

  // subset sweep: significance_curve fans out one task per subset
  const auto spins_b = random_spins(14, 20000, 12);
  compare("significance (14 sizes)", [&] {
    std::vector<std::size_t> sizes(14);
    std::iota(sizes.begin(), sizes.end(), std::size_t{1});
    const auto curve = significance_curve(spins_b, sizes, 60, 13);
    auto out = curve.h_k_mean;
    out.insert(out.end(), curve.h_s_mean.begin(), curve.h_s_mean.end());
    return out;
  });

  // bootstrap replicates
  const auto sample = sample_power_law(0.9, 256, 2000, 14);
  compare("bootstrap (400 replicates)", [&] {
    const auto report = bootstrap_pvalue(sample, 256, 400, 15);
    return std::vector<double>{report.p_value, report.beta_hat};
  });

  // row-parallel inference
  PairwiseModel model = zero_model(8);
  {
    Rng rng(16);
    for (int i = 0; i < 8; ++i)
      for (int j = i + 1; j < 8; ++j)
        model.j.at(i, j) = model.j.at(j, i) = 0.35 * rng.normal();
  }
  const auto spins_c = glauber_simulate(model, 1.0, 2000, 20000, 17);
  compare("rpml inference (n=8)", [&] {
    const auto result = rpml_infer(spins_c, InferOptions{});
    auto out = result.model.j.values;
    out.insert(out.end(), result.model.h.begin(), result.model.h.end());
    return out;
  });

  return 0;
}
