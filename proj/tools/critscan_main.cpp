// critscan: statistical-criticality scans over binary configuration series.
// Subcommands cover the practical recipe end to end (pipeline) plus each
// analysis on its own. Exit codes: 0 success, 2 usage/input error, 3 I/O
// error, 4 numerical failure.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "critscan/analysis.hpp"
#include "critscan/configdist.hpp"
#include "critscan/ingest.hpp"
#include "critscan/ising.hpp"
#include "critscan/maxent.hpp"
#include "critscan/parallel.hpp"
#include "critscan/powerlaw.hpp"
#include "critscan/rng.hpp"
#include "critscan/serialize.hpp"
#include "critscan/significance.hpp"
#include "critscan/types.hpp"

namespace critscan {
namespace {

using nlohmann::ordered_json;

struct RunConfig {
  std::string command;
  std::filesystem::path input;
  std::filesystem::path output_dir = "critscan_out";
  std::filesystem::path model_path;

  bool seed_given = false;
  std::uint64_t seed = 0;

  double t_min = 0.2, t_max = 5.0;
  int t_points = 200;
  std::size_t subsets = 100;
  std::size_t size = 0;  // 0: command-specific default
  double lambda = 1e-4;
  std::size_t n_boot = 200;
  int window_exp = 0;  // 0: resolution floor 2^(n+2)
  std::size_t step = 0;  // 0: window / 4
  std::string zero_policy = "carry";
  std::string input_kind = "auto";
  std::string format = "both";
  std::string x_max_policy = "distinct";
  int jobs = 0;

  int bins = 12;
  double lo_frac = 0.0, hi_frac = 1.0;
  int side = 3;
  double coupling = 1.0;
  double temperature = 1.0;
  std::size_t sweeps = 2300;
  std::size_t equil = 10000;
};

bool want_csv(const RunConfig& cfg) { return cfg.format != "json"; }
bool want_json(const RunConfig& cfg) { return cfg.format != "csv"; }

// resolve --seed, falling back to CRITSCAN_SEED; stochastic commands fail
// without one
std::uint64_t require_seed(const RunConfig& cfg) {
  if (cfg.seed_given) return cfg.seed;
  if (const char* env = std::getenv("CRITSCAN_SEED")) {
    std::uint64_t value = 0;
    const std::string text = env;
    const auto [ptr, ec] =
        std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
      throw std::invalid_argument("CRITSCAN_SEED is not an unsigned integer: " +
                                  text);
    return value;
  }
  throw std::invalid_argument(
      "a seed is required: pass --seed or set CRITSCAN_SEED");
}

std::vector<double> t_grid_of(const RunConfig& cfg) {
  return log_t_grid(cfg.t_min, cfg.t_max, cfg.t_points);
}

SeriesBundle load_input(const RunConfig& cfg) {
  if (cfg.input.empty()) throw std::invalid_argument("--input is required");
  return load_series(cfg.input, parse_input_kind(cfg.input_kind),
                     parse_zero_policy(cfg.zero_policy));
}

// observation counts per support entry, recovered from the exact ratios
std::vector<std::uint64_t> config_counts(const ConfigDistribution& dist,
                                         std::size_t m) {
  std::vector<std::uint64_t> counts(dist.probs.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    counts[i] = static_cast<std::uint64_t>(
        std::llround(dist.probs[i] * static_cast<double>(m)));
  return counts;
}

struct Emitter {
  const RunConfig& cfg;
  ordered_json manifest;
  std::vector<std::string> outputs;

  explicit Emitter(const RunConfig& c) : cfg(c) {
    manifest["command"] = c.command;
    if (!c.input.empty()) manifest["input"] = c.input.string();
    manifest["parameters"] = ordered_json::object();
  }

  std::filesystem::path path(const std::string& name) {
    outputs.push_back(name);
    return cfg.output_dir / name;
  }

  void record_seed(std::uint64_t seed) { manifest["seed"] = seed; }

  template <typename T>
  void param(const std::string& key, const T& value) {
    manifest["parameters"][key] = value;
  }

  void finish() {
    manifest["outputs"] = outputs;
    write_json(cfg.output_dir / "manifest.json", manifest);
  }
};

ordered_json peak_json(const PeakResult& peak) {
  return {{"t_max", peak.t_max},
          {"r_max", peak.r_max},
          {"at_boundary", peak.at_boundary}};
}

// ---- single-analysis commands ----

void cmd_significance(const RunConfig& cfg) {
  const std::uint64_t seed = require_seed(cfg);
  const auto bundle = load_input(cfg);
  const auto& spins = bundle.spins;

  std::size_t max_size = cfg.size > 0 ? cfg.size : spins.cols;
  max_size = std::min(max_size, spins.cols);
  std::vector<std::size_t> sizes;
  for (std::size_t n = 1; n <= max_size; ++n) sizes.push_back(n);

  const auto curve = significance_curve(spins, sizes, cfg.subsets, seed);

  std::vector<double> h_s_grid;
  const double h_max = std::log(static_cast<double>(spins.rows));
  for (int i = 0; i < 256; ++i)
    h_s_grid.push_back(h_max * static_cast<double>(i) / 255.0);
  const auto bound = theoretical_bound(spins.rows, h_s_grid);
  const auto report = undersampling_threshold(curve, bound);

  Emitter out(cfg);
  out.record_seed(seed);
  out.param("subsets", cfg.subsets);
  out.param("max_size", max_size);
  if (want_csv(cfg)) {
    write_significance_csv(out.path("significance.csv"), curve);
    write_bound_csv(out.path("bound.csv"), bound);
  }
  if (want_json(cfg)) {
    ordered_json j{{"n_threshold", report.n_threshold},
                   {"beyond_tested", report.beyond_tested},
                   {"h_k_at_threshold", report.h_k_at_threshold},
                   {"bound_at_threshold", report.bound_at_threshold},
                   {"verdict", report.verdict}};
    write_json(out.path("significance.json"), j);
  }
  out.finish();
}

void cmd_response(const RunConfig& cfg) {
  const auto bundle = load_input(cfg);
  const auto dist = empirical_distribution(bundle.spins);
  const auto curve = response_function(dist, t_grid_of(cfg));
  const auto peak = find_t_max(curve);
  const auto orientation = net_orientation(bundle.spins);

  Emitter out(cfg);
  out.param("t_min", cfg.t_min);
  out.param("t_max", cfg.t_max);
  out.param("t_points", cfg.t_points);
  if (want_csv(cfg)) {
    write_response_csv(out.path("response.csv"), curve);
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < orientation.histogram.size(); ++k)
      rows.push_back({static_cast<double>(k),
                      static_cast<double>(orientation.histogram[k])});
    write_csv(out.path("orientation.csv"), {"n_up", "count"}, rows);
  }
  if (want_json(cfg)) {
    ordered_json j{{"peak", peak_json(peak)},
                   {"degenerate", curve.degenerate},
                   {"mean_abs_orientation", orientation.mean_abs}};
    try {
      const auto fit = critical_exponent(curve);
      j["exponent"] = {{"value", fit.exponent},
                       {"std_error", fit.std_error},
                       {"points", fit.points}};
    } catch (const std::exception& e) {
      j["exponent"] = {{"error", e.what()}};
    }
    write_json(out.path("response.json"), j);
  }
  out.finish();
}

void cmd_zipf(const RunConfig& cfg) {
  const std::uint64_t seed = require_seed(cfg);
  const auto bundle = load_input(cfg);
  const auto dist = empirical_distribution(bundle.spins);
  const auto counts = config_counts(dist, bundle.spins.rows);
  const XMaxPolicy policy = cfg.x_max_policy == "full"
                                ? XMaxPolicy::full_state_space
                                : XMaxPolicy::distinct;
  const auto report = zipf_test(dist, counts, policy, cfg.n_boot, seed);

  Emitter out(cfg);
  out.record_seed(seed);
  out.param("n_boot", cfg.n_boot);
  out.param("x_max_policy", cfg.x_max_policy);
  if (want_csv(cfg)) write_fit_report_csv(out.path("zipf.csv"), report);
  if (want_json(cfg)) {
    ordered_json j{{"beta_hat", report.beta_hat}, {"sigma", report.sigma},
                   {"ks_d", report.ks_d},         {"p_value", report.p_value},
                   {"n", report.n},               {"x_max", report.x_max},
                   {"verdict", report.verdict}};
    write_json(out.path("zipf.json"), j);
  }
  out.finish();
}

void cmd_linearity(const RunConfig& cfg) {
  const auto bundle = load_input(cfg);
  const auto dist = empirical_distribution(bundle.spins);
  const auto fit = entropy_energy_curve(dist, cfg.bins, cfg.lo_frac,
                                        cfg.hi_frac);

  Emitter out(cfg);
  out.param("bins", cfg.bins);
  out.param("lo_frac", cfg.lo_frac);
  out.param("hi_frac", cfg.hi_frac);
  if (want_csv(cfg)) {
    std::vector<std::vector<double>> rows;
    for (std::size_t b = 0; b < fit.bin_x.size(); ++b)
      rows.push_back({fit.bin_x[b], fit.bin_s[b]});
    write_csv(out.path("linearity.csv"), {"neg_log_p", "log_count"}, rows);
  }
  if (want_json(cfg)) {
    ordered_json j{{"slope", fit.slope},
                   {"intercept", fit.intercept},
                   {"rel_nonlinearity", fit.rel_nonlinearity},
                   {"degenerate", fit.degenerate}};
    write_json(out.path("linearity.json"), j);
  }
  out.finish();
}

void cmd_infer(const RunConfig& cfg) {
  const auto bundle = load_input(cfg);
  InferOptions opts;
  opts.lambda = cfg.lambda;
  const auto result = rpml_infer(bundle.spins, opts);

  Emitter out(cfg);
  out.param("lambda", cfg.lambda);
  save_model(out.path("model.json"), result.model);
  if (want_json(cfg)) {
    ordered_json j{{"max_grad_norm", result.max_grad_norm},
                   {"iterations", result.iterations},
                   {"objective", result.objective},
                   {"rows", bundle.spins.rows},
                   {"cols", bundle.spins.cols}};
    write_json(out.path("infer.json"), j);
  }
  out.finish();
}

void cmd_simulate(const RunConfig& cfg) {
  const std::uint64_t seed = require_seed(cfg);
  if (cfg.model_path.empty())
    throw std::invalid_argument("--model is required");
  const auto model = load_model(cfg.model_path);
  const auto spins =
      glauber_simulate(model, cfg.temperature, cfg.equil, cfg.sweeps, seed);

  Emitter out(cfg);
  out.record_seed(seed);
  out.manifest["model"] = cfg.model_path.string();
  out.param("temperature", cfg.temperature);
  out.param("sweeps", cfg.sweeps);
  out.param("equil", cfg.equil);
  write_spins_csv(out.path("spins.csv"), spins);
  out.finish();
}

void cmd_ising(const RunConfig& cfg) {
  const LatticeSpec spec{cfg.side, true};
  const auto curve = exact_response_curve(spec, t_grid_of(cfg), cfg.coupling);
  const auto peak = find_t_max(curve);
  const auto kld = kld_benchmark(spec, peak.t_max, default_x_grid());

  Emitter out(cfg);
  out.param("side", cfg.side);
  out.param("coupling", cfg.coupling);
  if (want_csv(cfg)) {
    write_response_csv(out.path("ising_response.csv"), curve);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < kld.x_grid.size(); ++i)
      rows.push_back({kld.x_grid[i], kld.kld[i]});
    write_csv(out.path("ising_kld.csv"), {"x", "kld"}, rows);
  }
  if (want_json(cfg))
    write_json(out.path("ising.json"),
               ordered_json{{"peak", peak_json(peak)}});
  out.finish();
}

void cmd_sliding(const RunConfig& cfg) {
  const auto bundle = load_input(cfg);
  const auto& spins = bundle.spins;
  std::size_t window = 0;
  if (cfg.window_exp > 0) window = std::size_t{1} << cfg.window_exp;
  else if (spins.cols + 2 <= 40) window = std::size_t{1} << (spins.cols + 2);
  const std::size_t step =
      cfg.step > 0 ? cfg.step : std::max<std::size_t>(1, window / 4);
  const auto result = sliding_tmax(spins, window, step, t_grid_of(cfg));

  // cumulative row-mean series (returns when available, spins otherwise),
  // normalized to [0, 1] at the emitted window ends as a plot overlay
  const bool use_returns =
      bundle.has_returns && bundle.returns.returns.rows == spins.rows;
  std::vector<double> cumulative(spins.rows + 1, 0.0);
  for (std::size_t r = 0; r < spins.rows; ++r) {
    double mean = 0.0;
    for (std::size_t c = 0; c < spins.cols; ++c)
      mean += use_returns ? bundle.returns.returns.at(r, c)
                          : static_cast<double>(spins.at(r, c));
    cumulative[r + 1] =
        cumulative[r] + mean / static_cast<double>(spins.cols);
  }
  std::vector<double> overlay(result.window_end.size());
  for (std::size_t w = 0; w < overlay.size(); ++w)
    overlay[w] = cumulative[result.window_end[w]];
  const auto [ov_min, ov_max] =
      std::minmax_element(overlay.begin(), overlay.end());
  const double ov_span = overlay.empty() ? 0.0 : *ov_max - *ov_min;
  for (double& v : overlay)
    v = ov_span > 0.0 ? (v - *ov_min) / ov_span : 0.5;

  Emitter out(cfg);
  out.param("window", result.window);
  out.param("step", result.step);
  if (want_csv(cfg)) {
    std::vector<std::vector<double>> rows;
    for (std::size_t w = 0; w < result.window_end.size(); ++w)
      rows.push_back({static_cast<double>(result.window_end[w]),
                      result.t_max[w],
                      static_cast<double>(result.valid[w]), overlay[w]});
    write_csv(out.path("sliding.csv"),
              {"window_end", "t_max", "valid", "index_norm"}, rows);
  }
  if (want_json(cfg)) {
    std::size_t n_valid = 0;
    for (int v : result.valid) n_valid += static_cast<std::size_t>(v);
    write_json(out.path("sliding.json"),
               ordered_json{{"window", result.window},
                            {"step", result.step},
                            {"windows", result.window_end.size()},
                            {"valid", n_valid}});
  }
  out.finish();
}

void cmd_overlap(const RunConfig& cfg) {
  const std::uint64_t seed = require_seed(cfg);
  if (cfg.model_path.empty())
    throw std::invalid_argument("--model is required");
  const auto model = load_model(cfg.model_path);
  const auto curves =
      overlap_variance(model, t_grid_of(cfg), cfg.equil, cfg.sweeps, seed);

  Emitter out(cfg);
  out.record_seed(seed);
  out.manifest["model"] = cfg.model_path.string();
  out.param("sweeps", cfg.sweeps);
  out.param("equil", cfg.equil);
  if (want_csv(cfg)) {
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < curves.t_grid.size(); ++k)
      rows.push_back({curves.t_grid[k], curves.r_q[k], curves.r_u[k],
                      curves.q_mean[k], curves.u_mean[k],
                      static_cast<double>(curves.frozen[k])});
    write_csv(out.path("overlap.csv"),
              {"t", "r_q", "r_u", "q_mean", "u_mean", "frozen"}, rows);
  }
  if (want_json(cfg))
    write_json(out.path("overlap.json"),
               ordered_json{{"q_peak", peak_json(curves.q_peak)},
                            {"u_peak", peak_json(curves.u_peak)}});
  out.finish();
}

// ---- the full recipe ----

void cmd_pipeline(const RunConfig& cfg) {
  const std::uint64_t seed = require_seed(cfg);
  const auto bundle = load_input(cfg);  // step 1: binarize
  const auto& spins = bundle.spins;
  const auto grid = t_grid_of(cfg);

  Emitter out(cfg);
  out.record_seed(seed);
  out.param("subsets", cfg.subsets);
  out.param("n_boot", cfg.n_boot);
  out.param("lambda", cfg.lambda);
  out.param("bins", cfg.bins);
  out.param("zero_policy", cfg.zero_policy);

  ordered_json summary;
  summary["seed"] = seed;
  summary["input"] = cfg.input.string();
  summary["steps"] = ordered_json::object();
  summary["errors"] = ordered_json::object();
  auto run_step = [&](const std::string& name, auto&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      summary["errors"][name] = e.what();
    }
  };

  if (want_csv(cfg)) write_spins_csv(out.path("step1_spins.csv"), spins);
  summary["steps"]["binarize"] = {{"rows", spins.rows}, {"cols", spins.cols}};

  // step 2: undersampling threshold
  std::size_t n_significant = spins.cols;
  run_step("significance", [&] {
    std::vector<std::size_t> sizes;
    for (std::size_t n = 1; n <= spins.cols; ++n) sizes.push_back(n);
    const auto curve =
        significance_curve(spins, sizes, cfg.subsets, derive_seed(seed, 2));
    std::vector<double> h_s_grid;
    const double h_max = std::log(static_cast<double>(spins.rows));
    for (int i = 0; i < 256; ++i)
      h_s_grid.push_back(h_max * static_cast<double>(i) / 255.0);
    const auto bound = theoretical_bound(spins.rows, h_s_grid);
    const auto report = undersampling_threshold(curve, bound);
    n_significant = report.n_threshold;
    if (want_csv(cfg)) {
      write_significance_csv(out.path("step2_significance.csv"), curve);
      write_bound_csv(out.path("step2_bound.csv"), bound);
    }
    summary["steps"]["significance"] = {
        {"n_threshold", report.n_threshold},
        {"beyond_tested", report.beyond_tested},
        {"verdict", report.verdict}};
  });

  // step 3: response peaks across sizes up to the significant maximum
  double t_max_mean = 0.0, t_max_full = 0.0;
  bool have_t_max = false;
  run_step("response", [&] {
    const std::size_t top = std::max<std::size_t>(2, n_significant);
    std::vector<std::size_t> sizes;
    for (std::size_t n = 2; n <= std::min(top, spins.cols); ++n)
      sizes.push_back(n);
    const auto scaling =
        tmax_vs_size(spins, sizes, cfg.subsets, derive_seed(seed, 3), grid);
    if (want_csv(cfg)) {
      std::vector<std::vector<double>> rows;
      for (std::size_t i = 0; i < scaling.sizes.size(); ++i)
        rows.push_back({static_cast<double>(scaling.sizes[i]),
                        scaling.t_mean[i], scaling.t_std[i],
                        static_cast<double>(scaling.used[i]),
                        static_cast<double>(scaling.skipped[i])});
      write_csv(out.path("step3_tmax.csv"),
                {"size", "t_mean", "t_std", "used", "skipped"}, rows);
    }
    const auto full_curve =
        response_function(empirical_distribution(spins), grid);
    if (want_csv(cfg))
      write_response_csv(out.path("step3_response.csv"), full_curve);
    const auto full_peak = find_t_max(full_curve);

    ordered_json step;
    if (!scaling.t_mean.empty() && scaling.used.back() > 0) {
      t_max_mean = scaling.t_mean.back();
      have_t_max = true;
      step["t_max_mean"] = t_max_mean;
      step["size"] = scaling.sizes.back();
    }
    if (!full_curve.degenerate && !full_peak.at_boundary) {
      t_max_full = full_peak.t_max;
      step["t_max_full"] = t_max_full;
    }
    step["exp_fit_valid"] = scaling.exp_fit.valid;
    if (scaling.exp_fit.valid) step["t_inf_exp"] = scaling.exp_fit.t_inf;
    step["power_fit_valid"] = scaling.power_fit.valid;
    if (scaling.power_fit.valid) step["t_inf_power"] = scaling.power_fit.t_inf;
    summary["steps"]["response"] = step;
  });

  // step 4: Ising yardstick at the same relative distance
  run_step("benchmark", [&] {
    if (!(t_max_full > 0.0))
      throw numeric_error("no interior full-set response peak");
    const auto dist = empirical_distribution(spins);
    const double empirical_kld =
        kl_divergence(rescale(dist, t_max_full), dist);
    const auto report =
        benchmark_compare(LatticeSpec{3, true}, t_max_full, empirical_kld);
    summary["steps"]["benchmark"] = {{"t_crit", report.t_crit},
                                     {"x", report.x},
                                     {"benchmark_kld", report.benchmark_kld},
                                     {"empirical_kld", report.empirical_kld},
                                     {"ratio", report.ratio}};
    if (want_json(cfg))
      write_json(out.path("step4_benchmark.json"),
                 ordered_json{{"t_crit", report.t_crit},
                              {"x", report.x},
                              {"benchmark_kld", report.benchmark_kld},
                              {"empirical_kld", report.empirical_kld},
                              {"ratio", report.ratio}});
  });

  // step 5: Zipf test on the configuration frequencies
  run_step("zipf", [&] {
    const auto dist = empirical_distribution(spins);
    const auto counts = config_counts(dist, spins.rows);
    const auto report = zipf_test(dist, counts, XMaxPolicy::distinct,
                                  cfg.n_boot, derive_seed(seed, 5));
    if (want_csv(cfg)) write_fit_report_csv(out.path("step5_zipf.csv"), report);
    summary["steps"]["zipf"] = {{"beta_hat", report.beta_hat},
                                {"sigma", report.sigma},
                                {"p_value", report.p_value},
                                {"verdict", report.verdict}};
  });

  // step 6: entropy-energy linearity
  run_step("linearity", [&] {
    const auto dist = empirical_distribution(spins);
    const auto fit =
        entropy_energy_curve(dist, cfg.bins, cfg.lo_frac, cfg.hi_frac);
    if (want_csv(cfg)) {
      std::vector<std::vector<double>> rows;
      for (std::size_t b = 0; b < fit.bin_x.size(); ++b)
        rows.push_back({fit.bin_x[b], fit.bin_s[b]});
      write_csv(out.path("step6_linearity.csv"), {"neg_log_p", "log_count"},
                rows);
    }
    summary["steps"]["linearity"] = {
        {"slope", fit.slope},
        {"rel_nonlinearity", fit.rel_nonlinearity},
        {"degenerate", fit.degenerate}};
  });

  // step 7: inference plus Monte Carlo cross-check of the peak
  run_step("inference", [&] {
    InferOptions opts;
    opts.lambda = cfg.lambda;
    const auto result = rpml_infer(spins, opts);
    save_model(out.path("step7_model.json"), result.model);

    const auto sim = glauber_simulate(result.model, 1.0, cfg.equil,
                                      std::max(cfg.sweeps, spins.rows),
                                      derive_seed(seed, 7));
    const auto sim_curve = response_function(empirical_distribution(sim), grid);
    if (want_csv(cfg))
      write_response_csv(out.path("step7_response.csv"), sim_curve);
    const auto sim_peak = find_t_max(sim_curve);

    ordered_json step{{"max_grad_norm", result.max_grad_norm},
                      {"iterations", result.iterations}};
    if (!sim_curve.degenerate && !sim_peak.at_boundary) {
      step["t_max_simulated"] = sim_peak.t_max;
      if (have_t_max) {
        const double rel =
            std::abs(sim_peak.t_max - t_max_mean) / t_max_mean;
        step["rel_peak_difference"] = rel;
        step["verdict"] = rel <= 0.1
                              ? "inference consistent with the data peak"
                              : "simulated peak departs by more than 10%";
      }
    } else {
      step["verdict"] = "simulated response has no interior peak";
    }
    summary["steps"]["inference"] = step;
  });

  write_json(out.path("summary.json"), summary);
  out.finish();
}

// ---- wiring ----

void add_io_flags(CLI::App* cmd, RunConfig& cfg, bool needs_input) {
  auto* input = cmd->add_option("-i,--input", cfg.input,
                                "input CSV (prices, returns, or spins)");
  if (needs_input) input->required();
  cmd->add_option("-o,--output-dir", cfg.output_dir,
                  "directory for result files");
  cmd->add_option("--format", cfg.format, "output formats to write")
      ->check(CLI::IsMember({"csv", "json", "both"}))
      ->capture_default_str();
  cmd->add_option("--jobs", cfg.jobs, "worker cap; 0 uses all cores")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--input-kind", cfg.input_kind, "how to read the input")
      ->check(CLI::IsMember({"auto", "prices", "returns", "spins"}))
      ->capture_default_str();
  cmd->add_option("--zero-policy", cfg.zero_policy,
                  "sign assigned to zero returns")
      ->check(CLI::IsMember({"carry", "minus-one", "plus-one", "drop-row"}))
      ->capture_default_str();
}

void add_seed_flag(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--seed", cfg.seed,
                  "RNG seed (or set CRITSCAN_SEED); required here")
      ->each([&cfg](const std::string&) { cfg.seed_given = true; });
}

void add_grid_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--t-min", cfg.t_min, "scan lower bound")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--t-max", cfg.t_max, "scan upper bound")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--t-points", cfg.t_points, "grid resolution")
      ->check(CLI::Range(2, 100000))
      ->capture_default_str();
}

}  // namespace
}  // namespace critscan

int main(int argc, char** argv) {
  using namespace critscan;

  RunConfig cfg;
  CLI::App app{"statistical-criticality scans over binary configuration data"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "flat key=value file mirroring the flags; flags win");

  auto* pipeline = app.add_subcommand(
      "pipeline", "run the full recipe and write one artifact per step");
  add_io_flags(pipeline, cfg, true);
  add_seed_flag(pipeline, cfg);
  add_grid_flags(pipeline, cfg);
  pipeline->add_option("--subsets", cfg.subsets, "random subsets per size")
      ->capture_default_str();
  pipeline->add_option("--n-boot", cfg.n_boot, "bootstrap replicates")
      ->capture_default_str();
  pipeline->add_option("--lambda", cfg.lambda, "inference L2 penalty")
      ->capture_default_str();
  pipeline->add_option("--bins", cfg.bins, "entropy-energy bins")
      ->capture_default_str();
  pipeline->add_option("--sweeps", cfg.sweeps, "cross-check sweeps floor")
      ->capture_default_str();
  pipeline->add_option("--equil", cfg.equil, "cross-check equilibration")
      ->capture_default_str();

  auto* significance = app.add_subcommand(
      "significance", "undersampling entropies across subsystem sizes");
  add_io_flags(significance, cfg, true);
  add_seed_flag(significance, cfg);
  significance->add_option("--subsets", cfg.subsets, "subsets per size")
      ->capture_default_str();
  significance
      ->add_option("--size", cfg.size, "largest size; 0 means all columns")
      ->capture_default_str();

  auto* response =
      app.add_subcommand("response", "entropy response scan of the full set");
  add_io_flags(response, cfg, true);
  add_grid_flags(response, cfg);

  auto* zipf =
      app.add_subcommand("zipf", "bootstrap power-law test of rank frequencies");
  add_io_flags(zipf, cfg, true);
  add_seed_flag(zipf, cfg);
  zipf->add_option("--n-boot", cfg.n_boot, "bootstrap replicates")
      ->capture_default_str();
  zipf->add_option("--x-max-policy", cfg.x_max_policy,
                   "rank-support upper bound")
      ->check(CLI::IsMember({"distinct", "full"}))
      ->capture_default_str();

  auto* linearity =
      app.add_subcommand("linearity", "entropy-versus-energy linearity check");
  add_io_flags(linearity, cfg, true);
  linearity->add_option("--bins", cfg.bins, "energy bins")
      ->capture_default_str();
  linearity->add_option("--lo-frac", cfg.lo_frac, "window lower fraction")
      ->capture_default_str();
  linearity->add_option("--hi-frac", cfg.hi_frac, "window upper fraction")
      ->capture_default_str();

  auto* infer =
      app.add_subcommand("infer", "pairwise maximum-entropy model inference");
  add_io_flags(infer, cfg, true);
  infer->add_option("--lambda", cfg.lambda, "L2 penalty")
      ->capture_default_str();

  auto* simulate =
      app.add_subcommand("simulate", "sample spin data from a model JSON");
  add_io_flags(simulate, cfg, false);
  add_seed_flag(simulate, cfg);
  simulate->add_option("--model", cfg.model_path, "model JSON path")
      ->required();
  simulate
      ->add_option("--temperature", cfg.temperature, "sampling temperature")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--sweeps", cfg.sweeps, "recorded sweeps")
      ->capture_default_str();
  simulate->add_option("--equil", cfg.equil, "equilibration sweeps")
      ->capture_default_str();

  auto* ising =
      app.add_subcommand("ising", "exact lattice benchmark curves");
  add_io_flags(ising, cfg, false);
  add_grid_flags(ising, cfg);
  ising->add_option("--side", cfg.side, "lattice side length")
      ->check(CLI::Range(2, 4))
      ->capture_default_str();
  ising->add_option("--coupling", cfg.coupling, "bond strength")
      ->capture_default_str();

  auto* sliding =
      app.add_subcommand("sliding", "peak temperature over sliding windows");
  add_io_flags(sliding, cfg, true);
  add_grid_flags(sliding, cfg);
  sliding
      ->add_option("--window-exp", cfg.window_exp,
                   "window = 2^k rows; 0 uses the resolution floor 2^(n+2)")
      ->check(CLI::Range(0, 30))
      ->capture_default_str();
  sliding->add_option("--step", cfg.step, "row step; 0 means window / 4")
      ->capture_default_str();

  auto* overlap = app.add_subcommand(
      "overlap", "two-replica overlap variance across temperatures");
  add_io_flags(overlap, cfg, false);
  add_seed_flag(overlap, cfg);
  add_grid_flags(overlap, cfg);
  overlap->add_option("--model", cfg.model_path, "model JSON path")
      ->required();
  overlap->add_option("--sweeps", cfg.sweeps, "recorded sweeps per replica")
      ->capture_default_str();
  overlap->add_option("--equil", cfg.equil, "equilibration sweeps")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  set_max_jobs(cfg.jobs);

  try {
    if (cfg.command == "pipeline") cmd_pipeline(cfg);
    else if (cfg.command == "significance") cmd_significance(cfg);
    else if (cfg.command == "response") cmd_response(cfg);
    else if (cfg.command == "zipf") cmd_zipf(cfg);
    else if (cfg.command == "linearity") cmd_linearity(cfg);
    else if (cfg.command == "infer") cmd_infer(cfg);
    else if (cfg.command == "simulate") cmd_simulate(cfg);
    else if (cfg.command == "ising") cmd_ising(cfg);
    else if (cfg.command == "sliding") cmd_sliding(cfg);
    else if (cfg.command == "overlap") cmd_overlap(cfg);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const io_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const numeric_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  }
  return 0;
}
