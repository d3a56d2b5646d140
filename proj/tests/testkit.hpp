#pragma once
// Shared test infrastructure: frozen oracle cases with provenance, brute-force
// reference implementations that deliberately avoid the library's numeric
// shortcuts, deterministic fixture generators, and a subprocess harness for
// exercising the command-line tool.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "critscan/configdist.hpp"
#include "critscan/ising.hpp"
#include "critscan/maxent.hpp"
#include "critscan/types.hpp"

namespace critscan::testkit {

enum class Provenance { paper, trivial, derived };

struct OracleCase {
  std::string description;
  std::map<std::string, double> inputs;
  double expected = 0.0;
  double tolerance = 0.0;
  Provenance provenance = Provenance::derived;
};

// ---- brute-force references ----

// direct double loop over all pairs, no field caching
ConfigDistribution brute_force_gibbs(const PairwiseModel& model, double t);

// Var_{P_t}(ln P) / t^2 via direct powers, no log-space shifting
double brute_force_response(const ConfigDistribution& dist, double t);

double brute_force_entropy(const ConfigDistribution& dist, double t);

// ---- fixture generators ----

BinaryMatrix independent_coins(int n, std::size_t m, std::uint64_t seed);

// strongly ordered data: rows alternate between all-down and all-up
BinaryMatrix ordered_pair(int n, std::size_t m);

BinaryMatrix maxent_sampled(const PairwiseModel& model, double t,
                            std::size_t m, std::uint64_t seed);
BinaryMatrix sk_sampled(int n, std::size_t m, std::uint64_t seed);
BinaryMatrix ising_sampled(int side, double t, std::size_t m,
                           std::uint64_t seed);

// random pairwise model with couplings ~ N(0, scale^2) and fields
// ~ N(0, (scale/2)^2)
PairwiseModel random_model(int n, double scale, std::uint64_t seed);

// ---- frozen oracles ----

std::vector<OracleCase> gibbs_oracles();
std::vector<OracleCase> response_oracles();
std::vector<OracleCase> zeta_oracles();
std::vector<OracleCase> lattice_oracles();

// ---- CLI harness ----

struct CliResult {
  int exit_code = -1;
  std::string output;  // combined stdout + stderr
};

CliResult run_cli(const std::vector<std::string>& args);

// empty per-test scratch directory under the build tree
std::filesystem::path fresh_dir(const std::string& tag);

std::string slurp(const std::filesystem::path& path);

}  // namespace critscan::testkit
