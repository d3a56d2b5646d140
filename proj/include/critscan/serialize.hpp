#pragma once
// CSV and JSON input/output. All floating-point output goes through
// format_double (shortest round-trip decimal) so repeated runs with the same
// seed produce byte-identical files.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "critscan/analysis.hpp"
#include "critscan/configdist.hpp"
#include "critscan/ingest.hpp"
#include "critscan/ising.hpp"
#include "critscan/maxent.hpp"
#include "critscan/powerlaw.hpp"
#include "critscan/significance.hpp"
#include "critscan/types.hpp"

namespace critscan {

std::string format_double(double v);

struct RawCsv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> cells;
};

// io_error when the file cannot be opened; std::invalid_argument (with line
// numbers) for structural problems
RawCsv load_csv(const std::filesystem::path& path);

struct NumericTable {
  std::vector<std::string> labels;
  std::vector<std::string> timestamps;  // empty unless a time column exists
  Matrix values;
};

// drops a leading time/date column if the header names one
NumericTable to_numeric(const RawCsv& csv);

enum class InputKind { auto_detect, prices, returns, spins };

InputKind parse_input_kind(const std::string& name);
ZeroPolicy parse_zero_policy(const std::string& name);

// all entries in {-1, +1} -> spins; otherwise all positive -> prices;
// otherwise returns
InputKind detect_kind(const NumericTable& table);

struct SeriesBundle {
  BinaryMatrix spins;
  ReturnMatrix returns;
  bool has_returns = false;
  InputKind kind = InputKind::spins;  // kind actually applied
};

SeriesBundle load_series(const std::filesystem::path& path, InputKind kind,
                         ZeroPolicy policy);

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
void write_spins_csv(const std::filesystem::path& path,
                     const BinaryMatrix& data);
void write_response_csv(const std::filesystem::path& path,
                        const ResponseCurve& curve);
void write_significance_csv(const std::filesystem::path& path,
                            const SignificanceCurve& curve);
void write_bound_csv(const std::filesystem::path& path,
                     const BoundCurve& bound);
void write_fit_report_csv(const std::filesystem::path& path,
                          const FitReport& report);

nlohmann::ordered_json model_to_json(const PairwiseModel& model);
PairwiseModel model_from_json(const nlohmann::json& j);
void save_model(const std::filesystem::path& path, const PairwiseModel& model);
PairwiseModel load_model(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path,
                const nlohmann::ordered_json& j);

}  // namespace critscan
