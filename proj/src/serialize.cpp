#include "critscan/serialize.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace critscan {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
  while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r'))
    --b;
  return s.substr(a, b - a);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool is_time_header(const std::string& name) {
  const std::string n = lower(name);
  return n == "t" || n == "time" || n == "date" || n == "timestamp";
}

double parse_cell(const std::string& cell, std::size_t line,
                  std::size_t col) {
  const std::string s = trim(cell);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::invalid_argument("CSV line " + std::to_string(line) +
                                ", column " + std::to_string(col) +
                                ": cannot parse '" + s + "' as a number");
  return v;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) throw io_error("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

RawCsv load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path.string() + " for reading");

  RawCsv csv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) fields.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') fields.push_back("");
    if (csv.header.empty()) {
      csv.header = fields;
      continue;
    }
    if (fields.size() != csv.header.size())
      throw std::invalid_argument(
          "CSV line " + std::to_string(line_no) + ": expected " +
          std::to_string(csv.header.size()) + " fields, found " +
          std::to_string(fields.size()));
    csv.cells.push_back(std::move(fields));
  }
  if (csv.header.empty())
    throw std::invalid_argument("CSV " + path.string() + " has no header");
  if (csv.cells.empty())
    throw std::invalid_argument("CSV " + path.string() + " has no data rows");
  return csv;
}

NumericTable to_numeric(const RawCsv& csv) {
  const bool has_time = !csv.header.empty() && is_time_header(csv.header[0]);
  const std::size_t first = has_time ? 1 : 0;
  if (csv.header.size() <= first)
    throw std::invalid_argument("CSV has no numeric columns");

  NumericTable table;
  table.labels.assign(csv.header.begin() + first, csv.header.end());
  table.values = Matrix(csv.cells.size(), csv.header.size() - first);
  for (std::size_t r = 0; r < csv.cells.size(); ++r) {
    if (has_time) table.timestamps.push_back(csv.cells[r][0]);
    for (std::size_t c = first; c < csv.header.size(); ++c)
      table.values.at(r, c - first) =
          parse_cell(csv.cells[r][c], r + 2, c + 1);
  }
  return table;
}

InputKind parse_input_kind(const std::string& name) {
  if (name == "auto") return InputKind::auto_detect;
  if (name == "prices") return InputKind::prices;
  if (name == "returns") return InputKind::returns;
  if (name == "spins") return InputKind::spins;
  throw std::invalid_argument("unknown input kind '" + name + "'");
}

ZeroPolicy parse_zero_policy(const std::string& name) {
  if (name == "carry") return ZeroPolicy::carry;
  if (name == "minus-one") return ZeroPolicy::minus_one;
  if (name == "plus-one") return ZeroPolicy::plus_one;
  if (name == "drop-row") return ZeroPolicy::drop_row;
  throw std::invalid_argument("unknown zero policy '" + name + "'");
}

InputKind detect_kind(const NumericTable& table) {
  bool all_pm1 = true, all_positive = true;
  for (double v : table.values.values) {
    if (v != 1.0 && v != -1.0) all_pm1 = false;
    if (!(v > 0.0)) all_positive = false;
  }
  if (all_pm1) return InputKind::spins;
  if (all_positive) return InputKind::prices;
  return InputKind::returns;
}

SeriesBundle load_series(const std::filesystem::path& path, InputKind kind,
                         ZeroPolicy policy) {
  const NumericTable table = to_numeric(load_csv(path));
  if (kind == InputKind::auto_detect) kind = detect_kind(table);

  SeriesBundle bundle;
  bundle.kind = kind;
  switch (kind) {
    case InputKind::spins: {
      BinaryMatrix spins(table.values.rows, table.values.cols);
      spins.labels = table.labels;
      for (std::size_t k = 0; k < table.values.values.size(); ++k) {
        const double v = table.values.values[k];
        if (v != 1.0 && v != -1.0)
          throw std::invalid_argument(
              "spin input must contain only -1 and +1");
        spins.spins[k] = v > 0.0 ? std::int8_t{1} : std::int8_t{-1};
      }
      bundle.spins = std::move(spins);
      break;
    }
    case InputKind::prices: {
      PriceSeries prices{table.values, table.labels};
      bundle.returns = compute_returns(prices);
      bundle.spins = binarize(bundle.returns, policy);
      bundle.has_returns = true;
      break;
    }
    case InputKind::returns: {
      bundle.returns = ReturnMatrix{table.values, table.labels};
      bundle.spins = binarize(bundle.returns, policy);
      bundle.has_returns = true;
      break;
    }
    default:
      throw std::invalid_argument("unresolved input kind");
  }
  if (bundle.spins.cols > 64)
    throw std::invalid_argument("more than 64 series columns");
  return bundle;
}

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  auto out = open_out(path);
  for (std::size_t c = 0; c < header.size(); ++c)
    out << (c ? "," : "") << header[c];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c)
      out << (c ? "," : "") << format_double(row[c]);
    out << '\n';
  }
}

void write_spins_csv(const std::filesystem::path& path,
                     const BinaryMatrix& data) {
  auto out = open_out(path);
  for (std::size_t c = 0; c < data.cols; ++c) {
    const std::string label =
        c < data.labels.size() && !data.labels[c].empty()
            ? data.labels[c]
            : "s" + std::to_string(c + 1);
    out << (c ? "," : "") << label;
  }
  out << '\n';
  for (std::size_t r = 0; r < data.rows; ++r) {
    for (std::size_t c = 0; c < data.cols; ++c)
      out << (c ? "," : "") << static_cast<int>(data.at(r, c));
    out << '\n';
  }
}

void write_response_csv(const std::filesystem::path& path,
                        const ResponseCurve& curve) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < curve.t_grid.size(); ++i)
    rows.push_back({curve.t_grid[i], curve.r_values[i], curve.s_values[i]});
  write_csv(path, {"t", "r", "s"}, rows);
}

void write_significance_csv(const std::filesystem::path& path,
                            const SignificanceCurve& curve) {
  const double ln2 = std::log(2.0);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < curve.sizes.size(); ++i)
    rows.push_back({static_cast<double>(curve.sizes[i]),
                    static_cast<double>(curve.n_subsets_used[i]),
                    curve.h_s_mean[i], curve.h_s_std[i], curve.h_k_mean[i],
                    curve.h_k_std[i], curve.h_s_mean[i] / ln2,
                    curve.h_s_std[i] / ln2, curve.h_k_mean[i] / ln2,
                    curve.h_k_std[i] / ln2});
  write_csv(path,
            {"size", "n_subsets", "h_s_mean", "h_s_std", "h_k_mean",
             "h_k_std", "h_s_mean_bits", "h_s_std_bits", "h_k_mean_bits",
             "h_k_std_bits"},
            rows);
}

void write_bound_csv(const std::filesystem::path& path,
                     const BoundCurve& bound) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < bound.h_s_grid.size(); ++i)
    rows.push_back({bound.h_s_grid[i], bound.h_k_bound[i]});
  write_csv(path, {"h_s", "h_k_bound"}, rows);
}

void write_fit_report_csv(const std::filesystem::path& path,
                          const FitReport& report) {
  write_csv(path, {"n_entities", "alpha_hat", "sigma", "D", "p_value"},
            {{static_cast<double>(report.n), report.beta_hat, report.sigma,
              report.ks_d, report.p_value}});
}

nlohmann::ordered_json model_to_json(const PairwiseModel& model) {
  nlohmann::ordered_json j;
  j["n"] = model.n;
  j["j"] = model.j.values;  // row-major n x n
  j["h"] = model.h;
  return j;
}

PairwiseModel model_from_json(const nlohmann::json& j) {
  if (!j.contains("n") || !j.contains("j") || !j.contains("h"))
    throw std::invalid_argument("model JSON needs fields n, j, h");
  PairwiseModel model;
  model.n = j.at("n").get<int>();
  if (model.n < 1) throw std::invalid_argument("model JSON: n must be >= 1");
  const auto jj = j.at("j").get<std::vector<double>>();
  const std::size_t n = static_cast<std::size_t>(model.n);
  if (jj.size() != n * n)
    throw std::invalid_argument("model JSON: j must hold n*n values");
  model.j = Matrix(n, n);
  model.j.values = jj;
  model.h = j.at("h").get<std::vector<double>>();
  validate(model);
  return model;
}

void save_model(const std::filesystem::path& path,
                const PairwiseModel& model) {
  write_json(path, model_to_json(model));
}

PairwiseModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path.string() + " for reading");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("model JSON " + path.string() + ": " +
                                e.what());
  }
  return model_from_json(j);
}

void write_json(const std::filesystem::path& path,
                const nlohmann::ordered_json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace critscan
