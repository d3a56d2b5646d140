#pragma once
// Core value types shared across modules, and the error taxonomy:
//   std::invalid_argument — rejected input / precondition violation (exit 2)
//   io_error              — unreadable or unwritable file (exit 3)
//   numeric_error         — convergence or conditioning failure (exit 4)

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace critscan {

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // row-major

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  double* row(std::size_t r) { return values.data() + r * cols; }
  const double* row(std::size_t r) const { return values.data() + r * cols; }
};

struct PriceSeries {
  Matrix prices;  // one row per time step, one column per instrument
  std::vector<std::string> labels;
};

struct ReturnMatrix {
  Matrix returns;
  std::vector<std::string> labels;
};

// Sign-binarized series: entries are exactly -1 or +1.
struct BinaryMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::int8_t> spins;  // row-major
  std::vector<std::string> labels;

  BinaryMatrix() = default;
  BinaryMatrix(std::size_t r, std::size_t c)
      : rows(r), cols(c), spins(r * c, -1) {}

  std::int8_t& at(std::size_t r, std::size_t c) { return spins[r * cols + c]; }
  std::int8_t at(std::size_t r, std::size_t c) const {
    return spins[r * cols + c];
  }
  std::int8_t* row(std::size_t r) { return spins.data() + r * cols; }
  const std::int8_t* row(std::size_t r) const {
    return spins.data() + r * cols;
  }
};

// Packed configuration: bit b set iff spin b+1 is up.
using ConfigCode = std::uint64_t;

}  // namespace critscan
