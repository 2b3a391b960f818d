#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace wml {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Hard cap on the entry count of any single constructed matrix.  Dense
// superoperators grow as dim^4, so the guard trips long before swap death.
inline constexpr std::size_t kEntryLimit = std::size_t{1} << 20;

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed shapes: non-square input, dimension mismatch, bad subsystem list.
struct shape_error : error {
  using error::error;
};

// Result would exceed kEntryLimit.
struct size_error : error {
  using error::error;
};

// Argument outside its documented domain (bad permutation, delta range, ...).
struct argument_error : error {
  using error::error;
};

// Invalid problem specification (non-density sigma, empty spec, c = 0, ...).
struct spec_error : error {
  using error::error;
};

// Operation not available in the requested mode.
struct mode_error : error {
  using error::error;
};

// A runtime invariant (hermiticity, trace, positivity) drifted past tolerance.
struct numerical_error : error {
  using error::error;
};

// Truncated series diverged; caller must raise the substep count.
struct step_size_error : error {
  using error::error;
};

inline void check_entry_limit(std::size_t rows, std::size_t cols,
                              const char* what) {
  if (rows != 0 && rows * cols / rows != cols)
    throw size_error(std::string(what) + ": entry count overflows size_t");
  if (rows * cols > kEntryLimit)
    throw size_error(std::string(what) + ": " + std::to_string(rows) + "x" +
                     std::to_string(cols) + " exceeds the entry limit");
}

}  // namespace wml
