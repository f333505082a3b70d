#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qce {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Ordered list of tensor-factor dimensions. The leftmost factor is the
/// most significant index: a composite basis state |a b c> has linear
/// index (a*dim(b) + b)*dim(c) + c.
using DimVector = std::vector<Index>;

inline Index product(const DimVector& dims) {
  Index p = 1;
  for (Index d : dims) p *= d;
  return p;
}

/// Bad or inconsistent input (malformed circuit, dim mismatch, missing
/// wire, ...). CLI exit code 1.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// A computation produced a result that contradicts an exact mathematical
/// guarantee (failed factorization, non-converging closure, ...).
/// CLI exit code 2.
class NumericDefect : public std::runtime_error {
 public:
  explicit NumericDefect(const std::string& what) : std::runtime_error(what) {}
};

struct Config {
  double tol = 1e-9;          // default absolute tolerance
  double group_tol = 1e-7;    // eigenvalue grouping
  Index max_dim = 4096;       // total Hilbert dimension cap
  Index max_histories = 1000000;
};

/// Process-wide defaults. max_dim can be overridden with QCE_MAX_DIM.
Config& config();

inline void check_dim(Index dim, const char* where) {
  if (dim > config().max_dim)
    throw InputError(std::string(where) + ": dimension " +
                     std::to_string(dim) + " exceeds cap " +
                     std::to_string(config().max_dim) +
                     " (set QCE_MAX_DIM to raise)");
}

}  // namespace qce
