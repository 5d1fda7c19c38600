#pragma once

#include <Eigen/Core>

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace oacsim {

using Index = Eigen::Index;
using Complex = std::complex<double>;

/// Length-L sequence of complex values (symbols, samples, estimates).
using ComplexSequence = Eigen::VectorXcd;

/// Random engine used throughout. Streams are derived with `derive_stream`.
using Rng = std::mt19937_64;

/// Bad arguments: wrong dimensions, out-of-range parameters, non-finite data.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A prior that cannot be built, e.g. a constant symbol sequence (zero variance).
class DegeneratePrior : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical operation that should not fail on valid input did fail.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidInput(what);
}

}  // namespace detail
}  // namespace oacsim
