#pragma once

#include <stdexcept>
#include <string>

namespace ccdlab {

// Base class for everything this library throws.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad configuration or bad arguments (CLI exit code 2).
class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(what) {}
};

// Numeric breakdown: non-finite values, defective matrices, ... (CLI exit code 3).
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(what) {}
};

// A request outside the regime the theory covers (off-resonance mode control,
// zero-frequency evaluation of a static spectral component, ...).
class UnsupportedRegime : public Error {
 public:
  explicit UnsupportedRegime(const std::string& what) : Error(what) {}
};

// Fit did not converge; carries the diagnostics string assembled by the fitter.
class FitFailure : public Error {
 public:
  explicit FitFailure(const std::string& what) : Error(what) {}
};

}  // namespace ccdlab
