#pragma once

#include <stdexcept>

namespace kst {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad user-supplied configuration (CLI exit code 2).
struct ConfigError : Error {
  using Error::Error;
};

/// Resolution N below the separator threshold, or the doubling schedule
/// exhausted its cap on a pathological residual.
struct ResolutionError : Error {
  using Error::Error;
};

/// Two plateau images coincide exactly; signals a defective inner map.
struct InjectivityError : Error {
  using Error::Error;
};

/// An adaptive pass failed the 6/7 residual bound (CLI exit code 4).
struct NonContractionError : Error {
  using Error::Error;
};

}  // namespace kst
