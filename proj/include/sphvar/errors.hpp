#pragma once

#include <stdexcept>
#include <string>

namespace sphvar {

/// Invalid construction parameter (B <= 1, kappa <= 0, N too small, ...).
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of a function.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Index out of range (harmonic order, scale, node).
struct IndexError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

/// Input data is unusable (empty sample, non-finite values).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Coefficient pyramid does not match the frame it is used with.
struct ShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Requested construction exceeds supported sizes.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Scenario description is invalid or inconsistent.
struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// File input/output failure; the message carries the path.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sphvar
