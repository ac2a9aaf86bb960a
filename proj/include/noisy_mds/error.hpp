#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace noisy_mds {

// Failure categories. Each maps onto one CLI exit code (see exit_code()).
enum class ErrorKind {
  Usage,              // bad arguments, invalid configuration
  DataFormat,         // unparsable or malformed input files
  Dimension,          // shape mismatch, p out of range
  NonConvergence,     // eigen/SVD iteration failed
  NonEuclideanRank,   // some top-p eigenvalue <= 0
  NotPositiveDefinite,
  SingularGram,
  InvalidRegime,      // b_n^2 <= 0 or u_n(t) <= 0
  EmptySet,           // b_n + a_n q <= 0
  DegenerateResiduals,
  ReplicateBudget,    // too many failed bootstrap replicates
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::Usage: return "Usage";
    case ErrorKind::DataFormat: return "DataFormat";
    case ErrorKind::Dimension: return "Dimension";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::NonEuclideanRank: return "NonEuclideanRank";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::SingularGram: return "SingularGram";
    case ErrorKind::InvalidRegime: return "InvalidRegime";
    case ErrorKind::EmptySet: return "EmptySet";
    case ErrorKind::DegenerateResiduals: return "DegenerateResiduals";
    case ErrorKind::ReplicateBudget: return "ReplicateBudget";
  }
  return "Unknown";
}

// 0 success, 2 usage/validation, 3 data format, 4 numerical, 5 replicate budget.
inline int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Usage:
    case ErrorKind::Dimension:
      return 2;
    case ErrorKind::DataFormat:
      return 3;
    case ErrorKind::ReplicateBudget:
      return 5;
    default:
      return 4;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::vector<int> indices = {})
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind),
        indices_(std::move(indices)) {}

  ErrorKind kind() const noexcept { return kind_; }

  // Offending point indices, when the failure is per-point (e.g. PD checks).
  const std::vector<int>& indices() const noexcept { return indices_; }

 private:
  ErrorKind kind_;
  std::vector<int> indices_;
};

// Non-fatal structured diagnostic attached to results.
struct Warning {
  std::string code;
  std::string message;

  bool operator==(const Warning&) const = default;
};

}  // namespace noisy_mds
