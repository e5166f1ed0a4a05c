#pragma once

#include <optional>
#include <string>

namespace spotdag::learning {

/// A parametric policy {beta0, beta, b}.
///   beta0: self-owned sufficiency index, in (0, 1]
///   beta:  planning belief about spot availability, in (0, 1]
///   bid:   bid price; empty for fixed-price markets where spot is granted whenever idle
struct PolicyTuple {
  double beta0 = 1.0;
  double beta = 0.5;
  std::optional<double> bid;

  /// Throws std::invalid_argument when a field is outside its range.
  void validate() const;

  std::string label() const;

  friend bool operator==(const PolicyTuple&, const PolicyTuple&) = default;
};

}  // namespace spotdag::learning
