#pragma once

#include <string_view>

#include "ddbh/fock.hpp"
#include "ddbh/numerics.hpp"

namespace ddbh {

enum class StabilityVerdict { Stable, Unstable, Undetermined };

constexpr std::string_view to_string(StabilityVerdict s) {
  switch (s) {
    case StabilityVerdict::Stable: return "stable";
    case StabilityVerdict::Unstable: return "unstable";
    case StabilityVerdict::Undetermined: return "undetermined";
  }
  return "undetermined";
}

/// A self-consistent mean-field coherence with the state it describes.
struct MeanFieldSolution {
  Complex b{0.0, 0.0};      // <b>
  Complex f_eff{0.0, 0.0};  // F - J <b>
  Observables obs;
  double residual = 0.0;    // |map(b) - b|
  StabilityVerdict stable = StabilityVerdict::Undetermined;
};

}  // namespace ddbh
