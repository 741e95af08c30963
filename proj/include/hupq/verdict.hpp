#pragma once

#include <cstdint>
#include <string>

namespace hupq {

//! Tri-state outcome of a uniqueness decision. UNDECIDED is reserved for
//! configurations outside the implemented decision rules; it is never a
//! substitute for a failed certificate check.
enum class Verdict { HUP, NOT_HUP, UNDECIDED };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::HUP: return "HUP";
    case Verdict::NOT_HUP: return "NOT_HUP";
    default: return "UNDECIDED";
  }
}

//! Knobs shared by the decision entry points. Defaults match the CLI defaults.
struct DecideOptions {
  long long maxden = 1000000;   //!< denominator bound for rationality tests
  double tol = 1e-10;           //!< Fourier-vanishing tolerance, relative to total variation
  int grid_points = 64;         //!< points per grid axis for verification grids
  double extent = 20.0;         //!< half-extent of verification grids
  std::uint64_t seed = 0;       //!< RNG seed; identical seeds give identical output
};

}  // namespace hupq
