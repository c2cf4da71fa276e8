#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pvi {

// Piecewise-constant background on the plasma side of a flat interface,
// plus the tangential vacuum field and the electric scaling parameter.
// All quantities are nondimensional.
struct BasicState {
  double rho = 1.0;          // plasma density, > 0
  double sound_speed = 1.0;  // > 0
  double v = 0.0;            // tangential plasma velocity
  double H = 0.0;            // tangential plasma magnetic field
  double Hc = 0.0;           // tangential vacuum magnetic field
  double eps = 0.1;          // vacuum electric parameter, in (0,1)
};

// Throws std::invalid_argument unless rho > 0, sound_speed > 0, 0 < eps < 1.
void validate(const BasicState& s);

struct DerivedConstants {
  double alpha;                 // 1 / (rho * sound_speed^2)
  double alfven_speed;          // |H| / sqrt(rho)
  double fast_interface_speed;  // |H| / sqrt(rho * (1 + alpha H^2))
  double disc;                  // discriminant alpha^2 (H^4-Hc^4)^2 + 4 Hc^4, > 0
  double z_plus;                // larger root of the eps=0 interface quadratic
  double z_minus;               // smaller root; z_minus never exceeds H^2
};

// z_plus/z_minus solve z^2 (1+alpha H^2) - z (alpha(H^4-Hc^4) + 2H^2)
//                      + H^4 - Hc^4 = 0  (squared interface speeds at eps=0).
DerivedConstants derive_constants(const BasicState& s);

struct HypothesisCheck {
  std::string name;
  bool pass;
  bool applicable;  // false => vacuously passing (empty forbidden set)
  double margin;    // distance of the tested quantity from the forbidden set
  double rel_margin;
};

struct HypothesisReport {
  std::vector<HypothesisCheck> checks;
  bool all_pass;
  double rel_tol;
};

// Nondegeneracy conditions on the background. Equality within rel_tol of a
// forbidden value counts as a violation.
//   nonzero_velocity_and_vacuum_field : v != 0 and Hc != 0
//   positive_density_nonzero_field    : rho > 0 and H != 0
//   alfven_not_sonic                  : alpha H^2 != 1
//   velocity_not_alfven               : |v| != |H|/sqrt(rho)
//   velocity_not_fast_interface       : |v| != |H|/sqrt(rho(1+alpha H^2))
//   velocity_not_resonant             : rho v^2 != z_plus, z_minus; only
//       applicable when H^2 < min(1/alpha, rho v^2)
HypothesisReport check_hypotheses(const BasicState& s, double rel_tol = 1e-9);

struct HypothesisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class StabilityClass {
  TwoBoundaryRoots,  // H^2 < min(1/alpha, rho v^2)
  NoRoots            // H^2 > min(1/alpha, rho v^2)
};

// Throws HypothesisError if check_hypotheses fails (the equality case
// separating the two classes is excluded by the hypotheses).
//
// Caveat: on the wedge rho v^2 < H^2 < 1/alpha the determinant scan still
// finds the two surface modes (existence is governed by alpha H^2 < 1 alone;
// at small eps the velocity only translates the modes along the boundary
// circle).  scan_boundary_roots reports the disagreement via
// count_consistent rather than suppressing measured zeros.
StabilityClass stability_class(const BasicState& s);

const char* to_string(StabilityClass c);

}  // namespace pvi
