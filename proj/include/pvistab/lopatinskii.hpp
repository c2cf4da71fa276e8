#pragma once

#include <array>
#include <vector>

#include "pvistab/symbol.hpp"

namespace pvi {

// Boundary determinant det[beta (e1 e2)] =
//   mu eps tau (mu chi a12 - chi omega1 omega2 Hc^2).
// Total on the hemisphere; it vanishes identically at P1/P3 through the
// mu/tau prefactors (pole artifacts of the e1, e2 normalization, excluded by
// classification precedence), and its genuine boundary zeros are the
// uniform-stability failures.
cplx lopatinskii_det(const BasicState& s, const FrequencyPoint& pt);

// Prefactor-free scalar root equation -mu^2 rho - eta^2 H^2 - omega1 omega2 Hc^2.
// Vanishes at boundary roots and, spuriously, on the a12 zero set where the
// chi normalization degenerates. Throws PoleError at P2 (omega1 diverges).
cplx reduced_root_equation(const BasicState& s, const FrequencyPoint& pt);

// Sign-flipped partner picked up when the root equation is squared.
cplx spurious_root_equation(const BasicState& s, const FrequencyPoint& pt);

// Quartic in the boundary trace speed V = tau/(i eta) + v (i.e. mu = i eta V):
// coefficient c[j] multiplies V^j. P, Q, disc are the depressed-quartic
// classification invariants. At eps = 0 the odd coefficients vanish.
struct QuarticCoefficients {
  std::array<double, 5> c;
  double P, Q, disc;
};
QuarticCoefficients interface_quartic(const BasicState& s);

// Companion-matrix eigenvalues polished by Newton to residual
// <= 1e-12 * sum|c_j|. Throws std::invalid_argument when the leading
// coefficient degenerates.
std::array<cplx, 4> solve_quartic(const std::array<double, 5>& c);

struct SpeedRoot {
  cplx V;
  bool is_real;
  bool exceeds_alfven;       // rho V^2 > H^2, required for admissibility
  bool satisfies_unsquared;  // vanishes on the true root equation, not the
                             // spurious square partner
  bool admissible;
  double unsquared_residual;
  double spurious_residual;
};
// All four quartic roots with admissibility flags, sorted by Re V.
std::vector<SpeedRoot> admissible_roots(const BasicState& s, double real_tol = 1e-8);

// gamma = 0, delta = eta (V - v), normalized, eta > 0 representative.
// V = 0 lands on the P1 pole, V = v on the P3 pole.
FrequencyPoint map_speed_to_sigma(const BasicState& s, double V);

struct BoundaryRoot {
  FrequencyPoint pt;      // eta > 0 representative of the antipodal pair
  double V;               // trace speed delta/eta + v
  double residual;        // |det| after refinement
  double dist_critical;   // distance to the nearest pole / mode-degeneracy point
};

struct RootScanReport {
  StabilityClass predicted_class;
  int predicted_count;                // antipodal pairs
  std::vector<BoundaryRoot> roots;    // pairs counted once
  bool count_consistent;              // observed == predicted
  bool quartic_consistent;            // observed matches admissible quartic speeds
  double max_speed_mismatch;          // scan V vs quartic V
  double min_abs_det_off_roots;       // over the scan grid, away from roots/poles
};

// Scans the boundary circle (both eta signs; exclusion balls of radius
// 10*tol around poles and mode degeneracies), brackets minima of |det| and
// refines them to |det| <= 1e-8. Requires the hypotheses and n_grid >= 10^4.
RootScanReport scan_boundary_roots(const BasicState& s, int n_grid = 10000,
                                   double tol = 1e-6);

// min |det| over a hemisphere grid restricted to gamma >= gamma_min, with at
// least n_target points after the restriction.
double min_interior_abs_det(const BasicState& s, int n_target, double gamma_min);

}  // namespace pvi
