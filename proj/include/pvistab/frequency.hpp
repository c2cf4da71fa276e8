#pragma once

#include <complex>
#include <vector>

#include "pvistab/state.hpp"

namespace pvi {

using cplx = std::complex<double>;

// Laplace-Fourier frequency (tau, eta) = (gamma + i delta, eta), gamma >= 0.
// Most operations assume the point lies on the unit hemisphere
// gamma^2 + delta^2 + eta^2 = 1.
struct FrequencyPoint {
  double gamma = 0.0;
  double delta = 0.0;
  double eta = 0.0;

  cplx tau() const { return {gamma, delta}; }
  double k() const;  // sqrt(|tau|^2 + eta^2)
  cplx mu(double v) const { return {gamma, delta + v * eta}; }
  bool on_sigma(double tol = 1e-12) const;
  FrequencyPoint antipode() const { return {gamma, -delta, -eta}; }
};

// Rescales (gamma, delta, eta) onto the hemisphere. Rejects the zero vector
// and gamma < 0.
FrequencyPoint normalize_to_sigma(double gamma, double delta, double eta);

enum class PointClass {
  Interior,         // gamma > tol
  BoundaryLopOK,    // gamma = 0, boundary determinant bounded away from zero
  BoundaryLopRoot,  // gamma = 0, boundary determinant vanishes
  Omega1ZeroA,      // plasma mode degenerates: delta + v eta = +-|H|/sqrt(rho) eta
  Omega1ZeroB,      // plasma mode degenerates: delta + v eta = +-sound_speed eta
  Omega2Zero,       // vacuum mode degenerates: eta = +-eps delta
  PoleP1,           // mu = 0
  PoleP2,           // delta + v eta = +-fast_interface_speed eta
  PoleP3            // tau = 0
};

const char* to_string(PointClass c);

struct Classification {
  PointClass cls;
  double distance;  // to the defining set: 3D distance for special points,
                    // gamma for Interior/BoundaryLopOK, |det| for BoundaryLopRoot
};

// Precedence within tol: poles, then mode-degeneracy sets, then the boundary
// determinant test. Under the hypotheses the special sets are pairwise
// disjoint except that PoleP3 may meet Omega1ZeroB when |v| = sound_speed
// (poles win).
Classification classify_point(const BasicState& s, const FrequencyPoint& pt,
                              double tol = 1e-6);

// The finite set of boundary-circle points of a given special class,
// both antipodal representatives included. Empty for the generic classes.
std::vector<FrequencyPoint> special_boundary_points(const BasicState& s, PointClass which);

// Distance from pt to the nearest special point (poles and mode degeneracies).
double distance_to_critical(const BasicState& s, const FrequencyPoint& pt);

// Deterministic quasi-uniform covering of the hemisphere: latitude rings plus
// the boundary circle at doubled density; contains (0,0,+-1) and (0,+-1,0).
// Point count grows like 4n^2/pi + 4n. Requires n >= 8.
std::vector<FrequencyPoint> hemisphere_grid(int n);

}  // namespace pvi
