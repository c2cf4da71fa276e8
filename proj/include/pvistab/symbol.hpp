#pragma once

#include <Eigen/Dense>
#include <complex>

#include "pvistab/frequency.hpp"
#include "pvistab/state.hpp"

namespace pvi {

struct PoleError : std::runtime_error {
  PointClass pole;
  explicit PoleError(PointClass p, const std::string& msg)
      : std::runtime_error(msg), pole(p) {}
};

struct BranchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Coefficients of the reduced first-order interface ODE system
//   d/dx1 (q, v1) = [[0, a12],[a21, 0]] (q, v1)
//   d/dx1 (Hc2, E) = [[0, a34],[a43, 0]] (Hc2, E)
struct SymbolCoefficients {
  cplx a12, a21, a34, a43;
};

// Closed forms; homogeneous of degree 1 in (tau, eta). Throws PoleError at
// P1 (a12), P2 (a21 denominator), P3 (a34) within pole_tol of the pole sets.
SymbolCoefficients symbol_coefficients(const BasicState& s, const FrequencyPoint& pt,
                                       double pole_tol = 1e-6);

// Unscaled variant for points off the hemisphere (homogeneity tests and
// rescaled-weight checks). No pole guard beyond exact division.
SymbolCoefficients symbol_coefficients_xi(const BasicState& s, double gamma,
                                          double delta, double eta);

// Independent re-derivation: assembles the 5x5 plasma and 3x3 vacuum
// first-order symbols and eliminates the algebraic (non-differentiated)
// unknowns by a dense linear solve. Agrees with symbol_coefficients but
// shares no code path with it.
struct ReducedSymbol {
  SymbolCoefficients c;
  cplx H2_over_q;       // tangential field response per unit total pressure
  cplx Hc1_over_E;      // vacuum tangential field per unit electric field
  double cross_residual;  // self-coupling terms, exactly 0 in exact arithmetic
};
ReducedSymbol reduce_full_symbol(const BasicState& s, const FrequencyPoint& pt);

// Block-antidiagonal 4x4 generator acting on (q, v1, Hc2, E).
Eigen::Matrix4cd assemble_interface_matrix(const SymbolCoefficients& c);

// ---- spectral building blocks -------------------------------------------

// All take unnormalized (gamma, delta, eta); degree-2 homogeneous.
cplx omega1_squared(const BasicState& s, double gamma, double delta, double eta);
cplx omega2_squared(const BasicState& s, double gamma, double delta, double eta);

// Decaying-root branch: the square root with Re > 0 for gamma > 0; on the
// boundary the value is the limit from gamma > 0, fixed by probing at
// gamma + h, h = 1e-7 * k. Throws BranchError if probes at h and h/2
// disagree about the limit.
cplx omega1(const BasicState& s, const FrequencyPoint& pt);
cplx omega2(const BasicState& s, const FrequencyPoint& pt);

// chi: square root of ((mu^2 rho alpha + eta^2) H^2 + mu^2 rho) /
// (mu^2 rho + eta^2 H^2), taken with Re > 0, or Im > 0 when the real part
// vanishes. chi = 0 exactly on the P2 set; it blows up on the a12 zero set,
// where only the products below stay finite.
cplx chi(const BasicState& s, const FrequencyPoint& pt);

// Pole-free products: mu*chi*a12 = -chi (mu^2 rho + eta^2 H^2) and
// chi*omega1, with (chi omega1)^2 = alpha rho mu^2 + eta^2.
cplx mu_chi_a12(const BasicState& s, const FrequencyPoint& pt);
cplx chi_omega1(const BasicState& s, const FrequencyPoint& pt);

struct BranchCertificate {
  double h;                  // probe offset used on the boundary
  bool perturbed;            // true when the gamma=0 probe was needed
  bool chi_regularized;      // true when the P2/a12-zero product forms were used
  cplx chi_rule;             // pointwise-rule value
  cplx chi_continuity;       // gamma-continuity value
  bool chi_branches_agree;
};

// Stable/unstable eigenvectors of the interface generator:
//   e1 = (mu chi a12, -mu chi omega1, 0, 0),  e3 flips the omega1 sign,
//   e2 = (0, 0, omega2, eps tau),             e4 flips eps tau.
// e1, e2 never vanish on the hemisphere. Throws PoleError at P1/P3; at P2
// chi = 0 and the products are returned in regularized form.
struct ModeDecomposition {
  cplx omega1, omega2, chi;
  cplx mu_chi_a12, mu_chi_omega1, chi_omega1;
  Eigen::Vector4cd e1, e2, e3, e4;
  BranchCertificate branch;
};
ModeDecomposition eigen_modes(const BasicState& s, const FrequencyPoint& pt,
                              double tol = 1e-6);

// ---- boundary operator symbols -------------------------------------------

// b phi-row data, the invertible 3x3 multiplier Q with det Q = |b|^2,
// and the rows (beta; ell) = Q*M. All rows of Q, beta, ell carry the 1/k
// normalization (degree 0); b and theta = |b|^2/k have degree 1. On the
// hemisphere k = 1 and the matrices take their displayed forms.
struct BoundarySymbols {
  Eigen::Vector3cd b;
  Eigen::Matrix3cd Q;
  double theta;                    // |b|^2 / k, real >= 0
  Eigen::Matrix<cplx, 2, 4> beta;
  Eigen::Matrix<cplx, 1, 4> ell;
  static Eigen::Matrix<double, 3, 4> M(double Hc);
};
BoundarySymbols boundary_symbols(const BasicState& s, const FrequencyPoint& pt);
BoundarySymbols boundary_symbols_xi(const BasicState& s, double gamma, double delta,
                                    double eta);

// ---- boundary derivative identities ---------------------------------------

// Closed forms on gamma = 0, eta != 0, parametrized by the squared slope
// K = ((delta + v eta)/eta)^2. Valid away from P1 (K=0) and P2 (kden=0).
// a12, a21 are purely imaginary there; the gamma derivatives of a12, a21 are
// real and the gamma derivatives of omega1^2, omega2^2 purely imaginary.
struct BoundaryDerivatives {
  double K;
  double sigma;     // sign of (delta + v eta)/eta
  double kden;      // (1 - alpha rho K) H^2 - rho K
  cplx a12, a21;
  cplx da12_dgamma, da21_dgamma;    // real
  cplx dom1sq_dgamma, dom2sq_dgamma;  // purely imaginary
  cplx da34_dgamma;
  cplx om1sq;       // value at gamma = 0
};
BoundaryDerivatives boundary_derivatives(const BasicState& s, const FrequencyPoint& pt);

}  // namespace pvi
