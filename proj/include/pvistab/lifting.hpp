#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace pvi {

using cplx = std::complex<double>;

// Uniform samples of a front function on the L-periodic grid x2_k = k L / N.
struct FrontSample {
  int N = 0;  // power of two, >= 16
  double L = 0.0;
  std::vector<cplx> values;
};

// Throws std::invalid_argument unless N is a power of two >= 16, L > 0,
// values has N finite entries.
void validate(const FrontSample& f);

// Discrete frequencies xi_j = 2 pi j' / L in DFT index order
// (j' = j for j <= N/2, j - N above).
std::vector<double> front_frequencies(const FrontSample& f);

// Fourier series coefficients c_j (forward DFT / N), DFT index order.
std::vector<cplx> front_transform(const FrontSample& f);

// Spectral torus Sobolev norm (L/N sum of <xi>^{2s} |unitary DFT|^2)^{1/2}.
double sobolev_norm(const FrontSample& f, double s);

// Even C^2 cutoff: chi = 1 on [-1, 1], supported in [-M, M], built as a
// trapezoid ramp on [1, M] with quintic-smoothstep eased corners over a
// fraction ease_frac of the ramp on each side. The plateau slope
// 1/((M-1)(1-ease_frac)) meets the |chi'| <= 2/M budget exactly when
// ease_frac <= (M-2)/(2(M-1)); no profile at all can meet it below M = 2
// (the ramp must descend by 1 over a length shorter than M/2), so
// slope_bound_ok records the dense-grid verification instead of being
// assumed.
struct CutoffSpec {
  double M = 0.0;
  double ease_frac = 0.0;
  double plateau_slope = 0.0;  // max |chi'|
  bool slope_bound_ok = false;

  double chi(double s) const;
  double dchi(double s) const;
};

// Throws std::invalid_argument for M <= 1.
CutoffSpec make_cutoff(double M);

// Half-plane lift Psi(x1, .) = sum_j chi(x1 <xi_j>) c_j exp(i xi_j x2) and
// its exact x1-derivative (multiplier chi'(x1 <xi>) <xi>). Row i holds the
// x2 grid values at x1_grid[i].
struct LiftedFront {
  std::vector<double> x1;
  double L = 0.0;
  Eigen::MatrixXcd psi;
  Eigen::MatrixXcd dpsi_dx1;
};
LiftedFront lift(const FrontSample& front, const CutoffSpec& cutoff,
                 const std::vector<double>& x1_grid);

// Sup norm over x2 of the second-order one-sided difference
// (-3 Psi(0,.) + 4 Psi(h,.) - Psi(2h,.)) / (2h); the grid must contain
// 0, h, 2h. Vanishes at second order in h since the multiplier is constant
// near x1 = 0.
double verify_flatness(const LiftedFront& lf, double h);

// sup |d1 Psi| per M over an internal x1 grid, scaled by M^{3/4} and
// normalized by the H^2 norm of the front. fitted_constant is the worst
// scaled value; fitted_exponent the log-log slope of the sup against M.
struct DecayCheckResult {
  std::vector<double> M;
  std::vector<double> sup_dpsi;
  std::vector<double> scaled;  // sup * M^{3/4} / ||phi||_{H^2}
  double fitted_constant = 0.0;
  double fitted_exponent = 0.0;
  bool monotone_nonincreasing = false;  // of sup_dpsi in M; reported only
};
DecayCheckResult linf_decay_check(const FrontSample& front,
                                  const std::vector<double>& M_list);

// Jacobian floor of the interface-flattening change of variables:
// min over the grid of 1 + Re d1 Psi, required >= 1/2.
struct DiffeoReport {
  double min_value = 0.0;
  bool ok = false;
};
DiffeoReport diffeo_check(const LiftedFront& lf);

// (integral over x1 of the squared spectral H^s norm of the rows)^{1/2},
// trapezoid in x1.
double lifted_sobolev_norm(const LiftedFront& lf, double s);

}  // namespace pvi
