#pragma once

#include <vector>

#include "pvistab/lopatinskii.hpp"

namespace pvi {

// Thrown by solve_stable_bvp when |det[beta (e1 e2)]| <= tol: the probe sits
// too close to a determinant root (or to the P1/P3 prefactor zeros) for the
// 2x2 boundary solve to mean anything.
struct NearSingular : std::runtime_error {
  double abs_det;
  NearSingular(double d, const std::string& msg)
      : std::runtime_error(msg), abs_det(d) {}
};

// Decaying solution of the reduced interface ODE on x1 > 0:
//   V(x1) = c1 e1 exp(-omega1 x1) + c2 e2 exp(-omega2 x1),
// with (c1, c2) fixed by beta V(0) = first two rows of Q g_hat.
struct StableSolution {
  cplx c1, c2;
  ModeDecomposition modes;
  Eigen::Vector4cd trace;  // V(0)
  cplx det;                // det[beta (e1 e2)]
  double residual;         // |beta V(0) - h| / |g_hat|, zero for g_hat = 0
};

StableSolution solve_stable_bvp(const BasicState& s, const FrequencyPoint& pt,
                                const Eigen::Vector3cd& g_hat, double tol = 1e-8);

Eigen::Vector4cd evaluate_solution(const StableSolution& sol, double x1);
Eigen::Vector4cd evaluate_solution(const BasicState& s, const FrequencyPoint& pt,
                                   cplx c1, cplx c2, double x1);

// Exact integral of |V|^2 over (0, inf):
//   |c1|^2 |e1|^2 / (2 Re omega1) + |c2|^2 |e2|^2 / (2 Re omega2)
//     + 2 Re[ conj(c1) c2 <e1, e2> / (conj(omega1) + omega2) ].
// +inf when a mode with nonzero coefficient has Re omega <= 0.
double interior_norm_sq(const BasicState& s, const FrequencyPoint& pt, cplx c1,
                        cplx c2);
double interior_norm_sq(const StableSolution& sol);
// Half-line L2 norm, sqrt of the above.
double interior_norm(const BasicState& s, const FrequencyPoint& pt, cplx c1,
                     cplx c2);

// Front transform from the third row of the multiplied boundary condition:
//   phi = (q3 . g_hat - ell . trace) / theta,
// q3 the third row of Q. theta > 0 on the hemisphere under the hypotheses.
cplx reconstruct_front(const BasicState& s, const FrequencyPoint& pt,
                       const Eigen::Vector3cd& g_hat,
                       const Eigen::Vector4cd& trace);

struct EnergyProbeResult {
  FrequencyPoint pt;
  cplx c1, c2;
  double trace_norm;     // |V(0)|
  double interior_norm;  // (integral of |V|^2)^{1/2}
  double front_abs;      // |phi|
  double amplification;  // trace_norm / |g_hat|
};
EnergyProbeResult energy_probe(const BasicState& s, const FrequencyPoint& pt,
                               const Eigen::Vector3cd& g_hat, double tol = 1e-8);

// Lifts base_pt off the boundary along constant (delta, eta), renormalized to
// the hemisphere, once per gamma; probes each lifted point. slope is the
// least-squares log-log fit of amplification against gamma over the three
// smallest gammas; slope_all uses every probe. Near a simple determinant
// root the amplification grows like 1/gamma (slope -1); at a point with the
// determinant bounded away from zero it stays bounded (slope 0).
struct GammaSweepResult {
  std::vector<EnergyProbeResult> probes;  // one per gamma, input order
  double slope;
  double slope_all;
};
GammaSweepResult gamma_sweep(const BasicState& s, const FrequencyPoint& base_pt,
                             const std::vector<double>& gammas,
                             const Eigen::Vector3cd& g_hat);

// gamma * interior_norm^2 + trace_norm^2 <= C |g_hat|^2, with C fitted as the
// worst ratio over g_hat plus n_draws unit-normal draws from a fixed seed.
// holds reports that every draw solved with a finite ratio.
struct KreissCheckResult {
  double fitted_C;
  double min_ratio;
  int draws;
  bool holds;
};
KreissCheckResult kreiss_quadrature_check(const BasicState& s,
                                          const FrequencyPoint& pt,
                                          const Eigen::Vector3cd& g_hat,
                                          int n_draws = 20,
                                          unsigned seed = 12345);

// Dual-route decoupling check near the P1/P3 poles, where the determinant
// prefactors vanish and the 2x2 solve degenerates: the closed-form stable
// solution, re-expanded in a numerically diagonalized eigenbasis of the
// interface matrix, must put zero mass on the growing modes at every x1.
// Catches branch mix-ups of the omega square roots that the determinant
// cannot see there.
struct PoleDecouplingReport {
  FrequencyPoint pt;             // gamma-lifted probe point
  double max_unstable_fraction;  // sup_x |growing coords| / |coords(0)|
  bool decoupled;                // <= 1e-8
};
PoleDecouplingReport check_pole_decoupling(const BasicState& s, PointClass pole,
                                           double gamma_lift = 1e-3);

}  // namespace pvi
