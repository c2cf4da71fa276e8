#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pvistab/lopatinskii.hpp"
#include "pvistab/symbol.hpp"

namespace pvi {

// Fitted constants of one microlocal symmetrizer patch. Only the fields used
// by the patch's case are meaningful; the rest stay at their defaults.
struct SymmetrizerConstants {
  double kappa = 0.0;    // dissipativity: Re(r T A T^-1) >= kappa * weight
  double C = 0.0;        // coercivity multiplier of the boundary form
  double Kprime = 1.0;   // outgoing-mode diagonal weight, >= 1
  double C0 = 0.0;       // stable-trace control constant at the center
  double eps1 = 0.0;     // nondiagonalizable block: off-diagonal entry,
                         // eps1 = i / d(omega^2)/dgamma at the center
  double eps2 = 0.0;     // nondiagonalizable block: corner entry
  double g_const = 0.0;  // nondiagonalizable block: -i gamma G gain
  double d1 = 0.0, d2 = 0.0, s_const = 0.0;  // a21-pole block entries
  double C_delta = 0.0;  // pole cases: |reduced boundary det| >= C_delta * gamma
};

// One certified neighborhood. The transform T, symmetrizer r and weights are
// functions of the frequency; the bundle stores the recipe (case + center +
// constants), and the *_at evaluators below realize them per sample.
struct SymmetrizerBundle {
  PointClass kind = PointClass::Interior;
  FrequencyPoint center;
  double radius = 0.1;
  int branch_sign = +1;   // a21 pole: sign s in tilde tau = mu - i s c_f eta
  bool mirrored = false;  // a21 pole: evaluated through the (delta,eta) -> -(delta,eta)
                          // conjugation symmetry of the symbol
  Eigen::Matrix4d Lambda = Eigen::Matrix4d::Identity();  // mode mixer, pole cases only
  Eigen::Matrix4cd T0, T0inv;  // transform at the center (diagnostic; pole cases
                               // store the nearest regular evaluation)
  SymmetrizerConstants constants;
};

// Deterministic Halton sample set in an (arc, gamma) chart around the center,
// projected to the hemisphere. Every fifth sample sits on gamma = 0 for
// boundary centers; samples falling on an exact pole are skipped by the
// evaluators. The same (bundle, count) always yields the same points.
std::vector<FrequencyPoint> bundle_samples(const SymmetrizerBundle& b, int count = 500);

// ---- per-sample evaluators -------------------------------------------------

// T^-1 (columns spanning the mode decomposition) and its closed-form inverse.
Eigen::Matrix4cd transform_inv_at(const BasicState& s, const SymmetrizerBundle& b,
                                  const FrequencyPoint& pt);
Eigen::Matrix4cd transform_at(const BasicState& s, const SymmetrizerBundle& b,
                              const FrequencyPoint& pt);

// Closed form of T (Lambda A Lambda^-1) T^-1: diagonal for the diagonalizable
// cases, the displayed 2x2 blocks otherwise.
Eigen::Matrix4cd generator_at(const BasicState& s, const SymmetrizerBundle& b,
                              const FrequencyPoint& pt);

// Hermitian symmetrizer r(tau, eta).
Eigen::Matrix4cd symmetrizer_at(const BasicState& s, const SymmetrizerBundle& b,
                                const FrequencyPoint& pt);

// Diagonal of the dissipativity weight (without the kappa factor):
// 1, gamma, gamma^3, or the anisotropic (gamma/|tilde tau|^2, gamma, gamma, gamma).
Eigen::Vector4d dissipativity_weight_at(const BasicState& s, const SymmetrizerBundle& b,
                                        const FrequencyPoint& pt);

// Right-hand side of the boundary coercivity: 1, or gamma^2 at a root patch.
double coercivity_rhs_at(const SymmetrizerBundle& b, const FrequencyPoint& pt);

// Boundary rows in transformed coordinates: beta Lambda^-1 T^-1.
Eigen::Matrix<cplx, 2, 4> boundary_rows_at(const BasicState& s, const SymmetrizerBundle& b,
                                           const FrequencyPoint& pt);

// Relative defect of T (Lambda A Lambda^-1) T^-1 against generator_at, with A
// assembled from the actual symbol coefficients.
double similarity_residual(const BasicState& s, const SymmetrizerBundle& b,
                           const FrequencyPoint& pt);

// Reduced boundary determinants of the two pole systems; both vanish linearly
// in gamma at the pole and stay bounded away from zero off it.
cplx pole_mu_boundary_det(const BasicState& s, const FrequencyPoint& pt);
cplx pole_tau_boundary_det(const BasicState& s, const FrequencyPoint& pt);

// a21-pole diagnostics: omega0 = -omega1^2 tilde-tau and its gamma = 0 value
// i e0(delta, eta); e0 is smooth through the pole and positive on the
// canonical branch (branch_sign * eta > 0).
cplx p2_omega0(const BasicState& s, const FrequencyPoint& pt, int branch_sign);
double p2_e0(const BasicState& s, double delta, double eta, int branch_sign);

// ---- builders ---------------------------------------------------------------

// Each builder fits the constants on the deterministic sample set, halving the
// radius (down to 1e-4) until the certification below passes; the returned
// bundle records the final radius and constants whether or not it certified.
SymmetrizerBundle build_interior(const BasicState& s, const FrequencyPoint& center,
                                 int samples = 500);
SymmetrizerBundle build_boundary_root(const BasicState& s, const FrequencyPoint& center,
                                      int samples = 500);
SymmetrizerBundle build_nondiag(const BasicState& s, const FrequencyPoint& center,
                                int samples = 500);
SymmetrizerBundle build_pole_mu(const BasicState& s, const FrequencyPoint& center,
                                int samples = 500);
SymmetrizerBundle build_pole_p2(const BasicState& s, const FrequencyPoint& center,
                                int samples = 500);
SymmetrizerBundle build_pole_tau(const BasicState& s, const FrequencyPoint& center,
                                 int samples = 500);

// Dispatch on classify_point; throws std::invalid_argument for BoundaryLopRoot
// centers that are not certified simple (|d det / d arc| < 1e-3).
SymmetrizerBundle build_bundle(const BasicState& s, const FrequencyPoint& center,
                               int samples = 500);

struct CertificationResult {
  double min_eig_dissipativity = 0.0;  // min over samples of
                                       // lambda_min(Re(r G) - kappa W), scaled
                                       // by 1 + 1e-4 |.| so pole-patch matrices
                                       // of huge norm are judged against their
                                       // own fp resolution; for the two
                                       // direct-estimate pole cases, of
                                       // min_j(Re omega_j - kappa w_j)
  double min_eig_coercivity = 0.0;     // min of lambda_min(r + C B*B - rhs I),
                                       // same scaling; pole cases: min of
                                       // |det| - C_delta gamma
  double max_similarity_residual = 0.0;
  int samples = 0;
  std::vector<int> failures;  // sample indices violating a bound
  bool certified = false;     // both minima >= -1e-10, residual <= 1e-8,
                              // fitted constants positive
};
CertificationResult certify(const SymmetrizerBundle& b, const BasicState& s,
                            int samples = 500);

// Deliberately wrong-weight re-checks. For each case the probe strengthens the
// weight by one gamma order (or drops the boundary term where that is the
// essential ingredient) and reports whether the strengthened inequality holds
// with a nondegenerate constant.
struct SharpnessProbe {
  bool applicable = false;
  bool wrong_version_certifies = true;
  double probe_constant = 0.0;   // fitted constant of the strengthened inequality
  double weight_exponent = 0.0;  // fitted p in lambda_min ~ gamma^p (root case)
};
SharpnessProbe probe_wrong_weight(const SymmetrizerBundle& b, const BasicState& s,
                                  int samples = 200);

// Greedy certified cover of the hemisphere: special points first, then scan
// roots, then interior/boundary patches until every grid point lies within
// 0.9 * radius of some certified center.
struct CoverReport {
  std::vector<SymmetrizerBundle> bundles;
  std::vector<CertificationResult> results;
  int grid_points = 0;
  int covered = 0;
  bool all_certified = false;
};
CoverReport cover_hemisphere(const BasicState& s, int n = 48, int samples_per_bundle = 150);

}  // namespace pvi
