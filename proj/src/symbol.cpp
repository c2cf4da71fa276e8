#include "pvistab/symbol.hpp"

#include <cmath>

namespace pvi {

namespace {

struct Parts {
  cplx tau, mu;
  cplx num12;  // mu^2 rho + eta^2 H^2            (= -mu a12)
  cplx num21;  // alpha rho mu^2 + eta^2          (= (chi omega1)^2)
  cplx den21;  // mu^2 rho (1+alpha H^2) + eta^2 H^2
  cplx om2sq;  // eps^2 tau^2 + eta^2
};

Parts parts_at(const BasicState& s, double gamma, double delta, double eta) {
  Parts p;
  const double alpha = 1.0 / (s.rho * s.sound_speed * s.sound_speed);
  const double H2 = s.H * s.H;
  p.tau = cplx(gamma, delta);
  p.mu = cplx(gamma, delta + s.v * eta);
  const cplx mu2 = p.mu * p.mu;
  p.num12 = mu2 * s.rho + eta * eta * H2;
  p.num21 = alpha * s.rho * mu2 + eta * eta;
  p.den21 = mu2 * s.rho * (1.0 + alpha * H2) + eta * eta * H2;
  p.om2sq = s.eps * s.eps * p.tau * p.tau + eta * eta;
  return p;
}

// Principal square root realizes the "Re > 0, else Im > 0" rule: on the
// negative real axis std::sqrt returns +i sqrt|.|.
cplx ruled_sqrt(cplx z) { return std::sqrt(z); }

cplx pick_branch(cplx candidate, cplx target) {
  return std::abs(candidate - target) <= std::abs(-candidate - target) ? candidate
                                                                       : -candidate;
}

// Limit from gamma > 0 of the Re > 0 square root of w2(gamma).
template <typename F>
cplx stable_sqrt(F&& w2, double gamma, double k, BranchCertificate* cert) {
  const cplx w0 = w2(gamma);
  if (gamma > 1e-12 * k) return ruled_sqrt(w0);
  const double h = 1e-7 * k;
  const cplx r = ruled_sqrt(w0);
  const cplx pick1 = pick_branch(r, ruled_sqrt(w2(gamma + h)));
  const cplx pick2 = pick_branch(r, ruled_sqrt(w2(gamma + 0.5 * h)));
  if (pick1 != pick2 && std::abs(w0) > 1e-12 * k * k)
    throw BranchError("boundary square-root branch: probes disagree");
  if (cert) {
    cert->h = h;
    cert->perturbed = true;
  }
  return pick1;
}

double min_dist_to(const BasicState& s, const FrequencyPoint& pt, PointClass which) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& q : special_boundary_points(s, which)) {
    const double dg = pt.gamma - q.gamma, dd = pt.delta - q.delta, de = pt.eta - q.eta;
    best = std::min(best, std::sqrt(dg * dg + dd * dd + de * de));
  }
  return best;
}

}  // namespace

SymbolCoefficients symbol_coefficients_xi(const BasicState& s, double gamma,
                                          double delta, double eta) {
  const Parts p = parts_at(s, gamma, delta, eta);
  SymbolCoefficients c;
  c.a12 = -p.num12 / p.mu;
  c.a21 = -p.mu * p.num21 / p.den21;
  c.a34 = -p.om2sq / (s.eps * p.tau);
  c.a43 = -s.eps * p.tau;
  return c;
}

SymbolCoefficients symbol_coefficients(const BasicState& s, const FrequencyPoint& pt,
                                       double pole_tol) {
  if (min_dist_to(s, pt, PointClass::PoleP1) <= pole_tol)
    throw PoleError(PointClass::PoleP1, "a12 pole: mu = 0");
  if (min_dist_to(s, pt, PointClass::PoleP2) <= pole_tol)
    throw PoleError(PointClass::PoleP2, "a21 pole: reduced denominator vanishes");
  if (min_dist_to(s, pt, PointClass::PoleP3) <= pole_tol)
    throw PoleError(PointClass::PoleP3, "a34 pole: tau = 0");
  return symbol_coefficients_xi(s, pt.gamma, pt.delta, pt.eta);
}

ReducedSymbol reduce_full_symbol(const BasicState& s, const FrequencyPoint& pt) {
  const double alpha = 1.0 / (s.rho * s.sound_speed * s.sound_speed);
  const cplx tau = pt.tau();
  const cplx mu = pt.mu(s.v);
  const cplx ie(0.0, pt.eta);
  const double H = s.H;

  // Plasma unknowns (q, v1 | v2, H1, H2); rows 3..5 carry no x1 derivative.
  //   row1: alpha mu q             + i eta v2             - alpha H mu H2 + dv1 = 0
  //   row2:            mu rho v1              - i eta H H1            + dq     = 0
  //   row3: i eta q    + mu rho v2                        - i eta H H2         = 0
  //   row4:  -i eta H v1           + mu H1                                     = 0
  //   row5: -alpha H mu q - i eta H v2        + (1+alpha H^2) mu H2            = 0
  Eigen::Matrix3cd B;
  B << mu * s.rho, 0.0, -ie * H,
       0.0, mu, 0.0,
       -ie * H, 0.0, (1.0 + alpha * H * H) * mu;
  Eigen::Matrix<cplx, 3, 2> R;
  R << ie, 0.0,
       0.0, -ie * H,
       -alpha * H * mu, 0.0;

  const cplx detB = B.determinant();
  const double scaleB = B.cwiseAbs().maxCoeff();
  if (std::abs(detB) <= 1e-12 * scaleB * scaleB * scaleB) {
    const bool at_p1 = std::abs(mu) <= 1e-9;
    throw PoleError(at_p1 ? PointClass::PoleP1 : PointClass::PoleP2,
                    "singular elimination of algebraic plasma unknowns");
  }
  const Eigen::Matrix<cplx, 3, 2> Xa = -B.fullPivLu().solve(R);  // (v2,H1,H2) per (q,v1)

  // dq  = -mu rho v1 + i eta H H1
  // dv1 = -alpha mu q - i eta v2 + alpha H mu H2
  Eigen::Matrix2cd D;
  D(0, 0) = ie * H * Xa(1, 0);
  D(0, 1) = -mu * s.rho + ie * H * Xa(1, 1);
  D(1, 0) = -alpha * mu - ie * Xa(0, 0) + alpha * H * mu * Xa(2, 0);
  D(1, 1) = -ie * Xa(0, 1) + alpha * H * mu * Xa(2, 1);

  if (std::abs(tau) <= 1e-12)
    throw PoleError(PointClass::PoleP3, "singular elimination of vacuum unknown");
  ReducedSymbol out;
  out.c.a12 = D(0, 1);
  out.c.a21 = D(1, 0);
  out.cross_residual = std::max(std::abs(D(0, 0)), std::abs(D(1, 1)));
  out.H2_over_q = Xa(2, 0);

  // Vacuum unknowns (Hc1 | Hc2, E); row (eps tau Hc1 + i eta E = 0) is algebraic.
  //   dHc2 = -eps tau E - i eta Hc1,   dE = -eps tau Hc2
  const cplx Hc1_per_E = -ie / (s.eps * tau);
  out.Hc1_over_E = Hc1_per_E;
  out.c.a34 = -s.eps * tau - ie * Hc1_per_E;
  out.c.a43 = -s.eps * tau;
  return out;
}

Eigen::Matrix4cd assemble_interface_matrix(const SymbolCoefficients& c) {
  Eigen::Matrix4cd A = Eigen::Matrix4cd::Zero();
  A(0, 1) = c.a12;
  A(1, 0) = c.a21;
  A(2, 3) = c.a34;
  A(3, 2) = c.a43;
  return A;
}

cplx omega1_squared(const BasicState& s, double gamma, double delta, double eta) {
  const Parts p = parts_at(s, gamma, delta, eta);
  return p.num12 * p.num21 / p.den21;
}

cplx omega2_squared(const BasicState& s, double gamma, double delta, double eta) {
  const Parts p = parts_at(s, gamma, delta, eta);
  return p.om2sq;
}

cplx omega1(const BasicState& s, const FrequencyPoint& pt) {
  return stable_sqrt(
      [&](double g) { return omega1_squared(s, g, pt.delta, pt.eta); }, pt.gamma,
      pt.k(), nullptr);
}

cplx omega2(const BasicState& s, const FrequencyPoint& pt) {
  return stable_sqrt(
      [&](double g) { return omega2_squared(s, g, pt.delta, pt.eta); }, pt.gamma,
      pt.k(), nullptr);
}

cplx chi(const BasicState& s, const FrequencyPoint& pt) {
  const Parts p = parts_at(s, pt.gamma, pt.delta, pt.eta);
  return ruled_sqrt(p.den21 / p.num12);
}

cplx mu_chi_a12(const BasicState& s, const FrequencyPoint& pt) {
  const Parts p = parts_at(s, pt.gamma, pt.delta, pt.eta);
  if (p.num12 == cplx(0.0)) return 0.0;  // a12 zero set: chi blows up, product -> 0
  return -ruled_sqrt(p.den21 / p.num12) * p.num12;
}

cplx chi_omega1(const BasicState& s, const FrequencyPoint& pt) {
  const Parts p = parts_at(s, pt.gamma, pt.delta, pt.eta);
  const cplx r = ruled_sqrt(p.num21);  // (chi omega1)^2 = num21 identically
  const double scale = std::abs(p.num12) + std::abs(p.den21);
  if (std::abs(p.num12) <= 1e-14 * scale || std::abs(p.den21) <= 1e-14 * scale)
    return r;  // chi or omega1 degenerate; ruled branch of the finite product
  const cplx direct = ruled_sqrt(p.den21 / p.num12) *
                      stable_sqrt([&](double g) { return omega1_squared(s, g, pt.delta, pt.eta); },
                                  pt.gamma, pt.k(), nullptr);
  return pick_branch(r, direct);
}

ModeDecomposition eigen_modes(const BasicState& s, const FrequencyPoint& pt, double tol) {
  if (min_dist_to(s, pt, PointClass::PoleP1) <= tol)
    throw PoleError(PointClass::PoleP1, "eigen_modes at the mu = 0 pole");
  if (min_dist_to(s, pt, PointClass::PoleP3) <= tol)
    throw PoleError(PointClass::PoleP3, "eigen_modes at the tau = 0 pole");

  const Parts p = parts_at(s, pt.gamma, pt.delta, pt.eta);
  ModeDecomposition m;
  m.branch = BranchCertificate{0.0, false, false, 0.0, 0.0, true};

  m.omega2 = stable_sqrt([&](double g) { return omega2_squared(s, g, pt.delta, pt.eta); },
                         pt.gamma, pt.k(), &m.branch);

  const double scale = std::abs(p.num12) + std::abs(p.den21);
  const bool chi_degenerate =
      std::abs(p.den21) <= 1e-13 * scale || std::abs(p.num12) <= 1e-13 * scale;
  m.branch.chi_regularized = chi_degenerate;

  m.chi = ruled_sqrt(p.den21 / p.num12);
  m.branch.chi_rule = m.chi;
  if (!chi_degenerate) {
    m.omega1 = stable_sqrt([&](double g) { return omega1_squared(s, g, pt.delta, pt.eta); },
                           pt.gamma, pt.k(), &m.branch);
    m.mu_chi_a12 = -m.chi * p.num12;
    m.chi_omega1 = pick_branch(ruled_sqrt(p.num21), m.chi * m.omega1);
    // gamma-continuity branch of chi, for the certificate only
    const double h = 1e-7 * pt.k();
    const Parts ph = parts_at(s, pt.gamma + h, pt.delta, pt.eta);
    m.branch.chi_continuity = pick_branch(m.chi, ruled_sqrt(ph.den21 / ph.num12));
    m.branch.chi_branches_agree = m.branch.chi_continuity == m.chi;
  } else {
    // P2 (den21 = 0): chi = 0, omega1 diverges; a12 zero set: chi diverges,
    // omega1 = 0. Either way the products stay finite.
    m.omega1 = ruled_sqrt(p.num12 * p.num21 / p.den21);
    m.mu_chi_a12 = std::abs(p.den21) <= 1e-13 * scale ? cplx(0.0)
                                                      : -ruled_sqrt(p.den21 * p.num12);
    m.chi_omega1 = ruled_sqrt(p.num21);
    m.branch.chi_continuity = m.chi;
  }
  m.mu_chi_omega1 = p.mu * m.chi_omega1;

  m.e1 << m.mu_chi_a12, -m.mu_chi_omega1, 0.0, 0.0;
  m.e3 << m.mu_chi_a12, m.mu_chi_omega1, 0.0, 0.0;
  m.e2 << 0.0, 0.0, m.omega2, s.eps * p.tau;
  m.e4 << 0.0, 0.0, m.omega2, -s.eps * p.tau;
  return m;
}

Eigen::Matrix<double, 3, 4> BoundarySymbols::M(double Hc) {
  Eigen::Matrix<double, 3, 4> M;
  M << 0, -1, 0, 0,
       1, 0, -Hc, 0,
       0, 0, 0, 1;
  return M;
}

BoundarySymbols boundary_symbols_xi(const BasicState& s, double gamma, double delta,
                                    double eta) {
  const cplx tau(gamma, delta);
  const cplx mu(gamma, delta + s.v * eta);
  const double k = std::sqrt(gamma * gamma + delta * delta + eta * eta);
  if (k == 0.0) throw std::invalid_argument("boundary_symbols: zero frequency");
  const cplx eHct = s.eps * s.Hc * tau;

  BoundarySymbols B;
  B.b << mu, 0.0, eHct;
  B.Q << 0.0, 1.0, 0.0,
         -eHct / k, 0.0, mu / k,
         std::conj(mu) / k, 0.0, s.eps * s.Hc * std::conj(tau) / k;
  B.theta = (std::norm(mu) + std::norm(eHct)) / k;
  B.beta << 1.0, 0.0, -s.Hc, 0.0,
            0.0, eHct / k, 0.0, mu / k;
  B.ell << 0.0, -std::conj(mu) / k, 0.0, s.eps * s.Hc * std::conj(tau) / k;
  return B;
}

BoundarySymbols boundary_symbols(const BasicState& s, const FrequencyPoint& pt) {
  return boundary_symbols_xi(s, pt.gamma, pt.delta, pt.eta);
}

BoundaryDerivatives boundary_derivatives(const BasicState& s, const FrequencyPoint& pt) {
  if (std::abs(pt.gamma) > 1e-12)
    throw std::invalid_argument("boundary_derivatives: gamma must be 0");
  if (pt.eta == 0.0)
    throw std::invalid_argument("boundary_derivatives: eta must be nonzero");
  const double alpha = 1.0 / (s.rho * s.sound_speed * s.sound_speed);
  const double H2 = s.H * s.H;
  const double eta = pt.eta;
  const double slope = (pt.delta + s.v * eta) / eta;
  const double K = slope * slope;
  const double sigma = slope >= 0.0 ? 1.0 : -1.0;
  if (K == 0.0) throw PoleError(PointClass::PoleP1, "boundary_derivatives at mu = 0");
  const double kden = (1.0 - alpha * s.rho * K) * H2 - s.rho * K;
  if (std::abs(kden) <= 1e-12 * (H2 + s.rho * K))
    throw PoleError(PointClass::PoleP2, "boundary_derivatives at the reduced pole");
  const double sK = std::sqrt(K);
  const cplx i(0.0, 1.0);

  BoundaryDerivatives d;
  d.K = K;
  d.sigma = sigma;
  d.kden = kden;
  d.a12 = -i * sigma * eta * (K * s.rho - H2) / sK;
  d.a21 = -i * sigma * sK * eta * (1.0 - alpha * s.rho * K) / kden;
  d.da12_dgamma = -(K * s.rho + H2) / K;
  d.da21_dgamma = (-(alpha * s.rho * K - 1.0) * (alpha * s.rho * K - 1.0) * H2 -
                   alpha * s.rho * s.rho * K * K - s.rho * K) /
                  (kden * kden);
  d.dom1sq_dgamma = i * sigma * 2.0 * sK * eta * alpha * s.rho * s.rho * (K / (kden * kden)) *
                    (s.rho * (1.0 + alpha * H2) * K - 2.0 * H2);
  d.dom2sq_dgamma = i * 2.0 * s.eps * s.eps * pt.delta;
  // d a34 / d gamma = -eps + eta^2 / (eps tau^2), tau = i delta
  if (pt.delta != 0.0)
    d.da34_dgamma = -s.eps - eta * eta / (s.eps * pt.delta * pt.delta);
  else
    d.da34_dgamma = std::numeric_limits<double>::quiet_NaN();
  d.om1sq = -(K * s.rho - H2) * (1.0 - alpha * s.rho * K) / kden * eta * eta;
  return d;
}

}  // namespace pvi
