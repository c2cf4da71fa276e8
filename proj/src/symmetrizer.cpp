#include "pvistab/symmetrizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pvi {
namespace {

using Eigen::Matrix2cd;
using Eigen::Matrix4cd;
using Eigen::Matrix4d;
using Eigen::Vector4d;

constexpr double kEigTol = 1e-10;
constexpr double kResidTol = 1e-8;
// Mode-degeneracy patches need eps2 ~ 1/|u0|^2 where u spans the boundary-row
// kernel, while the dissipativity g-window only admits eps2 ~ 1/sqrt(radius);
// similarly pole patches need d1 ~ 1/|x0|^2 while the s_const cap admits
// d1^2 ~ e0/radius. The floor must sit low enough for both windows to reopen
// on the tight side of the degenerate circles, where the kernel coordinates
// and e0 can be small.
constexpr double kMinRadius = 1e-12;
constexpr double kConstCap = 1e12;
const cplx kI{0.0, 1.0};
const double kInf = std::numeric_limits<double>::infinity();

double halton(int index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * (index % base);
    index /= base;
  }
  return r;
}

// Scalar pieces every case is assembled from. All degree-2 except mu, tau.
struct Parts {
  cplx mu, tau, num12, num21, den21, om2sq;
};

Parts parts_at(const BasicState& s, const FrequencyPoint& pt) {
  Parts p;
  p.tau = pt.tau();
  p.mu = pt.mu(s.v);
  const cplx mu2 = p.mu * p.mu;
  const double H2 = s.H * s.H;
  const double al = 1.0 / (s.rho * s.sound_speed * s.sound_speed);
  const double eta2 = pt.eta * pt.eta;
  p.num12 = s.rho * mu2 + eta2 * H2;
  p.num21 = al * s.rho * mu2 + eta2;
  p.den21 = s.rho * (1.0 + al * H2) * mu2 + eta2 * H2;
  p.om2sq = s.eps * s.eps * p.tau * p.tau + eta2;
  return p;
}

FrequencyPoint mirror_pt(const FrequencyPoint& pt) {
  return {pt.gamma, -pt.delta, -pt.eta};
}

bool is_pole_kind(PointClass k) {
  return k == PointClass::PoleP1 || k == PointClass::PoleP2 || k == PointClass::PoleP3;
}

bool is_direct_kind(PointClass k) {
  return k == PointClass::PoleP1 || k == PointClass::PoleP3;
}

bool is_nondiag_kind(PointClass k) {
  return k == PointClass::Omega1ZeroA || k == PointClass::Omega1ZeroB ||
         k == PointClass::Omega2Zero;
}

double dist3(const FrequencyPoint& a, const FrequencyPoint& b) {
  const double dg = a.gamma - b.gamma, dd = a.delta - b.delta, de = a.eta - b.eta;
  return std::sqrt(dg * dg + dd * dd + de * de);
}

// Chart around the center: boundary centers move along the circle (u) and lift
// in gamma (w >= 0); interior centers use an orthonormal tangent pair with the
// gamma component folded back to gamma >= 0.
FrequencyPoint chart_point(const FrequencyPoint& c, double u, double w) {
  if (c.gamma < 1e-14) {
    const double phi = std::atan2(c.eta, c.delta) + u;
    return normalize_to_sigma(w, std::cos(phi), std::sin(phi));
  }
  double t1[3];
  const double pl = std::hypot(c.delta, c.eta);
  if (pl > 1e-12) {
    t1[0] = 0.0;
    t1[1] = -c.eta / pl;
    t1[2] = c.delta / pl;
  } else {
    t1[0] = 0.0;
    t1[1] = 1.0;
    t1[2] = 0.0;
  }
  const double n0[3] = {c.gamma, c.delta, c.eta};
  const double t2[3] = {n0[1] * t1[2] - n0[2] * t1[1], n0[2] * t1[0] - n0[0] * t1[2],
                        n0[0] * t1[1] - n0[1] * t1[0]};
  double x[3];
  for (int i = 0; i < 3; ++i) x[i] = n0[i] + u * t1[i] + w * t2[i];
  if (x[0] < 0.0) x[0] = -x[0];
  return normalize_to_sigma(x[0], x[1], x[2]);
}

Matrix4cd blk(const Matrix2cd& a, const Matrix2cd& d) {
  Matrix4cd m = Matrix4cd::Zero();
  m.topLeftCorner<2, 2>() = a;
  m.bottomRightCorner<2, 2>() = d;
  return m;
}

Matrix2cd vac_tinv(const BasicState& s, const FrequencyPoint& pt) {
  const cplx w2 = omega2(s, pt);
  const cplx et = s.eps * pt.tau();
  Matrix2cd m;
  m << w2, w2, et, -et;
  return m;
}

Matrix2cd vac_t(const BasicState& s, const FrequencyPoint& pt) {
  const cplx w2 = omega2(s, pt);
  const cplx et = s.eps * pt.tau();
  Matrix2cd m;
  m << 0.5 / w2, 0.5 / et, 0.5 / w2, -0.5 / et;
  return m;
}

cplx tilde_tau(const BasicState& s, const FrequencyPoint& pt, int sign) {
  const double cf = derive_constants(s).fast_interface_speed;
  return pt.mu(s.v) - kI * (sign * cf) * pt.eta;
}

Matrix4cd tinv_canonical(const BasicState& s, const SymmetrizerBundle& b,
                         const FrequencyPoint& pt) {
  const Parts p = parts_at(s, pt);
  Matrix2cd pl, vc;
  switch (b.kind) {
    case PointClass::Interior:
    case PointClass::BoundaryLopOK:
    case PointClass::BoundaryLopRoot: {
      const ModeDecomposition m = eigen_modes(s, pt, 1e-9);
      Matrix4cd t;
      t.col(0) = m.e1;
      t.col(1) = m.e3;
      t.col(2) = m.e2;
      t.col(3) = m.e4;
      return t;
    }
    case PointClass::Omega1ZeroB: {  // a21 -> 0, plasma block nondiagonalizable
      const cplx a12 = -p.num12 / p.mu;
      const cplx w1sq = p.num12 * p.num21 / p.den21;
      pl << a12, 0.0, -kI * w1sq, kI;
      vc = vac_tinv(s, pt);
      return blk(pl, vc);
    }
    case PointClass::Omega1ZeroA: {  // a12 -> 0, swapped block orientation
      const cplx a21 = -p.mu * p.num21 / p.den21;
      const cplx w1sq = p.num12 * p.num21 / p.den21;
      pl << kI, -kI * w1sq, 0.0, a21;
      vc = vac_tinv(s, pt);
      return blk(pl, vc);
    }
    case PointClass::Omega2Zero: {  // a34 -> 0, vacuum block nondiagonalizable
      const cplx mca = mu_chi_a12(s, pt);
      const cplx mcw = p.mu * chi_omega1(s, pt);
      pl << mca, mca, -mcw, mcw;
      const cplx a43 = -s.eps * p.tau;
      vc << kI, -kI * p.om2sq, 0.0, a43;
      return blk(pl, vc);
    }
    case PointClass::PoleP1: {
      const cplx muA12 = -p.num12;
      const cplx muA21 = -p.mu * p.mu * p.num21 / p.den21;
      const cplx ma = 0.5 * (muA12 + muA21);   // mu m1
      const cplx mb = 0.5 * (muA21 - muA12);   // mu m2
      const cplx mw = p.mu * omega1(s, pt);    // mu omega1
      pl << ma - mw, -mb, mb, ma - mw;
      vc = vac_tinv(s, pt);
      return blk(pl, vc);
    }
    case PointClass::PoleP2: {
      const cplx a12 = -p.num12 / p.mu;
      pl << 1.0, kI / a12, -1.0, kI / a12;
      vc = vac_tinv(s, pt);
      return blk(pl, vc);
    }
    case PointClass::PoleP3: {
      const cplx mca = mu_chi_a12(s, pt);
      const cplx mcw = p.mu * chi_omega1(s, pt);
      pl << mca, mca, -mcw, mcw;
      const cplx tn1 = 0.5 * (-s.eps * p.tau * p.tau - p.om2sq / s.eps);  // tau n1
      const cplx tn2 = 0.5 * (-s.eps * p.tau * p.tau + p.om2sq / s.eps);  // tau n2
      const cplx tw2 = p.tau * omega2(s, pt);                             // tau omega2
      vc << tn1 - tw2, -tn2, tn2, tn1 - tw2;
      return blk(pl, vc);
    }
  }
  throw std::logic_error("tinv_canonical: unreachable");
}

Matrix4cd t_canonical(const BasicState& s, const SymmetrizerBundle& b,
                      const FrequencyPoint& pt) {
  const Parts p = parts_at(s, pt);
  Matrix2cd pl, vc;
  switch (b.kind) {
    case PointClass::Interior:
    case PointClass::BoundaryLopOK:
    case PointClass::BoundaryLopRoot: {
      const ModeDecomposition m = eigen_modes(s, pt, 1e-9);
      pl << 0.5 / m.mu_chi_a12, -0.5 / m.mu_chi_omega1, 0.5 / m.mu_chi_a12,
          0.5 / m.mu_chi_omega1;
      const cplx et = s.eps * p.tau;
      vc << 0.5 / m.omega2, 0.5 / et, 0.5 / m.omega2, -0.5 / et;
      return blk(pl, vc);
    }
    case PointClass::Omega1ZeroB: {
      const cplx a12 = -p.num12 / p.mu;
      const cplx w1sq = p.num12 * p.num21 / p.den21;
      pl << 1.0 / a12, 0.0, w1sq / a12, -kI;
      vc = vac_t(s, pt);
      return blk(pl, vc);
    }
    case PointClass::Omega1ZeroA: {
      const cplx a21 = -p.mu * p.num21 / p.den21;
      const cplx w1sq = p.num12 * p.num21 / p.den21;
      pl << -kI, w1sq / a21, 0.0, 1.0 / a21;
      vc = vac_t(s, pt);
      return blk(pl, vc);
    }
    case PointClass::Omega2Zero: {
      const cplx mca = mu_chi_a12(s, pt);
      const cplx mcw = p.mu * chi_omega1(s, pt);
      pl << 0.5 / mca, -0.5 / mcw, 0.5 / mca, 0.5 / mcw;
      const cplx a43 = -s.eps * p.tau;
      vc << -kI, p.om2sq / a43, 0.0, 1.0 / a43;
      return blk(pl, vc);
    }
    case PointClass::PoleP1: {
      const cplx muA12 = -p.num12;
      const cplx muA21 = -p.mu * p.mu * p.num21 / p.den21;
      const cplx ma = 0.5 * (muA12 + muA21);
      const cplx mb = 0.5 * (muA21 - muA12);
      const cplx mw = p.mu * omega1(s, pt);
      const cplx det = (ma - mw) * (ma - mw) + mb * mb;
      pl << (ma - mw) / det, mb / det, -mb / det, (ma - mw) / det;
      vc = vac_t(s, pt);
      return blk(pl, vc);
    }
    case PointClass::PoleP2: {
      const cplx a12 = -p.num12 / p.mu;
      pl << 0.5, -0.5, -0.5 * kI * a12, -0.5 * kI * a12;
      vc = vac_t(s, pt);
      return blk(pl, vc);
    }
    case PointClass::PoleP3: {
      const cplx mca = mu_chi_a12(s, pt);
      const cplx mcw = p.mu * chi_omega1(s, pt);
      pl << 0.5 / mca, -0.5 / mcw, 0.5 / mca, 0.5 / mcw;
      const cplx tn1 = 0.5 * (-s.eps * p.tau * p.tau - p.om2sq / s.eps);
      const cplx tn2 = 0.5 * (-s.eps * p.tau * p.tau + p.om2sq / s.eps);
      const cplx tw2 = p.tau * omega2(s, pt);
      const cplx det = (tn1 - tw2) * (tn1 - tw2) + tn2 * tn2;
      vc << (tn1 - tw2) / det, tn2 / det, -tn2 / det, (tn1 - tw2) / det;
      return blk(pl, vc);
    }
  }
  throw std::logic_error("t_canonical: unreachable");
}

Matrix4cd generator_canonical(const BasicState& s, const SymmetrizerBundle& b,
                              const FrequencyPoint& pt) {
  const Parts p = parts_at(s, pt);
  Matrix4cd g = Matrix4cd::Zero();
  switch (b.kind) {
    case PointClass::Interior:
    case PointClass::BoundaryLopOK:
    case PointClass::BoundaryLopRoot: {
      const cplx w1 = omega1(s, pt), w2 = omega2(s, pt);
      g.diagonal() << -w1, w1, -w2, w2;
      return g;
    }
    case PointClass::Omega1ZeroB: {
      const cplx w1sq = p.num12 * p.num21 / p.den21;
      const cplx w2 = omega2(s, pt);
      g.topLeftCorner<2, 2>() << -kI * w1sq, kI, -kI * (w1sq * w1sq + w1sq), kI * w1sq;
      g.bottomRightCorner<2, 2>() << -w2, 0.0, 0.0, w2;
      return g;
    }
    case PointClass::Omega1ZeroA: {
      const cplx w1sq = p.num12 * p.num21 / p.den21;
      const cplx w2 = omega2(s, pt);
      g.topLeftCorner<2, 2>() << kI * w1sq, -kI * (w1sq * w1sq + w1sq), kI, -kI * w1sq;
      g.bottomRightCorner<2, 2>() << -w2, 0.0, 0.0, w2;
      return g;
    }
    case PointClass::Omega2Zero: {
      const cplx w1 = omega1(s, pt);
      const cplx w2sq = p.om2sq;
      g.topLeftCorner<2, 2>() << -w1, 0.0, 0.0, w1;
      g.bottomRightCorner<2, 2>() << kI * w2sq, -kI * (w2sq * w2sq + w2sq), kI, -kI * w2sq;
      return g;
    }
    case PointClass::PoleP1: {
      const cplx muA12 = -p.num12;
      const cplx muA21 = -p.mu * p.mu * p.num21 / p.den21;
      const cplx m2 = 0.5 * (muA21 - muA12) / p.mu;
      const cplx w1 = omega1(s, pt), w2 = omega2(s, pt);
      g.topLeftCorner<2, 2>() << -w1, -2.0 * m2, 0.0, w1;
      g.bottomRightCorner<2, 2>() << -w2, 0.0, 0.0, w2;
      return g;
    }
    case PointClass::PoleP2: {
      // den21 = rho (1 + alpha H^2) tt(+1) tt(-1) exactly; the factored form
      // stays well conditioned through the pole, where the direct sum cancels
      const double al = 1.0 / (s.rho * s.sound_speed * s.sound_speed);
      const cplx den = s.rho * (1.0 + al * s.H * s.H) * tilde_tau(s, pt, +1) *
                       tilde_tau(s, pt, -1);
      const cplx w1sq = p.num12 * p.num21 / den;
      const cplx w2 = omega2(s, pt);
      g.topLeftCorner<2, 2>() << 0.0, kI, -kI * w1sq, 0.0;
      g.bottomRightCorner<2, 2>() << -w2, 0.0, 0.0, w2;
      return g;
    }
    case PointClass::PoleP3: {
      const cplx n2 = (p.om2sq - s.eps * s.eps * p.tau * p.tau) / (2.0 * s.eps * p.tau);
      const cplx w1 = omega1(s, pt), w2 = omega2(s, pt);
      g.topLeftCorner<2, 2>() << -w1, 0.0, 0.0, w1;
      g.bottomRightCorner<2, 2>() << -w2, -2.0 * n2, 0.0, w2;
      return g;
    }
  }
  throw std::logic_error("generator_canonical: unreachable");
}

// Hermitian 2x2 block for a nondiagonalizable mode with squared symbol wsq.
// The corner function f is fixed by requiring the gamma = 0 product with the
// block generator to be real symmetric.
Matrix2cd nondiag_s_block(const SymmetrizerConstants& c, cplx wsq, double gamma,
                          bool swapped) {
  const double f = (-2.0 * c.eps1 * wsq - c.eps2 * (wsq * wsq + wsq)).real();
  Matrix2cd m;
  if (!swapped) {
    m << f, c.eps1 + kI * gamma * c.g_const, c.eps1 - kI * gamma * c.g_const, c.eps2;
  } else {
    m << c.eps2, c.eps1 - kI * gamma * c.g_const, c.eps1 + kI * gamma * c.g_const, f;
  }
  return m;
}

Matrix4cd symmetrizer_canonical(const BasicState& s, const SymmetrizerBundle& b,
                                const FrequencyPoint& pt) {
  const SymmetrizerConstants& c = b.constants;
  Matrix4cd r = Matrix4cd::Zero();
  switch (b.kind) {
    case PointClass::Interior:
    case PointClass::BoundaryLopOK:
      r.diagonal() << -1.0, c.Kprime, -1.0, c.Kprime;
      return r;
    case PointClass::BoundaryLopRoot: {
      const double g2 = pt.gamma * pt.gamma;
      r.diagonal() << -g2, c.Kprime, -g2, c.Kprime;
      return r;
    }
    case PointClass::Omega1ZeroB: {
      const Parts p = parts_at(s, pt);
      const cplx w1sq = p.num12 * p.num21 / p.den21;
      r.topLeftCorner<2, 2>() = nondiag_s_block(c, w1sq, pt.gamma, false);
      r(2, 2) = -1.0;
      r(3, 3) = c.Kprime;
      return r;
    }
    case PointClass::Omega1ZeroA: {
      const Parts p = parts_at(s, pt);
      const cplx w1sq = p.num12 * p.num21 / p.den21;
      r.topLeftCorner<2, 2>() = nondiag_s_block(c, w1sq, pt.gamma, true);
      r(2, 2) = -1.0;
      r(3, 3) = c.Kprime;
      return r;
    }
    case PointClass::Omega2Zero: {
      const Parts p = parts_at(s, pt);
      r(0, 0) = -1.0;
      r(1, 1) = c.Kprime;
      r.bottomRightCorner<2, 2>() = nondiag_s_block(c, p.om2sq, pt.gamma, true);
      return r;
    }
    case PointClass::PoleP2: {
      const double dt = tilde_tau(s, pt, b.branch_sign).imag();
      const double e0 = p2_e0(s, pt.delta, pt.eta, b.branch_sign);
      r(0, 0) = c.d1;
      r(0, 1) = c.d2 + kI * pt.gamma * c.s_const;
      r(1, 0) = c.d2 - kI * pt.gamma * c.s_const;
      r(1, 1) = c.d1 * dt / e0;
      r(2, 2) = -1.0;
      r(3, 3) = c.Kprime;
      return r;
    }
    default:
      throw std::logic_error("symmetrizer_at: direct-estimate case has no symmetrizer");
  }
}

double fit_c0(const Matrix4cd& tinv_center, const Eigen::Matrix<cplx, 2, 4>& beta_center,
              const Matrix4d& lambda, std::initializer_list<int> stable) {
  const Eigen::Matrix<cplx, 2, 4> bt =
      beta_center * lambda.inverse().cast<cplx>() * tinv_center;
  Matrix4cd lhs = Matrix4cd::Zero();
  Matrix4cd rhs = Matrix4cd::Zero();
  bool st[4] = {false, false, false, false};
  for (int i : stable) st[i] = true;
  for (int i = 0; i < 4; ++i) {
    if (st[i])
      lhs(i, i) = 1.0;
    else
      rhs(i, i) = 1.0;
  }
  rhs += bt.adjoint() * bt;
  Eigen::SelfAdjointEigenSolver<Matrix4cd> chk(rhs);
  if (chk.eigenvalues().minCoeff() < 1e-12) return kConstCap;
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix4cd> ges(lhs, rhs);
  return std::max(ges.eigenvalues().maxCoeff(), 0.0);
}

double min_eig(const Matrix4cd& m) {
  return Eigen::SelfAdjointEigenSolver<Matrix4cd>(m).eigenvalues().minCoeff();
}

// lambda_min measured against the matrix scale. Pole patches produce norms of
// 1e8 and beyond (generator entries ~ 1/radius, coercivity terms ~ C), where
// computed eigenvalues carry forward error ~ eps * |m|; dividing by
// 1 + 1e-4 |m| keeps that error below the fixed tolerance at every scale
// while still flagging any defect large enough to be numerically real.
double scaled_min_eig(const Matrix4cd& m) {
  return min_eig(m) / (1.0 + 1e-4 * m.norm());
}

double weighted_min_ratio(const Matrix4cd& m, const Vector4d& w) {
  Matrix4cd d;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) d(i, j) = m(i, j) / std::sqrt(w(i) * w(j));
  return min_eig(d);
}

// min over samples of the generalized ratio lambda_min(Re(r G), W); samples
// with vanishing weight only have to stay PSD. Returns a negative value when
// the inequality cannot hold on this sample set.
double kappa_ratio(const BasicState& s, const SymmetrizerBundle& b,
                   const std::vector<FrequencyPoint>& pts) {
  double m = kInf;
  for (const auto& pt : pts) {
    Matrix4cd herm;
    Vector4d w;
    try {
      const Matrix4cd rg = symmetrizer_at(s, b, pt) * generator_at(s, b, pt);
      herm = 0.5 * (rg + rg.adjoint());
      w = dissipativity_weight_at(s, b, pt);
    } catch (const std::exception&) {
      return -1.0;
    }
    if (!herm.allFinite()) return -1.0;
    if (w.minCoeff() > 0.0) {
      m = std::min(m, weighted_min_ratio(herm, w));
    } else if (scaled_min_eig(herm) < -kEigTol) {
      return -1.0;
    }
  }
  return std::isfinite(m) ? m : -1.0;
}

// Doubles C, and K' when C alone stalls, until r + C B*B - rhs I is PSD on
// all samples (both capped at 1e12). Boundary rows and the right side do not
// depend on K', so they are cached; r is rebuilt per K' step.
bool fit_coercivity(const BasicState& s, SymmetrizerBundle& b,
                    const std::vector<FrequencyPoint>& pts, double c_init) {
  struct Row {
    FrequencyPoint pt;
    Eigen::Matrix<cplx, 2, 4> bt;
    double rhs;
  };
  std::vector<Row> rows;
  rows.reserve(pts.size());
  for (const auto& pt : pts) {
    try {
      rows.push_back({pt, boundary_rows_at(s, b, pt), coercivity_rhs_at(b, pt)});
    } catch (const std::exception&) {
      // the certification pass will record the failure
    }
  }
  for (;;) {
    std::vector<Matrix4cd> rs;
    rs.reserve(rows.size());
    bool build_ok = true;
    for (const auto& row : rows) {
      try {
        rs.push_back(symmetrizer_at(s, b, row.pt));
      } catch (const std::exception&) {
        build_ok = false;
        break;
      }
    }
    if (build_ok) {
      double c = std::max(1.0, c_init);
      for (;;) {
        bool ok = true;
        for (std::size_t i = 0; i < rows.size(); ++i) {
          Matrix4cd m = rs[i] + c * (rows[i].bt.adjoint() * rows[i].bt);
          for (int k = 0; k < 4; ++k) m(k, k) -= rows[i].rhs;
          if (!m.allFinite() || scaled_min_eig(m) < -kEigTol) {
            ok = false;
            break;
          }
        }
        if (ok) {
          b.constants.C = c;
          return true;
        }
        if (c >= kConstCap) break;
        c *= 2.0;
      }
    }
    if (b.constants.Kprime >= kConstCap) {
      b.constants.C = kConstCap;
      return false;
    }
    b.constants.Kprime = std::min(2.0 * b.constants.Kprime, kConstCap);
  }
}

// Builder driver: fit constants, certify, shrink the neighborhood on failure.
template <class Fit>
SymmetrizerBundle fit_loop(const BasicState& s, SymmetrizerBundle b, int samples,
                           Fit fit) {
  for (;;) {
    fit(b);
    try {
      b.T0inv = transform_inv_at(s, b, b.center);
      b.T0 = transform_at(s, b, b.center);
    } catch (const std::exception&) {
      // exact-pole centers: keep the zero diagnostic matrices
      b.T0inv.setZero();
      b.T0.setZero();
    }
    const CertificationResult cert = certify(b, s, samples);
    if (cert.certified || b.radius <= kMinRadius * 1.0001) return b;
    b.radius = std::max(0.5 * b.radius, kMinRadius);
  }
}

void fit_pole_direct(const BasicState& s, SymmetrizerBundle& b, int samples) {
  const auto pts = bundle_samples(b, samples);
  double m_om = kInf, m_det = kInf;
  for (const auto& pt : pts) {
    cplx w1, w2, det;
    try {
      w1 = omega1(s, pt);
      w2 = omega2(s, pt);
      det = b.kind == PointClass::PoleP1 ? pole_mu_boundary_det(s, pt)
                                         : pole_tau_boundary_det(s, pt);
    } catch (const std::exception&) {
      m_om = -1.0;
      break;
    }
    if (b.kind == PointClass::PoleP3) {
      if (pt.gamma > 0.0)
        m_om = std::min(m_om, w1.real() / pt.gamma);
      else if (w1.real() < -kEigTol)
        m_om = -1.0;
    } else {
      m_om = std::min(m_om, w1.real());
    }
    m_om = std::min(m_om, w2.real());
    if (pt.gamma > 0.0) m_det = std::min(m_det, std::abs(det) / pt.gamma);
  }
  b.constants.kappa = (std::isfinite(m_om) && m_om > 0.0) ? 0.9 * m_om : 0.0;
  b.constants.C_delta = (std::isfinite(m_det) && m_det > 0.0) ? 0.9 * m_det : 0.0;
}

}  // namespace

std::vector<FrequencyPoint> bundle_samples(const SymmetrizerBundle& b, int count) {
  std::vector<FrequencyPoint> out;
  out.reserve(count);
  const bool boundary = b.center.gamma < 1e-14;
  if (!is_pole_kind(b.kind)) out.push_back(b.center);
  int k = 1;
  while (static_cast<int>(out.size()) < count) {
    const double u = (2.0 * halton(k, 2) - 1.0) * b.radius;
    double w;
    if (boundary)
      w = (k % 5 == 0) ? 0.0 : halton(k, 3) * b.radius;
    else
      w = (2.0 * halton(k, 3) - 1.0) * b.radius;
    out.push_back(chart_point(b.center, u, w));
    ++k;
  }
  return out;
}

Eigen::Matrix4cd transform_inv_at(const BasicState& s, const SymmetrizerBundle& b,
                                  const FrequencyPoint& pt) {
  if (b.mirrored) return tinv_canonical(s, b, mirror_pt(pt)).conjugate();
  return tinv_canonical(s, b, pt);
}

Eigen::Matrix4cd transform_at(const BasicState& s, const SymmetrizerBundle& b,
                              const FrequencyPoint& pt) {
  if (b.mirrored) return t_canonical(s, b, mirror_pt(pt)).conjugate();
  return t_canonical(s, b, pt);
}

Eigen::Matrix4cd generator_at(const BasicState& s, const SymmetrizerBundle& b,
                              const FrequencyPoint& pt) {
  if (b.mirrored) return generator_canonical(s, b, mirror_pt(pt)).conjugate();
  return generator_canonical(s, b, pt);
}

Eigen::Matrix4cd symmetrizer_at(const BasicState& s, const SymmetrizerBundle& b,
                                const FrequencyPoint& pt) {
  if (b.mirrored) return symmetrizer_canonical(s, b, mirror_pt(pt)).conjugate();
  return symmetrizer_canonical(s, b, pt);
}

Eigen::Vector4d dissipativity_weight_at(const BasicState& s, const SymmetrizerBundle& b,
                                        const FrequencyPoint& pt) {
  const double g = pt.gamma;
  switch (b.kind) {
    case PointClass::Interior:
      return Vector4d::Ones();
    case PointClass::BoundaryLopOK:
    case PointClass::Omega1ZeroA:
    case PointClass::Omega1ZeroB:
    case PointClass::Omega2Zero:
      return Vector4d::Constant(g);
    case PointClass::BoundaryLopRoot:
      return Vector4d::Constant(g * g * g);
    case PointClass::PoleP2: {
      const double tt = std::norm(tilde_tau(s, pt, b.branch_sign));
      return Vector4d{g / tt, g, g, g};
    }
    case PointClass::PoleP1:
      return Vector4d::Ones();
    case PointClass::PoleP3:
      return Vector4d{g, 1.0, 1.0, 1.0};
  }
  return Vector4d::Ones();
}

double coercivity_rhs_at(const SymmetrizerBundle& b, const FrequencyPoint& pt) {
  return b.kind == PointClass::BoundaryLopRoot ? pt.gamma * pt.gamma : 1.0;
}

Eigen::Matrix<cplx, 2, 4> boundary_rows_at(const BasicState& s, const SymmetrizerBundle& b,
                                           const FrequencyPoint& pt) {
  const BoundarySymbols bs = boundary_symbols(s, pt);
  return bs.beta * b.Lambda.inverse().cast<cplx>() * transform_inv_at(s, b, pt);
}

double similarity_residual(const BasicState& s, const SymmetrizerBundle& b,
                           const FrequencyPoint& pt) {
  const SymbolCoefficients co = symbol_coefficients(s, pt, 1e-13);
  const Matrix4cd a = assemble_interface_matrix(co);
  const Matrix4cd lam = b.Lambda.cast<cplx>();
  const Matrix4cd linv = b.Lambda.inverse().cast<cplx>();
  const Matrix4cd g_num =
      transform_at(s, b, pt) * (lam * a * linv) * transform_inv_at(s, b, pt);
  const Matrix4cd g0 = generator_at(s, b, pt);
  return (g_num - g0).norm() / (1.0 + g0.norm());
}

cplx pole_mu_boundary_det(const BasicState& s, const FrequencyPoint& pt) {
  const Parts p = parts_at(s, pt);
  const cplx muA12 = -p.num12;
  const cplx muA21 = -p.mu * p.mu * p.num21 / p.den21;
  const cplx muW1 = p.mu * omega1(s, pt);
  const cplx w2 = omega2(s, pt);
  return 0.5 * s.eps * p.tau *
         (p.mu * muA12 - p.mu * muW1 + s.Hc * s.Hc * w2 * (muA21 - muW1));
}

cplx pole_tau_boundary_det(const BasicState& s, const FrequencyPoint& pt) {
  const Parts p = parts_at(s, pt);
  const cplx mca = mu_chi_a12(s, pt);
  const cplx cw1 = chi_omega1(s, pt);
  const cplx w2 = omega2(s, pt);
  const cplx a43 = -s.eps * p.tau;
  const cplx tau_a34 = -p.om2sq / s.eps;
  const cplx tau_w2 = p.tau * w2;
  return 0.5 * p.tau * p.mu *
         (mca * (a43 - w2) - s.eps * s.Hc * s.Hc * cw1 * (tau_a34 - tau_w2));
}

cplx p2_omega0(const BasicState& s, const FrequencyPoint& pt, int branch_sign) {
  // -w1sq * tt(branch) with den21 factored as rho (1+alpha H^2) tt(+1) tt(-1);
  // only the non-vanishing factor tt(-branch) survives, so no cancellation
  const Parts p = parts_at(s, pt);
  const double al = 1.0 / (s.rho * s.sound_speed * s.sound_speed);
  return -p.num12 * p.num21 /
         (s.rho * (1.0 + al * s.H * s.H) * tilde_tau(s, pt, -branch_sign));
}

double p2_e0(const BasicState& s, double delta, double eta, int branch_sign) {
  const double H2 = s.H * s.H;
  const double al = 1.0 / (s.rho * s.sound_speed * s.sound_speed);
  const double cf = derive_constants(s).fast_interface_speed;
  const double dv = delta + s.v * eta;
  const double num12 = eta * eta * H2 - s.rho * dv * dv;
  const double num21 = eta * eta - al * s.rho * dv * dv;
  return num12 * num21 / (s.rho * (1.0 + al * H2) * (dv + branch_sign * cf * eta));
}

SymmetrizerBundle build_interior(const BasicState& s, const FrequencyPoint& center,
                                 int samples) {
  SymmetrizerBundle b;
  b.center = center;
  b.kind = center.gamma > 1e-6 ? PointClass::Interior : PointClass::BoundaryLopOK;
  b.radius = b.kind == PointClass::Interior ? std::min(0.1, 0.5 * center.gamma) : 0.1;
  return fit_loop(s, b, samples, [&](SymmetrizerBundle& bb) {
    double c0 = kConstCap;
    try {
      c0 = fit_c0(transform_inv_at(s, bb, bb.center),
                  boundary_symbols(s, bb.center).beta, bb.Lambda, {0, 2});
    } catch (const std::exception&) {
    }
    bb.constants.C0 = c0;
    bb.constants.Kprime = 2.0 * c0 + 1.0;
    const auto pts = bundle_samples(bb, samples);
    const double m = kappa_ratio(s, bb, pts);
    bb.constants.kappa = m > 0.0 ? 0.9 * m : 0.0;
    fit_coercivity(s, bb, pts, 2.0 * c0 + 1.0);
  });
}

SymmetrizerBundle build_boundary_root(const BasicState& s, const FrequencyPoint& center,
                                      int samples) {
  // reject multiple roots: the arc derivative of the determinant must be
  // bounded away from zero
  const double phi0 = std::atan2(center.eta, center.delta);
  const double h = 1e-5;
  const cplx dplus = lopatinskii_det(
      s, FrequencyPoint{0.0, std::cos(phi0 + h), std::sin(phi0 + h)});
  const cplx dminus = lopatinskii_det(
      s, FrequencyPoint{0.0, std::cos(phi0 - h), std::sin(phi0 - h)});
  if (std::abs(dplus - dminus) / (2.0 * h) < 1e-3)
    throw std::invalid_argument("build_boundary_root: root is not certified simple");

  SymmetrizerBundle b;
  b.center = center;
  b.kind = PointClass::BoundaryLopRoot;
  b.radius = 0.1;
  return fit_loop(s, b, samples, [&](SymmetrizerBundle& bb) {
    bb.constants.C0 = 0.0;
    bb.constants.Kprime = 3.0;
    const auto pts = bundle_samples(bb, samples);
    const double m = kappa_ratio(s, bb, pts);
    bb.constants.kappa = m > 0.0 ? 0.9 * m : 0.0;
    fit_coercivity(s, bb, pts, 1.0);
  });
}

SymmetrizerBundle build_nondiag(const BasicState& s, const FrequencyPoint& center,
                                int samples) {
  const Classification cls = classify_point(s, center, 1e-9);
  if (!is_nondiag_kind(cls.cls))
    throw std::invalid_argument("build_nondiag: center is not a mode-degeneracy point");

  SymmetrizerBundle b;
  b.center = center;
  b.kind = cls.cls;
  b.radius = 0.1;

  double dsq_im;  // Im of d(omega^2)/dgamma at the center
  if (b.kind == PointClass::Omega2Zero) {
    dsq_im = 2.0 * s.eps * s.eps * center.delta;
  } else {
    dsq_im = boundary_derivatives(s, center).dom1sq_dgamma.imag();
  }
  if (std::abs(dsq_im) < 1e-14)
    throw std::invalid_argument("build_nondiag: flat mode crossing");
  const double eps1 = 1.0 / dsq_im;

  return fit_loop(s, b, samples, [&, eps1](SymmetrizerBundle& bb) {
    bb.constants.eps1 = eps1;
    const int stable_a = bb.kind == PointClass::Omega1ZeroA ? 1 : 0;
    const int stable_b = bb.kind == PointClass::Omega2Zero ? 3 : 2;
    double c0 = kConstCap;
    try {
      c0 = fit_c0(transform_inv_at(s, bb, bb.center),
                  boundary_symbols(s, bb.center).beta, bb.Lambda, {stable_a, stable_b});
    } catch (const std::exception&) {
    }
    bb.constants.C0 = c0;
    const auto pts = bundle_samples(bb, samples);

    // eps2 pulls in opposite directions: the gamma-slope of Herm(r A) needs
    // the off-diagonal g to beat (eps2 Im dw^2)^2, which caps the usable
    // radius at ~ kappa/g, while the coercivity needs eps2 large enough that
    // the corner dominates the boundary-row kernel. Ladder up from the
    // smallest value and keep the first eps2 whose g-fit and C/K' doubling
    // both land.
    for (double e2 = std::abs(eps1) + 2.0; e2 <= kConstCap; e2 *= 2.0) {
      bb.constants.eps2 = e2;
      bb.constants.Kprime = 3.0;
      double best_m = -kInf, best_g = 1.0, g = 1.0;
      int stale = 0;
      for (int it = 0; it < 40 && stale < 3; ++it) {
        bb.constants.g_const = g;
        const double m = kappa_ratio(s, bb, pts);
        if (m > best_m) {
          best_m = m;
          best_g = g;
          stale = 0;
        } else {
          ++stale;
        }
        g *= 2.0;
      }
      bb.constants.g_const = best_g;
      bb.constants.kappa = best_m > 0.0 ? 0.9 * best_m : 0.0;
      if (bb.constants.kappa <= 0.0) break;  // larger eps2 only worsens the slope
      if (fit_coercivity(s, bb, pts, 1.0)) break;
    }
  });
}

SymmetrizerBundle build_pole_mu(const BasicState& s, const FrequencyPoint& center,
                                int samples) {
  SymmetrizerBundle b;
  b.center = center;
  b.kind = PointClass::PoleP1;
  b.radius = 0.1;
  b.Lambda << 1, 1, 0, 0, -1, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1;
  return fit_loop(s, b, samples,
                  [&](SymmetrizerBundle& bb) { fit_pole_direct(s, bb, samples); });
}

SymmetrizerBundle build_pole_p2(const BasicState& s, const FrequencyPoint& center,
                                int samples) {
  SymmetrizerBundle b;
  b.center = center;
  b.kind = PointClass::PoleP2;
  b.radius = 0.1;
  b.Lambda << 1, 1, 0, 0, -1, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1;
  if (std::abs(center.eta) < 1e-12)
    throw std::invalid_argument("build_pole_p2: eta vanishes at the center");
  const double slope = (center.delta + s.v * center.eta) / center.eta;
  b.branch_sign = slope > 0.0 ? +1 : -1;
  b.mirrored = b.branch_sign * center.eta < 0.0;
  const FrequencyPoint canon = b.mirrored ? mirror_pt(center) : center;
  const double e0c = p2_e0(s, canon.delta, canon.eta, b.branch_sign);
  if (!(e0c > 0.0))
    throw std::invalid_argument("build_pole_p2: branch orientation check failed");

  // the (1,1) gain of Herm(r A) is -e0*gamma*(d2 + s_const*Im(tilde_tau))/|tilde_tau|^2,
  // so the patch must keep s_const*|Im(tilde_tau)| below |d2|/2; Im(tilde_tau)
  // moves along the arc at rate <= sqrt(1+v^2)+c_fast, and the 2x2 determinant
  // needs s_const >= d1^2/(2 e0 |d2|) (kept at twice the bare threshold).
  // Together these tie the usable radius to e0 |d2|^2 / d1^2.
  const double arc_rate =
      std::hypot(1.0, s.v) + derive_constants(s).fast_interface_speed;
  b.radius = std::min(0.1, 8.0 * e0c / (16.0 * arc_rate));

  return fit_loop(s, b, samples, [&, e0c, arc_rate](SymmetrizerBundle& bb) {
    double c0 = kConstCap;
    try {
      c0 = fit_c0(transform_inv_at(s, bb, bb.center),
                  boundary_symbols(s, bb.center).beta, bb.Lambda, {1, 2});
    } catch (const std::exception&) {
    }
    bb.constants.C0 = c0;
    bb.constants.kappa = 0.0;

    // The boundary rows at the center have a kernel direction x = (x0, x1, 1, 0)
    // with no outgoing-vacuum content; on it only d1 |x0|^2 can pay for the
    // incoming column, so the kernel geometry dictates d1. Raising |d2| then
    // buys radius quadratically at the price of the cross term
    // 2 Re(d2 conj(x0) x1) on that same kernel direction.
    double x0sq = 1.0, cross = 0.0, nsq = 2.0;
    try {
      const auto btc = boundary_rows_at(s, bb, bb.center);
      Eigen::Matrix2cd bm;
      bm << btc(0, 0), btc(0, 1), btc(1, 0), btc(1, 1);
      const Eigen::Vector2cd xy = bm.fullPivLu().solve(-btc.col(2));
      x0sq = std::max(std::norm(xy(0)), 1e-12);
      cross = (std::conj(xy(0)) * xy(1)).real();
      nsq = 1.0 + xy.squaredNorm();
    } catch (const std::exception&) {
    }

    bool done = false;
    for (double d2a = 4.0; d2a <= 1048576.0 && !done; d2a *= 4.0) {
      const double d1_req =
          (1.5 * nsq + 1.0 + std::max(0.0, 2.0 * d2a * cross)) / x0sq;
      double d1_start = 4.0;
      while (d1_start < d1_req) d1_start *= 2.0;
      if (d1_start * d1_start / (d2a * e0c) * arc_rate * bb.radius > 0.5 * d2a)
        continue;  // this |d2| cannot host the kernel demand at this radius
      for (double d1 = d1_start;; d1 *= 2.0) {
        const double s_const = d1 * d1 / (d2a * e0c);
        if (d1 > d1_start && s_const * arc_rate * bb.radius > 0.5 * d2a) break;
        bb.constants.d2 = -d2a;
        bb.constants.d1 = d1;
        bb.constants.s_const = s_const;
        bb.constants.Kprime = 2.0;
        const auto pts = bundle_samples(bb, samples);
        const double m = kappa_ratio(s, bb, pts);
        bb.constants.kappa = m > 0.0 ? 0.9 * m : 0.0;
        if (bb.constants.kappa <= 0.0) break;  // slope lost: try the next |d2|
        if (fit_coercivity(s, bb, pts, 1.0)) {
          done = true;
          break;
        }
      }
    }
  });
}

SymmetrizerBundle build_pole_tau(const BasicState& s, const FrequencyPoint& center,
                                 int samples) {
  SymmetrizerBundle b;
  b.center = center;
  b.kind = PointClass::PoleP3;
  b.radius = 0.1;
  b.Lambda << 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 1, 0, 0, -1, 1;
  return fit_loop(s, b, samples,
                  [&](SymmetrizerBundle& bb) { fit_pole_direct(s, bb, samples); });
}

SymmetrizerBundle build_bundle(const BasicState& s, const FrequencyPoint& center,
                               int samples) {
  switch (classify_point(s, center).cls) {
    case PointClass::Interior:
    case PointClass::BoundaryLopOK:
      return build_interior(s, center, samples);
    case PointClass::BoundaryLopRoot:
      return build_boundary_root(s, center, samples);
    case PointClass::Omega1ZeroA:
    case PointClass::Omega1ZeroB:
    case PointClass::Omega2Zero:
      return build_nondiag(s, center, samples);
    case PointClass::PoleP1:
      return build_pole_mu(s, center, samples);
    case PointClass::PoleP2:
      return build_pole_p2(s, center, samples);
    case PointClass::PoleP3:
      return build_pole_tau(s, center, samples);
  }
  throw std::logic_error("build_bundle: unreachable");
}

CertificationResult certify(const SymmetrizerBundle& b, const BasicState& s,
                            int samples) {
  const auto pts = bundle_samples(b, samples);
  CertificationResult res;
  res.samples = static_cast<int>(pts.size());
  double diss = kInf, coer = kInf, resid = 0.0;
  const SymmetrizerConstants& c = b.constants;

  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    const FrequencyPoint& pt = pts[i];
    try {
      if (is_direct_kind(b.kind)) {
        const cplx w1 = omega1(s, pt);
        const cplx w2 = omega2(s, pt);
        const double w1_weight = b.kind == PointClass::PoleP3 ? pt.gamma : 1.0;
        diss = std::min(diss, std::min(w1.real() - c.kappa * w1_weight,
                                       w2.real() - c.kappa));
        const cplx det = b.kind == PointClass::PoleP1 ? pole_mu_boundary_det(s, pt)
                                                      : pole_tau_boundary_det(s, pt);
        coer = std::min(coer, std::abs(det) - c.C_delta * pt.gamma);
        resid = std::max(resid, similarity_residual(s, b, pt));
      } else {
        const Matrix4cd rg = symmetrizer_at(s, b, pt) * generator_at(s, b, pt);
        Matrix4cd herm = 0.5 * (rg + rg.adjoint());
        const Vector4d w = dissipativity_weight_at(s, b, pt);
        for (int j = 0; j < 4; ++j) herm(j, j) -= c.kappa * w(j);
        if (!herm.allFinite()) throw BranchError("non-finite dissipativity matrix");
        diss = std::min(diss, scaled_min_eig(herm));

        const auto bt = boundary_rows_at(s, b, pt);
        Matrix4cd m = symmetrizer_at(s, b, pt) + c.C * (bt.adjoint() * bt);
        const double rhs = coercivity_rhs_at(b, pt);
        for (int j = 0; j < 4; ++j) m(j, j) -= rhs;
        if (!m.allFinite()) throw BranchError("non-finite coercivity matrix");
        coer = std::min(coer, scaled_min_eig(m));

        resid = std::max(resid, similarity_residual(s, b, pt));
      }
    } catch (const std::exception&) {
      res.failures.push_back(i);
    }
  }

  res.min_eig_dissipativity = std::isfinite(diss) ? diss : -1.0;
  res.min_eig_coercivity = std::isfinite(coer) ? coer : -1.0;
  res.max_similarity_residual = resid;
  const bool consts_ok =
      c.kappa > 0.0 && (!is_direct_kind(b.kind) || c.C_delta > 0.0);
  res.certified = res.failures.empty() && res.min_eig_dissipativity >= -kEigTol &&
                  res.min_eig_coercivity >= -kEigTol && resid <= kResidTol && consts_ok;
  return res;
}

SharpnessProbe probe_wrong_weight(const SymmetrizerBundle& b, const BasicState& s,
                                  int samples) {
  SharpnessProbe p;
  const auto pts = bundle_samples(b, samples);
  const double ref = is_direct_kind(b.kind) ? b.constants.C_delta : b.constants.kappa;
  const double floor = std::max(1e-8, 0.01 * ref);

  switch (b.kind) {
    case PointClass::Interior: {
      // drop the boundary term: r alone is never coercive
      p.applicable = true;
      double m = kInf;
      for (const auto& pt : pts) {
        Matrix4cd r = symmetrizer_at(s, b, pt);
        for (int j = 0; j < 4; ++j) r(j, j) -= coercivity_rhs_at(b, pt);
        m = std::min(m, min_eig(r));
      }
      p.probe_constant = m;
      p.wrong_version_certifies = m >= -kEigTol;
      return p;
    }
    case PointClass::BoundaryLopOK:
    case PointClass::Omega1ZeroA:
    case PointClass::Omega1ZeroB:
    case PointClass::Omega2Zero: {
      // constant weight in place of gamma
      p.applicable = true;
      double m = kInf;
      for (const auto& pt : pts) {
        try {
          const Matrix4cd rg = symmetrizer_at(s, b, pt) * generator_at(s, b, pt);
          m = std::min(m, min_eig(0.5 * (rg + rg.adjoint())));
        } catch (const std::exception&) {
          m = -1.0;
        }
      }
      p.probe_constant = std::max(0.0, 0.9 * m);
      p.wrong_version_certifies = p.probe_constant >= floor;
      return p;
    }
    case PointClass::BoundaryLopRoot: {
      // measured decay exponent of lambda_min(Re(r G)) in gamma; weight gamma
      // would need p <= 1, the genuine rate is quadratic or worse
      p.applicable = true;
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      int n = 0;
      double m = kInf;
      for (const auto& pt : pts) {
        if (pt.gamma <= 0.0) continue;
        const Matrix4cd rg = symmetrizer_at(s, b, pt) * generator_at(s, b, pt);
        const double lam = min_eig(0.5 * (rg + rg.adjoint()));
        if (lam <= 0.0) continue;
        const double x = std::log(pt.gamma), y = std::log(lam);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
        m = std::min(m, lam / pt.gamma);
      }
      if (n >= 2) p.weight_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      p.probe_constant = std::isfinite(m) ? std::max(0.0, 0.9 * m) : 0.0;
      p.wrong_version_certifies = p.weight_exponent <= 1.2;
      return p;
    }
    case PointClass::PoleP2: {
      // demand the 1/|tilde tau|^2 gain on every component
      p.applicable = true;
      double m = kInf;
      for (const auto& pt : pts) {
        try {
          const Matrix4cd rg = symmetrizer_at(s, b, pt) * generator_at(s, b, pt);
          const Matrix4cd herm = 0.5 * (rg + rg.adjoint());
          const double tt = std::norm(tilde_tau(s, pt, b.branch_sign));
          if (pt.gamma > 0.0)
            m = std::min(m, weighted_min_ratio(herm, Vector4d::Constant(pt.gamma / tt)));
        } catch (const std::exception&) {
          m = -1.0;
        }
      }
      p.probe_constant = std::isfinite(m) ? std::max(0.0, 0.9 * m) : 0.0;
      p.wrong_version_certifies = p.probe_constant >= floor;
      return p;
    }
    case PointClass::PoleP1:
    case PointClass::PoleP3: {
      // constant lower bound on the reduced determinant (it vanishes at the pole)
      p.applicable = true;
      double m = kInf;
      for (const auto& pt : pts) {
        try {
          const cplx det = b.kind == PointClass::PoleP1 ? pole_mu_boundary_det(s, pt)
                                                        : pole_tau_boundary_det(s, pt);
          m = std::min(m, std::abs(det));
        } catch (const std::exception&) {
          m = -1.0;
        }
      }
      p.probe_constant = std::isfinite(m) ? std::max(0.0, 0.9 * m) : 0.0;
      p.wrong_version_certifies = p.probe_constant >= floor;
      return p;
    }
  }
  return p;
}

CoverReport cover_hemisphere(const BasicState& s, int n, int samples_per_bundle) {
  CoverReport rep;
  const auto grid = hemisphere_grid(n);
  rep.grid_points = static_cast<int>(grid.size());
  std::vector<char> covered(grid.size(), 0);

  auto add = [&](SymmetrizerBundle bundle) {
    CertificationResult cert = certify(bundle, s, samples_per_bundle);
    if (cert.certified) {
      for (size_t i = 0; i < grid.size(); ++i) {
        if (!covered[i] && dist3(grid[i], bundle.center) <= 0.9 * bundle.radius)
          covered[i] = 1;
      }
    }
    rep.bundles.push_back(std::move(bundle));
    rep.results.push_back(std::move(cert));
  };

  // pole and mode-degeneracy patches first, then root patches, then the rest
  for (PointClass which :
       {PointClass::PoleP1, PointClass::PoleP2, PointClass::PoleP3,
        PointClass::Omega1ZeroA, PointClass::Omega1ZeroB, PointClass::Omega2Zero}) {
    for (const auto& pt : special_boundary_points(s, which)) {
      if (classify_point(s, pt).cls != which) continue;  // shadowed by a pole
      add(build_bundle(s, pt, samples_per_bundle));
    }
  }
  for (const auto& root : scan_boundary_roots(s).roots) {
    add(build_boundary_root(s, root.pt, samples_per_bundle));
    add(build_boundary_root(s, root.pt.antipode(), samples_per_bundle));
  }

  std::vector<size_t> order(grid.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t bb) {
    if (grid[a].gamma != grid[bb].gamma) return grid[a].gamma < grid[bb].gamma;
    return std::atan2(grid[a].eta, grid[a].delta) < std::atan2(grid[bb].eta, grid[bb].delta);
  });
  for (size_t idx : order) {
    if (covered[idx]) continue;
    add(build_bundle(s, grid[idx], samples_per_bundle));
  }

  rep.covered = static_cast<int>(std::count(covered.begin(), covered.end(), 1));
  rep.all_certified = rep.covered == rep.grid_points;
  for (const auto& c : rep.results) rep.all_certified = rep.all_certified && c.certified;
  return rep;
}

}  // namespace pvi
