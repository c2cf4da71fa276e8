#include "pvistab/lopatinskii.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

namespace pvi {

namespace {

constexpr double kPi = 3.14159265358979323846;

cplx poly_eval(const std::array<double, 5>& c, cplx x) {
  cplx acc = 0.0;
  for (int j = 4; j >= 0; --j) acc = acc * x + c[j];
  return acc;
}

cplx poly_deriv(const std::array<double, 5>& c, cplx x) {
  cplx acc = 0.0;
  for (int j = 4; j >= 1; --j) acc = acc * x + static_cast<double>(j) * c[j];
  return acc;
}

FrequencyPoint circle_point(double phi) {
  return FrequencyPoint{0.0, std::cos(phi), std::sin(phi)};
}

// Golden-section minimization of f over [a, b]; f need not be smooth at the
// minimizer (|det| has a conical zero at a simple root).
template <typename F>
double golden_min(F&& f, double a, double b, int iters = 90) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters && (b - a) > 1e-15; ++i) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

double angular_dist(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2.0 * kPi);
  return std::min(d, 2.0 * kPi - d);
}

}  // namespace

cplx lopatinskii_det(const BasicState& s, const FrequencyPoint& pt) {
  const cplx mca = mu_chi_a12(s, pt);
  const cplx co1 = chi_omega1(s, pt);
  const cplx om2 = omega2(s, pt);
  return pt.mu(s.v) * s.eps * pt.tau() * (mca - co1 * om2 * s.Hc * s.Hc);
}

cplx reduced_root_equation(const BasicState& s, const FrequencyPoint& pt) {
  const double alpha = 1.0 / (s.rho * s.sound_speed * s.sound_speed);
  const cplx mu2 = pt.mu(s.v) * pt.mu(s.v);
  const cplx num12 = mu2 * s.rho + pt.eta * pt.eta * s.H * s.H;
  const cplx den21 = mu2 * s.rho * (1.0 + alpha * s.H * s.H) + pt.eta * pt.eta * s.H * s.H;
  if (std::abs(den21) <= 1e-13 * (std::abs(num12) + std::abs(mu2) * s.rho))
    throw PoleError(PointClass::PoleP2, "root equation: omega1 diverges");
  return -num12 - omega1(s, pt) * omega2(s, pt) * s.Hc * s.Hc;
}

cplx spurious_root_equation(const BasicState& s, const FrequencyPoint& pt) {
  const cplx mu2 = pt.mu(s.v) * pt.mu(s.v);
  const cplx num12 = mu2 * s.rho + pt.eta * pt.eta * s.H * s.H;
  return -num12 + omega1(s, pt) * omega2(s, pt) * s.Hc * s.Hc;
}

QuarticCoefficients interface_quartic(const BasicState& s) {
  const double alpha = 1.0 / (s.rho * s.sound_speed * s.sound_speed);
  const double H2 = s.H * s.H;
  const double Hc4 = s.Hc * s.Hc * s.Hc * s.Hc;
  const double e2 = s.eps * s.eps;

  QuarticCoefficients q;
  q.c[4] = s.rho * s.rho * (1.0 + alpha * H2) - e2 * s.rho * alpha * Hc4;
  q.c[3] = 2.0 * e2 * s.rho * alpha * s.v * Hc4;
  q.c[2] = (e2 + s.rho * alpha - e2 * s.rho * alpha * s.v * s.v) * Hc4 -
           s.rho * H2 * (2.0 + alpha * H2);
  q.c[1] = -2.0 * e2 * s.v * Hc4;
  q.c[0] = H2 * H2 - (1.0 - e2 * s.v * s.v) * Hc4;

  const double a = q.c[4], b = q.c[3], c = q.c[2], d = q.c[1], e = q.c[0];
  q.P = 8.0 * a * c - 3.0 * b * b;
  q.Q = 64.0 * a * a * a * e - 16.0 * a * a * c * c + 16.0 * a * b * b * c -
        16.0 * a * a * b * d - 3.0 * b * b * b * b;
  q.disc = 256.0 * a * a * a * e * e * e - 192.0 * a * a * b * d * e * e -
           128.0 * a * a * c * c * e * e + 144.0 * a * a * c * d * d * e -
           27.0 * a * a * d * d * d * d + 144.0 * a * b * b * c * e * e -
           6.0 * a * b * b * d * d * e - 80.0 * a * b * c * c * d * e +
           18.0 * a * b * c * d * d * d + 16.0 * a * c * c * c * c * e -
           4.0 * a * c * c * c * d * d - 27.0 * b * b * b * b * e * e +
           18.0 * b * b * b * c * d * e - 4.0 * b * b * b * d * d * d -
           4.0 * b * b * c * c * c * e + b * b * c * c * d * d;
  return q;
}

std::array<cplx, 4> solve_quartic(const std::array<double, 5>& c) {
  double scale = 0.0;
  for (double cj : c) scale += std::abs(cj);
  if (std::abs(c[4]) <= 1e-12 * scale)
    throw std::invalid_argument("solve_quartic: leading coefficient degenerates");

  Eigen::Matrix4d companion = Eigen::Matrix4d::Zero();
  for (int j = 0; j < 3; ++j) companion(j + 1, j) = 1.0;
  for (int j = 0; j < 4; ++j) companion(j, 3) = -c[j] / c[4];
  Eigen::EigenSolver<Eigen::Matrix4d> es(companion, /*computeEigenvectors=*/false);

  std::array<cplx, 4> roots;
  for (int j = 0; j < 4; ++j) {
    cplx x = es.eigenvalues()(j);
    for (int it = 0; it < 60; ++it) {
      const cplx p = poly_eval(c, x);
      if (std::abs(p) <= 1e-13 * scale) break;
      const cplx dp = poly_deriv(c, x);
      if (std::abs(dp) <= 1e-300) break;
      x -= p / dp;
    }
    roots[j] = x;
  }
  std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return roots;
}

FrequencyPoint map_speed_to_sigma(const BasicState& s, double V) {
  // eta = 1 representative of delta = eta (V - v), then rescaled.
  return normalize_to_sigma(0.0, V - s.v, 1.0);
}

std::vector<SpeedRoot> admissible_roots(const BasicState& s, double real_tol) {
  const auto q = interface_quartic(s);
  const auto roots = solve_quartic(q.c);
  const double H2 = s.H * s.H;

  std::vector<SpeedRoot> out;
  for (const cplx& V : roots) {
    SpeedRoot r;
    r.V = V;
    r.is_real = std::abs(V.imag()) <= real_tol * std::max(1.0, std::abs(V.real()));
    r.exceeds_alfven = s.rho * V.real() * V.real() > H2;
    r.unsquared_residual = std::numeric_limits<double>::quiet_NaN();
    r.spurious_residual = std::numeric_limits<double>::quiet_NaN();
    r.satisfies_unsquared = false;
    if (r.is_real) {
      try {
        const FrequencyPoint pt = map_speed_to_sigma(s, V.real());
        r.unsquared_residual = std::abs(reduced_root_equation(s, pt));
        r.spurious_residual = std::abs(spurious_root_equation(s, pt));
        r.satisfies_unsquared = r.unsquared_residual <= 1e-6 &&
                                r.unsquared_residual <= 1e-3 * r.spurious_residual;
      } catch (const PoleError&) {
        // root landed on a pole of the mode factorization; not a boundary root
      }
    }
    r.admissible = r.is_real && r.exceeds_alfven && r.satisfies_unsquared;
    out.push_back(r);
  }
  return out;
}

RootScanReport scan_boundary_roots(const BasicState& s, int n_grid, double tol) {
  RootScanReport rep;
  rep.predicted_class = stability_class(s);
  rep.predicted_count = rep.predicted_class == StabilityClass::TwoBoundaryRoots ? 2 : 0;

  n_grid = std::max(n_grid, 10000);
  const double excl_radius = 10.0 * tol;

  std::vector<FrequencyPoint> special;
  for (PointClass c : {PointClass::PoleP1, PointClass::PoleP2, PointClass::PoleP3,
                       PointClass::Omega1ZeroA, PointClass::Omega1ZeroB,
                       PointClass::Omega2Zero}) {
    const auto pts = special_boundary_points(s, c);
    special.insert(special.end(), pts.begin(), pts.end());
  }
  const auto near_special = [&](const FrequencyPoint& pt) {
    for (const auto& q : special) {
      const double dd = pt.delta - q.delta, de = pt.eta - q.eta;
      if (std::sqrt(pt.gamma * pt.gamma + dd * dd + de * de) <= excl_radius) return true;
    }
    return false;
  };
  const auto f = [&](double phi) { return std::abs(lopatinskii_det(s, circle_point(phi))); };

  const double step = 2.0 * kPi / n_grid;
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> val(n_grid, inf);
  for (int j = 0; j < n_grid; ++j) {
    const double phi = j * step;
    if (!near_special(circle_point(phi))) val[j] = f(phi);
  }

  // Bracket every interior local minimum of |det| on the circle, refine, and
  // keep the ones that actually reach zero. Minima created by the exclusion
  // padding refine into a special point and are dropped by the distance test.
  std::vector<double> root_phis;
  for (int j = 0; j < n_grid; ++j) {
    if (val[j] == inf) continue;
    const double prev = val[(j + n_grid - 1) % n_grid];
    const double next = val[(j + 1) % n_grid];
    if (val[j] > prev || val[j] > next) continue;
    const double phi = golden_min(f, (j - 1) * step, (j + 1) * step);
    const FrequencyPoint pt = circle_point(phi);
    if (f(phi) > 1e-8) continue;
    if (distance_to_critical(s, pt) <= excl_radius) continue;
    root_phis.push_back(std::fmod(phi + 2.0 * kPi, 2.0 * kPi));
  }

  // Antipodal pairs show up at phi and phi + pi; keep the eta > 0 member.
  std::sort(root_phis.begin(), root_phis.end());
  std::vector<double> canonical;
  for (double phi : root_phis) {
    const double c = std::fmod(phi, kPi);
    bool dup = false;
    for (double other : canonical)
      dup = dup || angular_dist(c, other) <= 1e-6 || angular_dist(c, other) >= kPi - 1e-6;
    if (!dup) canonical.push_back(c);
  }

  for (double c : canonical) {
    const double phi = std::sin(c) > 0.0 ? c : c + kPi;
    BoundaryRoot r;
    r.pt = circle_point(phi);
    r.V = r.pt.delta / r.pt.eta + s.v;
    r.residual = f(phi);
    r.dist_critical = distance_to_critical(s, r.pt);
    rep.roots.push_back(r);
  }
  std::sort(rep.roots.begin(), rep.roots.end(),
            [](const BoundaryRoot& a, const BoundaryRoot& b) { return a.V < b.V; });

  rep.count_consistent = static_cast<int>(rep.roots.size()) == rep.predicted_count;

  // Cross-validate against the quartic in the trace speed.
  std::vector<double> quartic_V;
  for (const auto& r : admissible_roots(s))
    if (r.admissible) quartic_V.push_back(r.V.real());
  rep.max_speed_mismatch = 0.0;
  rep.quartic_consistent = quartic_V.size() == rep.roots.size();
  for (const auto& r : rep.roots) {
    double best = inf;
    for (double Vq : quartic_V) best = std::min(best, std::abs(r.V - Vq));
    rep.max_speed_mismatch = std::max(rep.max_speed_mismatch, best);
  }
  if (rep.roots.empty()) rep.max_speed_mismatch = 0.0;
  rep.quartic_consistent = rep.quartic_consistent && rep.max_speed_mismatch <= 1e-6;

  rep.min_abs_det_off_roots = inf;
  for (int j = 0; j < n_grid; ++j) {
    if (val[j] == inf) continue;
    const double phi = j * step;
    bool near_root = false;
    for (double c : canonical)
      near_root = near_root || angular_dist(phi, c) <= 1e-2 ||
                  angular_dist(phi, c + kPi) <= 1e-2;
    if (!near_root) rep.min_abs_det_off_roots = std::min(rep.min_abs_det_off_roots, val[j]);
  }
  return rep;
}

double min_interior_abs_det(const BasicState& s, int n_target, double gamma_min) {
  int n = 8;
  std::vector<FrequencyPoint> kept;
  for (;;) {
    kept.clear();
    for (const auto& pt : hemisphere_grid(n))
      if (pt.gamma >= gamma_min) kept.push_back(pt);
    if (static_cast<int>(kept.size()) >= n_target) break;
    n += n / 2 + 1;
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& pt : kept) best = std::min(best, std::abs(lopatinskii_det(s, pt)));
  return best;
}

}  // namespace pvi
