#include "pvistab/frequency.hpp"

#include <algorithm>
#include <cmath>

#include "pvistab/lopatinskii.hpp"

namespace pvi {

double FrequencyPoint::k() const {
  return std::sqrt(gamma * gamma + delta * delta + eta * eta);
}

bool FrequencyPoint::on_sigma(double tol) const {
  return gamma >= 0.0 && std::abs(k() - 1.0) <= tol;
}

FrequencyPoint normalize_to_sigma(double gamma, double delta, double eta) {
  if (gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");
  const double k = std::sqrt(gamma * gamma + delta * delta + eta * eta);
  if (k == 0.0) throw std::invalid_argument("zero frequency vector");
  return {gamma / k, delta / k, eta / k};
}

const char* to_string(PointClass c) {
  switch (c) {
    case PointClass::Interior: return "Interior";
    case PointClass::BoundaryLopOK: return "BoundaryLopOK";
    case PointClass::BoundaryLopRoot: return "BoundaryLopRoot";
    case PointClass::Omega1ZeroA: return "Omega1ZeroA";
    case PointClass::Omega1ZeroB: return "Omega1ZeroB";
    case PointClass::Omega2Zero: return "Omega2Zero";
    case PointClass::PoleP1: return "PoleP1";
    case PointClass::PoleP2: return "PoleP2";
    case PointClass::PoleP3: return "PoleP3";
  }
  return "?";
}

namespace {

// Both boundary-circle points with delta = c * eta, eta != 0.
void push_slope_points(std::vector<FrequencyPoint>& out, double c) {
  const double n = std::sqrt(1.0 + c * c);
  out.push_back({0.0, c / n, 1.0 / n});
  out.push_back({0.0, -c / n, -1.0 / n});
}

double dist3(const FrequencyPoint& a, const FrequencyPoint& b) {
  const double dg = a.gamma - b.gamma, dd = a.delta - b.delta, de = a.eta - b.eta;
  return std::sqrt(dg * dg + dd * dd + de * de);
}

}  // namespace

std::vector<FrequencyPoint> special_boundary_points(const BasicState& s, PointClass which) {
  const DerivedConstants d = derive_constants(s);
  std::vector<FrequencyPoint> out;
  switch (which) {
    case PointClass::PoleP1:
      push_slope_points(out, -s.v);
      break;
    case PointClass::PoleP2:
      push_slope_points(out, -s.v + d.fast_interface_speed);
      push_slope_points(out, -s.v - d.fast_interface_speed);
      break;
    case PointClass::PoleP3:
      push_slope_points(out, 0.0);
      break;
    case PointClass::Omega1ZeroA:
      push_slope_points(out, -s.v + d.alfven_speed);
      push_slope_points(out, -s.v - d.alfven_speed);
      break;
    case PointClass::Omega1ZeroB:
      push_slope_points(out, -s.v + s.sound_speed);
      push_slope_points(out, -s.v - s.sound_speed);
      break;
    case PointClass::Omega2Zero: {
      // eta = +-eps delta on the circle
      const double n = std::sqrt(1.0 + s.eps * s.eps);
      out.push_back({0.0, 1.0 / n, s.eps / n});
      out.push_back({0.0, -1.0 / n, -s.eps / n});
      out.push_back({0.0, 1.0 / n, -s.eps / n});
      out.push_back({0.0, -1.0 / n, s.eps / n});
      break;
    }
    default:
      break;
  }
  return out;
}

double distance_to_critical(const BasicState& s, const FrequencyPoint& pt) {
  double best = std::numeric_limits<double>::infinity();
  for (PointClass c : {PointClass::PoleP1, PointClass::PoleP2, PointClass::PoleP3,
                       PointClass::Omega1ZeroA, PointClass::Omega1ZeroB,
                       PointClass::Omega2Zero}) {
    for (const auto& q : special_boundary_points(s, c)) best = std::min(best, dist3(pt, q));
  }
  return best;
}

Classification classify_point(const BasicState& s, const FrequencyPoint& pt, double tol) {
  if (!pt.on_sigma(1e-9))
    throw std::invalid_argument("classify_point: point not on the hemisphere");

  const PointClass poles[] = {PointClass::PoleP1, PointClass::PoleP2, PointClass::PoleP3};
  const PointClass zeros[] = {PointClass::Omega1ZeroA, PointClass::Omega1ZeroB,
                              PointClass::Omega2Zero};

  PointClass best_cls = PointClass::Interior;
  double best = std::numeric_limits<double>::infinity();
  for (PointClass c : poles) {
    for (const auto& q : special_boundary_points(s, c)) {
      const double d = dist3(pt, q);
      if (d < best) { best = d; best_cls = c; }
    }
  }
  if (best <= tol) return {best_cls, best};

  best = std::numeric_limits<double>::infinity();
  for (PointClass c : zeros) {
    for (const auto& q : special_boundary_points(s, c)) {
      const double d = dist3(pt, q);
      if (d < best) { best = d; best_cls = c; }
    }
  }
  if (best <= tol) return {best_cls, best};

  if (pt.gamma > tol) return {PointClass::Interior, pt.gamma};

  const double det = std::abs(lopatinskii_det(s, pt));
  if (det <= tol) return {PointClass::BoundaryLopRoot, det};
  return {PointClass::BoundaryLopOK, pt.gamma};
}

std::vector<FrequencyPoint> hemisphere_grid(int n) {
  if (n < 8) throw std::invalid_argument("hemisphere_grid: n must be >= 8");
  std::vector<FrequencyPoint> pts;
  // boundary circle, doubled density; 4n divisible by 4 puts (0,0,+-1) and
  // (0,+-1,0) on the grid
  const int nb = 4 * n;
  pts.reserve(static_cast<size_t>(4.0 * n * n / 3.141592653589793 + nb + 8));
  for (int j = 0; j < nb; ++j) {
    const double phi = 2.0 * 3.14159265358979323846 * j / nb;
    pts.push_back({0.0, std::cos(phi), std::sin(phi)});
  }
  // interior latitude rings
  for (int i = 0; i < n; ++i) {
    const double psi = (i + 0.5) * (3.14159265358979323846 / 2.0) / n;
    const double gamma = std::sin(psi);
    const double r = std::cos(psi);
    const int m = std::max(1, static_cast<int>(std::lround(2.0 * n * r)));
    const double offset = 3.14159265358979323846 * i / n;
    for (int j = 0; j < m; ++j) {
      const double phi = 2.0 * 3.14159265358979323846 * j / m + offset;
      pts.push_back({gamma, r * std::cos(phi), r * std::sin(phi)});
    }
  }
  return pts;
}

}  // namespace pvi
