#include "pvistab/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace pvi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double norm_sq_impl(const ModeDecomposition& md, cplx c1, cplx c2) {
  const double m1 = std::norm(c1) * md.e1.squaredNorm();
  const double m2 = std::norm(c2) * md.e2.squaredNorm();
  const double r1 = md.omega1.real();
  const double r2 = md.omega2.real();
  if ((m1 > 0.0 && r1 <= 0.0) || (m2 > 0.0 && r2 <= 0.0)) return kInf;
  double out = 0.0;
  if (m1 > 0.0) out += m1 / (2.0 * r1);
  if (m2 > 0.0) out += m2 / (2.0 * r2);
  const cplx cross = std::conj(c1) * c2 * md.e1.dot(md.e2);
  if (cross != cplx(0.0))
    out += 2.0 * (cross / (std::conj(md.omega1) + md.omega2)).real();
  return out;
}

// slope of y against x, least squares
double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double xm = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double ym = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
  }
  return sxy / sxx;
}

}  // namespace

StableSolution solve_stable_bvp(const BasicState& s, const FrequencyPoint& pt,
                                const Eigen::Vector3cd& g_hat, double tol) {
  const BoundarySymbols bs = boundary_symbols(s, pt);
  StableSolution sol;
  sol.modes = eigen_modes(s, pt);
  Eigen::Matrix2cd B;
  B.col(0) = bs.beta * sol.modes.e1;
  B.col(1) = bs.beta * sol.modes.e2;
  sol.det = B(0, 0) * B(1, 1) - B(0, 1) * B(1, 0);
  if (std::abs(sol.det) <= tol)
    throw NearSingular(std::abs(sol.det),
                       "boundary determinant below tolerance, point is near a "
                       "root or prefactor zero");
  const Eigen::Vector3cd qg = bs.Q * g_hat;
  const Eigen::Vector2cd h = qg.head<2>();
  const Eigen::Vector2cd c = B.fullPivLu().solve(h);
  sol.c1 = c(0);
  sol.c2 = c(1);
  sol.trace = sol.c1 * sol.modes.e1 + sol.c2 * sol.modes.e2;
  const double gn = g_hat.norm();
  const double r = (B * c - h).norm();
  sol.residual = gn > 0.0 ? r / gn : r;
  return sol;
}

Eigen::Vector4cd evaluate_solution(const StableSolution& sol, double x1) {
  const cplx f1 = sol.c1 * std::exp(-sol.modes.omega1 * x1);
  const cplx f2 = sol.c2 * std::exp(-sol.modes.omega2 * x1);
  return f1 * sol.modes.e1 + f2 * sol.modes.e2;
}

Eigen::Vector4cd evaluate_solution(const BasicState& s, const FrequencyPoint& pt,
                                   cplx c1, cplx c2, double x1) {
  const ModeDecomposition md = eigen_modes(s, pt);
  const cplx f1 = c1 * std::exp(-md.omega1 * x1);
  const cplx f2 = c2 * std::exp(-md.omega2 * x1);
  return f1 * md.e1 + f2 * md.e2;
}

double interior_norm_sq(const BasicState& s, const FrequencyPoint& pt, cplx c1,
                        cplx c2) {
  return norm_sq_impl(eigen_modes(s, pt), c1, c2);
}

double interior_norm_sq(const StableSolution& sol) {
  return norm_sq_impl(sol.modes, sol.c1, sol.c2);
}

double interior_norm(const BasicState& s, const FrequencyPoint& pt, cplx c1,
                     cplx c2) {
  return std::sqrt(interior_norm_sq(s, pt, c1, c2));
}

cplx reconstruct_front(const BasicState& s, const FrequencyPoint& pt,
                       const Eigen::Vector3cd& g_hat,
                       const Eigen::Vector4cd& trace) {
  const BoundarySymbols bs = boundary_symbols(s, pt);
  if (!(bs.theta > 0.0))
    throw std::invalid_argument("degenerate front coefficient theta");
  const cplx rhs = (bs.Q.row(2) * g_hat).value();
  const cplx lv = (bs.ell * trace).value();
  return (rhs - lv) / bs.theta;
}

EnergyProbeResult energy_probe(const BasicState& s, const FrequencyPoint& pt,
                               const Eigen::Vector3cd& g_hat, double tol) {
  const StableSolution sol = solve_stable_bvp(s, pt, g_hat, tol);
  EnergyProbeResult r;
  r.pt = pt;
  r.c1 = sol.c1;
  r.c2 = sol.c2;
  r.trace_norm = sol.trace.norm();
  r.interior_norm = std::sqrt(interior_norm_sq(sol));
  r.front_abs = std::abs(reconstruct_front(s, pt, g_hat, sol.trace));
  const double gn = g_hat.norm();
  r.amplification = gn > 0.0 ? r.trace_norm / gn : 0.0;
  return r;
}

GammaSweepResult gamma_sweep(const BasicState& s, const FrequencyPoint& base_pt,
                             const std::vector<double>& gammas,
                             const Eigen::Vector3cd& g_hat) {
  if (gammas.size() < 3)
    throw std::invalid_argument("gamma sweep needs at least three values");
  GammaSweepResult out;
  out.probes.reserve(gammas.size());
  for (double g : gammas) {
    if (!(g > 0.0))
      throw std::invalid_argument("gamma sweep values must be positive");
    const FrequencyPoint pt = normalize_to_sigma(g, base_pt.delta, base_pt.eta);
    out.probes.push_back(energy_probe(s, pt, g_hat, 1e-12));
  }

  std::vector<size_t> order(gammas.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return gammas[a] < gammas[b]; });
  std::vector<double> lx, ly;
  for (size_t i : order) {
    lx.push_back(std::log(gammas[i]));
    ly.push_back(std::log(out.probes[i].amplification));
  }
  out.slope_all = fitted_slope(lx, ly);
  lx.resize(3);
  ly.resize(3);
  out.slope = fitted_slope(lx, ly);
  return out;
}

KreissCheckResult kreiss_quadrature_check(const BasicState& s,
                                          const FrequencyPoint& pt,
                                          const Eigen::Vector3cd& g_hat,
                                          int n_draws, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  KreissCheckResult out{0.0, kInf, 0, true};

  auto account = [&](const Eigen::Vector3cd& g) {
    const StableSolution sol = solve_stable_bvp(s, pt, g, 1e-12);
    // on the boundary the gamma weight kills the interior term exactly
    double lhs = sol.trace.squaredNorm();
    if (pt.gamma > 0.0) lhs += pt.gamma * interior_norm_sq(sol);
    const double ratio = lhs / g.squaredNorm();
    if (!std::isfinite(ratio)) out.holds = false;
    out.fitted_C = std::max(out.fitted_C, ratio);
    out.min_ratio = std::min(out.min_ratio, ratio);
    ++out.draws;
  };

  if (g_hat.norm() > 0.0) account(g_hat);
  for (int i = 0; i < n_draws; ++i) {
    Eigen::Vector3cd g;
    for (int j = 0; j < 3; ++j) g(j) = cplx(nd(rng), nd(rng));
    account(g);
  }
  return out;
}

PoleDecouplingReport check_pole_decoupling(const BasicState& s, PointClass pole,
                                           double gamma_lift) {
  if (pole != PointClass::PoleP1 && pole != PointClass::PoleP3)
    throw std::invalid_argument("decoupling check applies to P1 and P3 only");
  const std::vector<FrequencyPoint> set = special_boundary_points(s, pole);
  if (set.empty()) throw std::invalid_argument("empty pole set");
  const FrequencyPoint base = set.front();
  const FrequencyPoint pt =
      normalize_to_sigma(gamma_lift, base.delta, base.eta);

  Eigen::Vector3cd g;
  g << cplx(0.7, -0.3), cplx(-0.2, 0.5), cplx(0.4, 0.1);
  const StableSolution sol = solve_stable_bvp(s, pt, g, 1e-14);

  const Eigen::Matrix4cd A =
      assemble_interface_matrix(symbol_coefficients(s, pt));
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(A);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("interface matrix eigendecomposition failed");
  const Eigen::PartialPivLU<Eigen::Matrix4cd> basis(es.eigenvectors());

  // V ~ exp(lambda x): growing coordinates are those with Re lambda > 0
  std::array<bool, 4> growing{};
  for (int i = 0; i < 4; ++i) growing[i] = es.eigenvalues()(i).real() > 0.0;

  const double rdec =
      std::min(sol.modes.omega1.real(), sol.modes.omega2.real());
  const double span = std::min(3.0 / std::max(rdec, 1e-12), 1e4);

  const Eigen::Vector4cd coords0 = basis.solve(sol.trace);
  double worst = 0.0;
  for (int j = 0; j <= 20; ++j) {
    const double x1 = span * j / 20.0;
    const Eigen::Vector4cd coords = basis.solve(evaluate_solution(sol, x1));
    double mass = 0.0;
    for (int i = 0; i < 4; ++i)
      if (growing[i]) mass += std::norm(coords(i));
    worst = std::max(worst, std::sqrt(mass));
  }

  PoleDecouplingReport rep;
  rep.pt = pt;
  rep.max_unstable_fraction = worst / coords0.norm();
  rep.decoupled = rep.max_unstable_fraction <= 1e-8;
  return rep;
}

}  // namespace pvi
