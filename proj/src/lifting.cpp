#include "pvistab/lifting.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace pvi {

namespace {

// plan creation/destruction is not thread-safe; execution on private buffers is
std::mutex fftw_guard;

void dft_inplace(std::vector<cplx>& data, int sign) {
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_guard);
    plan = fftw_plan_dft_1d(static_cast<int>(data.size()),
                            reinterpret_cast<fftw_complex*>(data.data()),
                            reinterpret_cast<fftw_complex*>(data.data()), sign,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_guard);
    fftw_destroy_plan(plan);
  }
}

// quintic smoothstep and its running integral
double smoothstep(double u) { return ((6.0 * u - 15.0) * u + 10.0) * u * u * u; }
double smoothstep_int(double u) {
  return ((u - 3.0) * u + 2.5) * u * u * u * u;  // T(1) = 1/2
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double xm = 0.0, ym = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    xm += std::log(x[i]);
    ym += std::log(y[i]);
  }
  xm /= n;
  ym /= n;
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (std::log(x[i]) - xm) * (std::log(x[i]) - xm);
    sxy += (std::log(x[i]) - xm) * (std::log(y[i]) - ym);
  }
  return sxy / sxx;
}

double bracket(double xi) { return std::sqrt(1.0 + xi * xi); }

}  // namespace

void validate(const FrontSample& f) {
  if (f.N < 16 || (f.N & (f.N - 1)) != 0)
    throw std::invalid_argument("front grid size must be a power of two >= 16");
  if (!(f.L > 0.0)) throw std::invalid_argument("front period must be positive");
  if (static_cast<int>(f.values.size()) != f.N)
    throw std::invalid_argument("front sample count does not match N");
  for (const cplx& v : f.values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument("front samples must be finite");
}

std::vector<double> front_frequencies(const FrontSample& f) {
  std::vector<double> xi(f.N);
  const double base = 2.0 * std::numbers::pi / f.L;
  for (int j = 0; j < f.N; ++j)
    xi[j] = base * (j <= f.N / 2 ? j : j - f.N);
  return xi;
}

std::vector<cplx> front_transform(const FrontSample& f) {
  validate(f);
  std::vector<cplx> c = f.values;
  dft_inplace(c, FFTW_FORWARD);
  for (cplx& v : c) v /= static_cast<double>(f.N);
  return c;
}

double sobolev_norm(const FrontSample& f, double s) {
  const std::vector<cplx> c = front_transform(f);
  const std::vector<double> xi = front_frequencies(f);
  double sum = 0.0;
  for (int j = 0; j < f.N; ++j)
    sum += std::pow(1.0 + xi[j] * xi[j], s) * std::norm(c[j]);
  return std::sqrt(f.L * sum);
}

double CutoffSpec::chi(double s) const {
  const double a = std::abs(s);
  if (a <= 1.0) return 1.0;
  if (a >= M) return 0.0;
  const double D = M - 1.0;
  const double w = ease_frac * D;
  const double t = a - 1.0;
  const double p = plateau_slope;
  if (t <= w) return 1.0 - p * w * smoothstep_int(t / w);
  if (t <= D - w) return 1.0 - p * (t - 0.5 * w);
  return p * w * smoothstep_int((D - t) / w);
}

double CutoffSpec::dchi(double s) const {
  const double a = std::abs(s);
  if (a <= 1.0 || a >= M) return 0.0;
  const double D = M - 1.0;
  const double w = ease_frac * D;
  const double t = a - 1.0;
  const double p = plateau_slope;
  double d;
  if (t <= w)
    d = -p * smoothstep(t / w);
  else if (t <= D - w)
    d = -p;
  else
    d = -p * smoothstep((D - t) / w);
  return s < 0.0 ? -d : d;
}

CutoffSpec make_cutoff(double M) {
  if (!(M > 1.0)) throw std::invalid_argument("cutoff width must exceed 1");
  CutoffSpec c;
  c.M = M;
  c.ease_frac =
      M > 2.0 ? std::min(0.25, (M - 2.0) / (2.0 * (M - 1.0))) : 0.25;
  c.plateau_slope = 1.0 / ((M - 1.0) * (1.0 - c.ease_frac));
  double worst = 0.0;
  for (int i = 0; i <= 4096; ++i)
    worst = std::max(worst, std::abs(c.dchi(M * i / 4096.0)));
  c.slope_bound_ok = worst <= (2.0 / M) * (1.0 + 1e-12);
  return c;
}

LiftedFront lift(const FrontSample& front, const CutoffSpec& cutoff,
                 const std::vector<double>& x1_grid) {
  const std::vector<cplx> c = front_transform(front);
  const std::vector<double> xi = front_frequencies(front);
  const int n = static_cast<int>(x1_grid.size());
  if (n == 0) throw std::invalid_argument("empty x1 grid");

  LiftedFront out;
  out.x1 = x1_grid;
  out.L = front.L;
  out.psi.resize(n, front.N);
  out.dpsi_dx1.resize(n, front.N);

  std::vector<cplx> row(front.N), drow(front.N);
  for (int i = 0; i < n; ++i) {
    const double x1 = x1_grid[i];
    if (x1 < 0.0) throw std::invalid_argument("x1 grid must be nonnegative");
    for (int j = 0; j < front.N; ++j) {
      const double br = bracket(xi[j]);
      row[j] = c[j] * cutoff.chi(x1 * br);
      drow[j] = c[j] * cutoff.dchi(x1 * br) * br;
    }
    // unnormalized backward transform evaluates the series on the x2 grid
    dft_inplace(row, FFTW_BACKWARD);
    dft_inplace(drow, FFTW_BACKWARD);
    out.psi.row(i) =
        Eigen::Map<const Eigen::VectorXcd>(row.data(), front.N).transpose();
    out.dpsi_dx1.row(i) =
        Eigen::Map<const Eigen::VectorXcd>(drow.data(), front.N).transpose();
  }
  return out;
}

double verify_flatness(const LiftedFront& lf, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("positive step required");
  auto locate = [&](double target) -> int {
    for (size_t i = 0; i < lf.x1.size(); ++i)
      if (std::abs(lf.x1[i] - target) <= 1e-12 * std::max(1.0, target))
        return static_cast<int>(i);
    throw std::invalid_argument("x1 grid must contain 0, h and 2h");
  };
  const int i0 = locate(0.0), i1 = locate(h), i2 = locate(2.0 * h);
  const Eigen::RowVectorXcd fd =
      (-3.0 * lf.psi.row(i0) + 4.0 * lf.psi.row(i1) - lf.psi.row(i2)) /
      (2.0 * h);
  return fd.cwiseAbs().maxCoeff();
}

DecayCheckResult linf_decay_check(const FrontSample& front,
                                  const std::vector<double>& M_list) {
  if (M_list.empty()) throw std::invalid_argument("empty M list");
  const double h2 = sobolev_norm(front, 2.0);
  const std::vector<double> xi = front_frequencies(front);
  double brmax = 1.0;
  for (double x : xi) brmax = std::max(brmax, bracket(x));

  DecayCheckResult out;
  out.M = M_list;
  for (double M : M_list) {
    const CutoffSpec cutoff = make_cutoff(M);
    // geometric x1 grid resolves the per-frequency ramp windows
    std::vector<double> grid{0.0};
    const double lo = 0.25 / brmax;
    const int steps = 384;
    for (int i = 0; i <= steps; ++i)
      grid.push_back(lo * std::pow(M / lo, static_cast<double>(i) / steps));
    const LiftedFront lf = lift(front, cutoff, grid);
    const double sup = lf.dpsi_dx1.cwiseAbs().maxCoeff();
    out.sup_dpsi.push_back(sup);
    out.scaled.push_back(h2 > 0.0 ? sup * std::pow(M, 0.75) / h2 : 0.0);
  }
  out.fitted_constant =
      *std::max_element(out.scaled.begin(), out.scaled.end());
  out.monotone_nonincreasing = std::is_sorted(
      out.sup_dpsi.rbegin(), out.sup_dpsi.rend());
  const bool positive = std::all_of(out.sup_dpsi.begin(), out.sup_dpsi.end(),
                                    [](double v) { return v > 0.0; });
  out.fitted_exponent =
      (positive && M_list.size() > 1) ? loglog_slope(out.M, out.sup_dpsi) : 0.0;
  return out;
}

DiffeoReport diffeo_check(const LiftedFront& lf) {
  DiffeoReport rep;
  rep.min_value = 1.0 + lf.dpsi_dx1.real().minCoeff();
  rep.ok = rep.min_value >= 0.5;
  return rep;
}

double lifted_sobolev_norm(const LiftedFront& lf, double s) {
  const int n = static_cast<int>(lf.x1.size());
  const int N = static_cast<int>(lf.psi.cols());
  if (n < 2) throw std::invalid_argument("need at least two x1 rows");
  const double base = 2.0 * std::numbers::pi / lf.L;
  std::vector<double> row_norm_sq(n);
  std::vector<cplx> buf(N);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < N; ++j) buf[j] = lf.psi(i, j);
    dft_inplace(buf, FFTW_FORWARD);
    double sum = 0.0;
    for (int j = 0; j < N; ++j) {
      const double x = base * (j <= N / 2 ? j : j - N);
      sum += std::pow(1.0 + x * x, s) * std::norm(buf[j]) /
             (static_cast<double>(N) * N);
    }
    row_norm_sq[i] = lf.L * sum;
  }
  double integral = 0.0;
  for (int i = 0; i + 1 < n; ++i)
    integral +=
        (lf.x1[i + 1] - lf.x1[i]) * 0.5 * (row_norm_sq[i] + row_norm_sq[i + 1]);
  return std::sqrt(integral);
}

}  // namespace pvi
