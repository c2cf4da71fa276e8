#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include "pvistab/lopatinskii.hpp"

using namespace pvi;

namespace {
const BasicState kRef{1.0, 2.0, 2.0, 1.0, 0.7, 0.01};
// alpha = 1/4, H = 1, Hc^2 = 1/2: at eps = 0 the quartic collapses to the
// biquadratic 1.25 V^4 - 2.1875 V^2 + 0.75 with roots V^2 = z_plus, z_minus.
const std::array<double, 5> kBiquad{0.75, 0.0, -2.1875, 0.0, 1.25};
}  // namespace

TEST_CASE("quartic coefficients on the reference state") {
  const QuarticCoefficients q = interface_quartic(kRef);
  // frozen from an independent symbolic expansion
  CHECK(q.c[0] == doctest::Approx(0.75999604000000009).epsilon(1e-14));
  CHECK(q.c[1] == doctest::Approx(-9.6039999999999982e-05).epsilon(1e-12));
  CHECK(q.c[2] == doctest::Approx(-2.189975).epsilon(1e-14));
  CHECK(q.c[3] == doctest::Approx(2.4009999999999995e-05).epsilon(1e-12));
  CHECK(q.c[4] == doctest::Approx(1.2499939975000001).epsilon(1e-14));
  CHECK(q.P == doctest::Approx(-21.899644839129941).epsilon(1e-12));
  CHECK(q.Q == doctest::Approx(-24.900474524969738).epsilon(1e-12));
  CHECK(q.disc > 0.0);
}

TEST_CASE("quartic solver residuals and the biquadratic factorization") {
  const auto roots = solve_quartic(kBiquad);
  double csum = 0.0;
  for (double c : kBiquad) csum += std::abs(c);
  for (const cplx& r : roots) {
    cplx p = kBiquad[4];
    for (int j = 3; j >= 0; --j) p = p * r + kBiquad[j];
    CHECK(std::abs(p) <= 1e-12 * csum);
  }
  // roots come in +- pairs equal to +-sqrt(z_pm) (State A of the derived
  // constants tests has rho = 1)
  const BasicState a{1.0, 2.0, 0.0, 1.0, std::sqrt(0.5), 0.1};
  const DerivedConstants d = derive_constants(a);
  std::array<double, 4> expect{-std::sqrt(d.z_plus), -std::sqrt(d.z_minus),
                               std::sqrt(d.z_minus), std::sqrt(d.z_plus)};
  std::array<double, 4> got;
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(roots[i].imag()) < 1e-12);
    got[i] = roots[i].real();
  }
  std::sort(got.begin(), got.end());
  for (int i = 0; i < 4; ++i)
    CHECK(std::abs(got[i] - expect[i]) <= 1e-10 * std::abs(expect[i]));

  CHECK_THROWS_AS(solve_quartic({1.0, 2.0, 3.0, 4.0, 0.0}), std::invalid_argument);
}

TEST_CASE("admissibility splits the quartic roots") {
  const auto roots = admissible_roots(kRef);
  REQUIRE(roots.size() == 4);
  int admissible = 0;
  for (const SpeedRoot& r : roots) {
    CHECK(r.is_real);
    if (r.admissible) {
      ++admissible;
      CHECK(r.exceeds_alfven);
      CHECK(r.satisfies_unsquared);
      CHECK(r.unsquared_residual < 1e-8);
      CHECK(std::abs(std::abs(r.V.real()) - 1.1292) < 2e-3);
    } else {
      // the spurious pair lies below the Alfven speed and only solves the
      // sign-flipped partner equation
      CHECK_FALSE(r.exceeds_alfven);
      CHECK(r.spurious_residual < 1e-8);
      CHECK(std::abs(std::abs(r.V.real()) - 0.6905) < 2e-3);
    }
  }
  CHECK(admissible == 2);
  CHECK(std::is_sorted(roots.begin(), roots.end(),
                       [](const SpeedRoot& a, const SpeedRoot& b) {
                         return a.V.real() < b.V.real();
                       }));
}

TEST_CASE("speed-to-hemisphere map round-trips") {
  const FrequencyPoint pt = map_speed_to_sigma(kRef, 1.1);
  CHECK(pt.on_sigma());
  CHECK(pt.gamma == 0.0);
  CHECK(pt.eta > 0.0);
  CHECK(pt.delta / pt.eta + kRef.v == doctest::Approx(1.1).epsilon(1e-12));
}

TEST_CASE("determinant factorizes through the mode decomposition") {
  for (double t : {0.3, 1.1, 2.0, 4.4}) {
    const FrequencyPoint pt = normalize_to_sigma(0.2, std::cos(t), std::sin(t));
    const ModeDecomposition md = eigen_modes(kRef, pt);
    const cplx expect =
        pt.mu(kRef.v) * kRef.eps * pt.tau() *
        (md.mu_chi_a12 - md.chi_omega1 * md.omega2 * kRef.Hc * kRef.Hc);
    CHECK(std::abs(lopatinskii_det(kRef, pt) - expect) < 1e-12);
  }
}

TEST_CASE("boundary scan finds the two predicted roots") {
  const RootScanReport rep = scan_boundary_roots(kRef);
  CHECK(rep.predicted_class == StabilityClass::TwoBoundaryRoots);
  CHECK(rep.predicted_count == 2);
  REQUIRE(rep.roots.size() == 2);
  CHECK(rep.count_consistent);
  CHECK(rep.quartic_consistent);
  CHECK(rep.max_speed_mismatch < 1e-6);
  CHECK(rep.min_abs_det_off_roots > 0.0);
  for (const BoundaryRoot& r : rep.roots) {
    CHECK(r.residual <= 1e-8);
    CHECK(r.pt.on_sigma(1e-10));
    CHECK(r.pt.eta > 0.0);
    CHECK(r.dist_critical > 1e-3);
    CHECK(std::abs(lopatinskii_det(kRef, r.pt)) <= 1e-8);
    CHECK(std::abs(reduced_root_equation(kRef, r.pt)) < 1e-6);
  }
  // the two trace speeds are the admissible quartic pair
  CHECK(std::abs(std::abs(rep.roots[0].V) - 1.1292) < 2e-3);
  CHECK(std::abs(std::abs(rep.roots[1].V) - 1.1292) < 2e-3);
}

TEST_CASE("no roots when the sound speed is subalfvenic") {
  // alpha H^2 = 4 > 1, so z+ < H^2 and neither quartic root is admissible
  BasicState s = kRef;
  s.sound_speed = 0.5;
  s.v = 0.4;
  const RootScanReport rep = scan_boundary_roots(s);
  CHECK(rep.predicted_class == StabilityClass::NoRoots);
  CHECK(rep.predicted_count == 0);
  CHECK(rep.roots.empty());
  CHECK(rep.count_consistent);
  CHECK(rep.quartic_consistent);
  CHECK(rep.min_abs_det_off_roots > 0.0);
}

TEST_CASE("slow flow keeps the surface modes and the scan says so") {
  // rho v^2 = 0.25 < H^2 = 1 < 1/alpha = 4: the velocity-gated classifier
  // predicts no roots, but at small eps the vacuum response carries no
  // frequency scale of its own, so v only translates the two surface modes
  // along the boundary circle.  The scan reports the disagreement instead of
  // suppressing the measured zeros.
  BasicState s = kRef;
  s.v = 0.5;
  const HypothesisReport hyp = check_hypotheses(s);
  REQUIRE(hyp.all_pass);
  CHECK(stability_class(s) == StabilityClass::NoRoots);
  const RootScanReport rep = scan_boundary_roots(s);
  REQUIRE(rep.roots.size() == 2);
  for (const auto& r : rep.roots) CHECK(std::abs(r.residual) <= 1e-8);
  const double z_plus = derive_constants(s).z_plus;
  for (const auto& r : rep.roots)
    CHECK(std::abs(std::abs(r.V) - std::sqrt(z_plus / s.rho)) < 1e-3);
  CHECK(rep.predicted_count == 0);
  CHECK_FALSE(rep.count_consistent);
  CHECK(rep.quartic_consistent);
}

TEST_CASE("determinant bounded away from zero in the interior") {
  CHECK(min_interior_abs_det(kRef, 10000, 0.01) > 0.0);
}
