#include <doctest.h>

#include <cmath>
#include <vector>

#include "pvistab/symmetrizer.hpp"

using namespace pvi;

namespace {
// All seven symmetrizer cases certify on this state; the reference state of
// the other test files has honest failures near the a12 zero set, so it is
// exercised only where noted.
const BasicState kCert{1.0, 2.0, 2.2, std::sqrt(2.0), 0.7, 0.3};

FrequencyPoint center_of(PointClass which) {
  switch (which) {
    case PointClass::Interior:
      return normalize_to_sigma(0.5, 0.4, 0.6);
    case PointClass::BoundaryLopOK:
      for (double t = 0.15; t < 6.28; t += 0.1) {
        const FrequencyPoint pt{0.0, std::cos(t), std::sin(t)};
        if (distance_to_critical(kCert, pt) > 0.1 &&
            std::abs(lopatinskii_det(kCert, pt)) > 0.01)
          return pt;
      }
      throw std::runtime_error("no clean boundary angle");
    case PointClass::BoundaryLopRoot:
      return scan_boundary_roots(kCert).roots.front().pt;
    default:
      return special_boundary_points(kCert, which).front();
  }
}
}  // namespace

TEST_CASE("bundle samples are deterministic and stay in the patch") {
  const SymmetrizerBundle b = build_interior(kCert, center_of(PointClass::Interior), 100);
  const auto s1 = bundle_samples(b, 200);
  const auto s2 = bundle_samples(b, 200);
  REQUIRE(s1.size() == s2.size());
  for (size_t i = 0; i < s1.size(); ++i) {
    CHECK(s1[i].gamma == s2[i].gamma);
    CHECK(s1[i].delta == s2[i].delta);
    CHECK(s1[i].eta == s2[i].eta);
    CHECK(s1[i].on_sigma(1e-10));
    const double dx = s1[i].gamma - b.center.gamma;
    const double dy = s1[i].delta - b.center.delta;
    const double dz = s1[i].eta - b.center.eta;
    CHECK(std::sqrt(dx * dx + dy * dy + dz * dz) <= b.radius * 1.5 + 1e-12);
  }
}

TEST_CASE("all seven cases certify on the certification state") {
  const PointClass cases[] = {
      PointClass::Interior,      PointClass::BoundaryLopOK,
      PointClass::BoundaryLopRoot, PointClass::Omega1ZeroA,
      PointClass::Omega1ZeroB,   PointClass::Omega2Zero,
      PointClass::PoleP1,        PointClass::PoleP2,
      PointClass::PoleP3};
  for (PointClass which : cases) {
    INFO(to_string(which));
    const FrequencyPoint c = center_of(which);
    const SymmetrizerBundle b = build_bundle(kCert, c, 300);
    const CertificationResult r = certify(b, kCert, 300);
    CHECK(r.certified);
    CHECK(r.failures.empty());
    CHECK(r.min_eig_dissipativity >= -1e-10);
    CHECK(r.min_eig_coercivity >= -1e-10);
    CHECK(r.max_similarity_residual <= 1e-8);
    CHECK(b.constants.kappa > 0.0);
  }
}

TEST_CASE("similarity residual is tiny across each patch") {
  const PointClass cases[] = {PointClass::Interior, PointClass::BoundaryLopOK,
                              PointClass::BoundaryLopRoot, PointClass::Omega1ZeroA,
                              PointClass::Omega2Zero, PointClass::PoleP2};
  for (PointClass which : cases) {
    INFO(to_string(which));
    const SymmetrizerBundle b = build_bundle(kCert, center_of(which), 200);
    double worst = 0.0;
    for (const FrequencyPoint& pt : bundle_samples(b, 100))
      worst = std::max(worst, similarity_residual(kCert, b, pt));
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("weights carry the case-correct gamma orders") {
  const double cf = derive_constants(kCert).fast_interface_speed;
  // interior and the mu pole: constant weight
  for (auto which : {PointClass::Interior, PointClass::PoleP1}) {
    const SymmetrizerBundle b = build_bundle(kCert, center_of(which), 100);
    const FrequencyPoint pt = bundle_samples(b, 50)[7];
    const Eigen::Vector4d w = dissipativity_weight_at(kCert, b, pt);
    CHECK(w.minCoeff() == doctest::Approx(1.0));
    CHECK(w.maxCoeff() == doctest::Approx(1.0));
    CHECK(coercivity_rhs_at(b, pt) == doctest::Approx(1.0));
  }
  // generic boundary and the mode degeneracies: one gamma factor
  for (auto which : {PointClass::BoundaryLopOK, PointClass::Omega1ZeroA,
                     PointClass::Omega2Zero}) {
    const SymmetrizerBundle b = build_bundle(kCert, center_of(which), 100);
    const FrequencyPoint pt = normalize_to_sigma(1e-3, b.center.delta, b.center.eta);
    const Eigen::Vector4d w = dissipativity_weight_at(kCert, b, pt);
    CHECK(w.minCoeff() == doctest::Approx(pt.gamma).epsilon(1e-9));
    CHECK(w.maxCoeff() == doctest::Approx(pt.gamma).epsilon(1e-9));
    CHECK(coercivity_rhs_at(b, pt) == doctest::Approx(1.0));
  }
  // simple root: gamma^3 weight, gamma^2 boundary gain
  {
    const SymmetrizerBundle b =
        build_bundle(kCert, center_of(PointClass::BoundaryLopRoot), 100);
    const FrequencyPoint pt = normalize_to_sigma(1e-3, b.center.delta, b.center.eta);
    const Eigen::Vector4d w = dissipativity_weight_at(kCert, b, pt);
    const double g3 = pt.gamma * pt.gamma * pt.gamma;
    CHECK(w.minCoeff() == doctest::Approx(g3).epsilon(1e-9));
    CHECK(w.maxCoeff() == doctest::Approx(g3).epsilon(1e-9));
    CHECK(coercivity_rhs_at(b, pt) == doctest::Approx(pt.gamma * pt.gamma));
  }
  // tau pole: gamma on the singular mode only
  {
    const SymmetrizerBundle b = build_bundle(kCert, center_of(PointClass::PoleP3), 100);
    const FrequencyPoint pt = normalize_to_sigma(1e-2, b.center.delta, b.center.eta);
    const Eigen::Vector4d w = dissipativity_weight_at(kCert, b, pt);
    CHECK(w.minCoeff() == doctest::Approx(pt.gamma).epsilon(1e-9));
    CHECK(w.maxCoeff() == doctest::Approx(1.0));
  }
  // a21 pole: anisotropic gamma / |tilde tau|^2 on the singular mode
  {
    const SymmetrizerBundle b = build_bundle(kCert, center_of(PointClass::PoleP2), 100);
    const FrequencyPoint pt = normalize_to_sigma(1e-2, b.center.delta, b.center.eta);
    Eigen::Vector4d w = dissipativity_weight_at(kCert, b, pt);
    const cplx tt =
        pt.mu(kCert.v) - cplx(0.0, 1.0) * double(b.branch_sign) * cf * pt.eta;
    std::sort(w.data(), w.data() + 4);
    // three plain gamma entries plus the anisotropic one
    int plain = 0;
    bool aniso = false;
    for (int j = 0; j < 4; ++j) {
      if (std::abs(w(j) - pt.gamma) < 1e-12 * pt.gamma)
        ++plain;
      else if (std::abs(w(j) - pt.gamma / std::norm(tt)) <
               1e-9 * pt.gamma / std::norm(tt))
        aniso = true;
    }
    CHECK(plain == 3);
    CHECK(aniso);
  }
}

TEST_CASE("pole boundary determinants vanish linearly in gamma") {
  for (auto which : {PointClass::PoleP1, PointClass::PoleP3}) {
    const FrequencyPoint p = special_boundary_points(kCert, which).front();
    const auto det_fn = which == PointClass::PoleP1 ? pole_mu_boundary_det
                                                    : pole_tau_boundary_det;
    const double d1 = std::abs(det_fn(kCert, normalize_to_sigma(1e-4, p.delta, p.eta)));
    const double d2 = std::abs(det_fn(kCert, normalize_to_sigma(2e-4, p.delta, p.eta)));
    CHECK(d1 > 0.0);
    CHECK(d2 / d1 == doctest::Approx(2.0).epsilon(0.05));
  }
}

TEST_CASE("p2 branch diagnostics") {
  const FrequencyPoint p = special_boundary_points(kCert, PointClass::PoleP2).front();
  const int sgn = p.eta > 0 ? +1 : -1;
  CHECK(p2_e0(kCert, p.delta, p.eta, sgn) > 0.0);
  const cplx om0 = p2_omega0(kCert, normalize_to_sigma(1e-6, p.delta, p.eta), sgn);
  // at gamma -> 0 omega0 approaches i e0: dominated by the imaginary part
  CHECK(std::abs(om0.imag()) > 10.0 * std::abs(om0.real()));
  CHECK(om0.imag() * sgn * (p.eta > 0 ? 1.0 : -1.0) > 0.0);
}

TEST_CASE("sharpness probes reject the strengthened inequalities") {
  // each probe demands one gamma order more (or drops the boundary term) and
  // must fail where the weight order is genuinely attained
  const PointClass probed[] = {
      PointClass::Interior,        PointClass::BoundaryLopOK,
      PointClass::BoundaryLopRoot, PointClass::Omega1ZeroA,
      PointClass::Omega1ZeroB,     PointClass::Omega2Zero,
      PointClass::PoleP1,          PointClass::PoleP2,
      PointClass::PoleP3};
  for (PointClass which : probed) {
    INFO(to_string(which));
    const SymmetrizerBundle b = build_bundle(kCert, center_of(which), 200);
    const SharpnessProbe probe = probe_wrong_weight(b, kCert, 200);
    CHECK(probe.applicable);
    CHECK_FALSE(probe.wrong_version_certifies);
  }
}

TEST_CASE("root patch dissipativity degenerates superlinearly in gamma") {
  const SymmetrizerBundle b =
      build_bundle(kCert, center_of(PointClass::BoundaryLopRoot), 200);
  const SharpnessProbe probe = probe_wrong_weight(b, kCert, 200);
  CHECK(probe.weight_exponent > 1.2);  // a plain gamma weight would need <= 1
}

TEST_CASE("hemisphere cover certifies everywhere on the certification state") {
  const CoverReport rep = cover_hemisphere(kCert, 16, 100);
  CHECK(rep.all_certified);
  CHECK(rep.covered == rep.grid_points);
  CHECK(rep.grid_points > 0);
  CHECK(rep.bundles.size() == rep.results.size());
  for (const CertificationResult& r : rep.results) CHECK(r.certified);
}
