#include "pvistab/state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pvi {

void validate(const BasicState& s) {
  if (!(s.rho > 0.0)) throw std::invalid_argument("rho must be > 0");
  if (!(s.sound_speed > 0.0)) throw std::invalid_argument("sound_speed must be > 0");
  if (!(s.eps > 0.0 && s.eps < 1.0)) throw std::invalid_argument("eps must be in (0,1)");
}

DerivedConstants derive_constants(const BasicState& s) {
  validate(s);
  DerivedConstants d{};
  d.alpha = 1.0 / (s.rho * s.sound_speed * s.sound_speed);
  d.alfven_speed = std::abs(s.H) / std::sqrt(s.rho);
  const double H2 = s.H * s.H;
  d.fast_interface_speed = std::abs(s.H) / std::sqrt(s.rho * (1.0 + d.alpha * H2));
  const double H4 = H2 * H2;
  const double Hc2 = s.Hc * s.Hc;
  const double Hc4 = Hc2 * Hc2;
  d.disc = d.alpha * d.alpha * (H4 - Hc4) * (H4 - Hc4) + 4.0 * Hc4;
  const double den = 2.0 * (1.0 + d.alpha * H2);
  const double mid = d.alpha * (H4 - Hc4) + 2.0 * H2;
  d.z_plus = (mid + std::sqrt(d.disc)) / den;
  d.z_minus = (mid - std::sqrt(d.disc)) / den;
  return d;
}

namespace {

HypothesisCheck make_check(const std::string& name, double margin, double scale,
                           double rel_tol, bool applicable = true) {
  HypothesisCheck c;
  c.name = name;
  c.applicable = applicable;
  c.margin = margin;
  c.rel_margin = applicable ? margin / scale : std::numeric_limits<double>::infinity();
  c.pass = !applicable || c.rel_margin > rel_tol;
  return c;
}

}  // namespace

HypothesisReport check_hypotheses(const BasicState& s, double rel_tol) {
  validate(s);
  const DerivedConstants d = derive_constants(s);
  const double H2 = s.H * s.H;
  const double av = std::abs(s.v);

  HypothesisReport r;
  r.rel_tol = rel_tol;

  r.checks.push_back(make_check("nonzero_velocity_and_vacuum_field",
                                std::min(std::abs(s.v), std::abs(s.Hc)),
                                std::max({std::abs(s.v), std::abs(s.Hc), 1.0}), rel_tol));
  r.checks.push_back(make_check("positive_density_nonzero_field",
                                std::min(s.rho, std::abs(s.H)),
                                std::max({s.rho, std::abs(s.H), 1.0}), rel_tol));
  r.checks.push_back(make_check("alfven_not_sonic", std::abs(d.alpha * H2 - 1.0),
                                std::max(d.alpha * H2, 1.0), rel_tol));
  r.checks.push_back(make_check("velocity_not_alfven", std::abs(av - d.alfven_speed),
                                std::max({av, d.alfven_speed, 1.0}), rel_tol));
  r.checks.push_back(make_check("velocity_not_fast_interface",
                                std::abs(av - d.fast_interface_speed),
                                std::max({av, d.fast_interface_speed, 1.0}), rel_tol));

  // Resonant speeds exist only in the two-root regime.
  const double rv2 = s.rho * s.v * s.v;
  const bool res_applicable = H2 < std::min(1.0 / d.alpha, rv2);
  const double res_margin = std::min(std::abs(rv2 - d.z_plus), std::abs(rv2 - d.z_minus));
  r.checks.push_back(make_check("velocity_not_resonant", res_margin,
                                std::max({rv2, std::abs(d.z_plus), 1.0}), rel_tol,
                                res_applicable));

  r.all_pass = std::all_of(r.checks.begin(), r.checks.end(),
                           [](const HypothesisCheck& c) { return c.pass; });
  return r;
}

StabilityClass stability_class(const BasicState& s) {
  const HypothesisReport r = check_hypotheses(s);
  if (!r.all_pass) {
    std::string bad;
    for (const auto& c : r.checks)
      if (!c.pass) bad += (bad.empty() ? "" : ", ") + c.name;
    throw HypothesisError("hypotheses violated: " + bad);
  }
  const DerivedConstants d = derive_constants(s);
  const double H2 = s.H * s.H;
  const double threshold = std::min(1.0 / d.alpha, s.rho * s.v * s.v);
  return H2 < threshold ? StabilityClass::TwoBoundaryRoots : StabilityClass::NoRoots;
}

const char* to_string(StabilityClass c) {
  switch (c) {
    case StabilityClass::TwoBoundaryRoots: return "TwoBoundaryRoots";
    case StabilityClass::NoRoots: return "NoRoots";
  }
  return "?";
}

}  // namespace pvi
