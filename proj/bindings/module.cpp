#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pvistab/energy.hpp"
#include "pvistab/lifting.hpp"
#include "pvistab/sweep.hpp"
#include "pvistab/symmetrizer.hpp"

namespace py = pybind11;
using namespace pvi;

namespace {

PointClass point_class_from(const std::string& name) {
  for (PointClass c : {PointClass::Interior, PointClass::BoundaryLopOK,
                       PointClass::BoundaryLopRoot, PointClass::Omega1ZeroA,
                       PointClass::Omega1ZeroB, PointClass::Omega2Zero,
                       PointClass::PoleP1, PointClass::PoleP2, PointClass::PoleP3})
    if (name == to_string(c)) return c;
  throw std::invalid_argument("unknown point class: " + name);
}

}  // namespace

PYBIND11_MODULE(pvistab, m) {
  m.doc() = "Plasma-vacuum interface stability toolkit";

  py::register_exception<HypothesisError>(m, "HypothesisError");
  py::register_exception<PoleError>(m, "PoleError");
  py::register_exception<BranchError>(m, "BranchError");
  py::register_exception<NearSingular>(m, "NearSingular");

  // ---- background state ----------------------------------------------------
  py::class_<BasicState>(m, "BasicState")
      .def(py::init<>())
      .def(py::init([](double rho, double sound_speed, double v, double H,
                       double Hc, double eps) {
             return BasicState{rho, sound_speed, v, H, Hc, eps};
           }),
           py::arg("rho"), py::arg("sound_speed"), py::arg("v"), py::arg("H"),
           py::arg("Hc"), py::arg("eps"))
      .def_readwrite("rho", &BasicState::rho)
      .def_readwrite("sound_speed", &BasicState::sound_speed)
      .def_readwrite("v", &BasicState::v)
      .def_readwrite("H", &BasicState::H)
      .def_readwrite("Hc", &BasicState::Hc)
      .def_readwrite("eps", &BasicState::eps)
      .def("__repr__", [](const BasicState& s) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "BasicState(rho=%g, sound_speed=%g, v=%g, H=%g, Hc=%g, eps=%g)",
                      s.rho, s.sound_speed, s.v, s.H, s.Hc, s.eps);
        return std::string(buf);
      });
  m.def("validate_state", [](const BasicState& s) { validate(s); });

  py::class_<DerivedConstants>(m, "DerivedConstants")
      .def_readonly("alpha", &DerivedConstants::alpha)
      .def_readonly("alfven_speed", &DerivedConstants::alfven_speed)
      .def_readonly("fast_interface_speed", &DerivedConstants::fast_interface_speed)
      .def_readonly("disc", &DerivedConstants::disc)
      .def_readonly("z_plus", &DerivedConstants::z_plus)
      .def_readonly("z_minus", &DerivedConstants::z_minus);
  m.def("derive_constants", &derive_constants);

  py::class_<HypothesisCheck>(m, "HypothesisCheck")
      .def_readonly("name", &HypothesisCheck::name)
      .def_readonly("passed", &HypothesisCheck::pass)
      .def_readonly("applicable", &HypothesisCheck::applicable)
      .def_readonly("margin", &HypothesisCheck::margin)
      .def_readonly("rel_margin", &HypothesisCheck::rel_margin);
  py::class_<HypothesisReport>(m, "HypothesisReport")
      .def_readonly("checks", &HypothesisReport::checks)
      .def_readonly("all_pass", &HypothesisReport::all_pass)
      .def_readonly("rel_tol", &HypothesisReport::rel_tol);
  m.def("check_hypotheses", &check_hypotheses, py::arg("state"),
        py::arg("rel_tol") = 1e-9);
  m.def("stability_class", [](const BasicState& s) {
    return std::string(to_string(stability_class(s)));
  });

  // ---- frequency hemisphere --------------------------------------------------
  py::class_<FrequencyPoint>(m, "FrequencyPoint")
      .def(py::init([](double gamma, double delta, double eta) {
             return FrequencyPoint{gamma, delta, eta};
           }),
           py::arg("gamma"), py::arg("delta"), py::arg("eta"))
      .def_readwrite("gamma", &FrequencyPoint::gamma)
      .def_readwrite("delta", &FrequencyPoint::delta)
      .def_readwrite("eta", &FrequencyPoint::eta)
      .def("tau", &FrequencyPoint::tau)
      .def("k", &FrequencyPoint::k)
      .def("mu", &FrequencyPoint::mu, py::arg("v"))
      .def("on_sigma", &FrequencyPoint::on_sigma, py::arg("tol") = 1e-12)
      .def("antipode", &FrequencyPoint::antipode)
      .def("__repr__", [](const FrequencyPoint& p) {
        char buf[120];
        std::snprintf(buf, sizeof buf, "FrequencyPoint(gamma=%g, delta=%g, eta=%g)",
                      p.gamma, p.delta, p.eta);
        return std::string(buf);
      });
  m.def("normalize_to_sigma", &normalize_to_sigma, py::arg("gamma"),
        py::arg("delta"), py::arg("eta"));
  m.def(
      "classify_point",
      [](const BasicState& s, const FrequencyPoint& pt, double tol) {
        const Classification c = classify_point(s, pt, tol);
        return py::make_tuple(std::string(to_string(c.cls)), c.distance);
      },
      py::arg("state"), py::arg("point"), py::arg("tol") = 1e-6);
  m.def(
      "special_boundary_points",
      [](const BasicState& s, const std::string& which) {
        return special_boundary_points(s, point_class_from(which));
      },
      py::arg("state"), py::arg("which"));
  m.def("distance_to_critical", &distance_to_critical);
  m.def("hemisphere_grid", &hemisphere_grid, py::arg("n"));

  // ---- interface symbol -------------------------------------------------------
  py::class_<SymbolCoefficients>(m, "SymbolCoefficients")
      .def_readonly("a12", &SymbolCoefficients::a12)
      .def_readonly("a21", &SymbolCoefficients::a21)
      .def_readonly("a34", &SymbolCoefficients::a34)
      .def_readonly("a43", &SymbolCoefficients::a43);
  m.def("symbol_coefficients", &symbol_coefficients, py::arg("state"),
        py::arg("point"), py::arg("pole_tol") = 1e-6);
  m.def("assemble_interface_matrix", &assemble_interface_matrix);

  py::class_<ModeDecomposition>(m, "ModeDecomposition")
      .def_readonly("omega1", &ModeDecomposition::omega1)
      .def_readonly("omega2", &ModeDecomposition::omega2)
      .def_readonly("chi", &ModeDecomposition::chi)
      .def_readonly("mu_chi_a12", &ModeDecomposition::mu_chi_a12)
      .def_readonly("chi_omega1", &ModeDecomposition::chi_omega1)
      .def_readonly("e1", &ModeDecomposition::e1)
      .def_readonly("e2", &ModeDecomposition::e2)
      .def_readonly("e3", &ModeDecomposition::e3)
      .def_readonly("e4", &ModeDecomposition::e4);
  m.def("eigen_modes", &eigen_modes, py::arg("state"), py::arg("point"),
        py::arg("tol") = 1e-6);

  // ---- boundary determinant and roots ----------------------------------------
  m.def("lopatinskii_det", &lopatinskii_det);

  py::class_<QuarticCoefficients>(m, "QuarticCoefficients")
      .def_readonly("c", &QuarticCoefficients::c)
      .def_readonly("P", &QuarticCoefficients::P)
      .def_readonly("Q", &QuarticCoefficients::Q)
      .def_readonly("disc", &QuarticCoefficients::disc);
  m.def("interface_quartic", &interface_quartic);
  m.def("solve_quartic", &solve_quartic, py::arg("coefficients"));

  py::class_<SpeedRoot>(m, "SpeedRoot")
      .def_readonly("V", &SpeedRoot::V)
      .def_readonly("is_real", &SpeedRoot::is_real)
      .def_readonly("exceeds_alfven", &SpeedRoot::exceeds_alfven)
      .def_readonly("satisfies_unsquared", &SpeedRoot::satisfies_unsquared)
      .def_readonly("admissible", &SpeedRoot::admissible)
      .def_readonly("unsquared_residual", &SpeedRoot::unsquared_residual)
      .def_readonly("spurious_residual", &SpeedRoot::spurious_residual);
  m.def("admissible_roots", &admissible_roots, py::arg("state"),
        py::arg("real_tol") = 1e-8);
  m.def("map_speed_to_sigma", &map_speed_to_sigma);

  py::class_<BoundaryRoot>(m, "BoundaryRoot")
      .def_readonly("pt", &BoundaryRoot::pt)
      .def_readonly("V", &BoundaryRoot::V)
      .def_readonly("residual", &BoundaryRoot::residual)
      .def_readonly("dist_critical", &BoundaryRoot::dist_critical);
  py::class_<RootScanReport>(m, "RootScanReport")
      .def_property_readonly("predicted_class",
                             [](const RootScanReport& r) {
                               return std::string(to_string(r.predicted_class));
                             })
      .def_readonly("predicted_count", &RootScanReport::predicted_count)
      .def_readonly("roots", &RootScanReport::roots)
      .def_readonly("count_consistent", &RootScanReport::count_consistent)
      .def_readonly("quartic_consistent", &RootScanReport::quartic_consistent)
      .def_readonly("max_speed_mismatch", &RootScanReport::max_speed_mismatch)
      .def_readonly("min_abs_det_off_roots", &RootScanReport::min_abs_det_off_roots);
  m.def("scan_boundary_roots", &scan_boundary_roots, py::arg("state"),
        py::arg("n_grid") = 10000, py::arg("tol") = 1e-6);
  m.def("min_interior_abs_det", &min_interior_abs_det, py::arg("state"),
        py::arg("n_target"), py::arg("gamma_min"));

  // ---- symmetrizers -----------------------------------------------------------
  py::class_<SymmetrizerConstants>(m, "SymmetrizerConstants")
      .def_readonly("kappa", &SymmetrizerConstants::kappa)
      .def_readonly("C", &SymmetrizerConstants::C)
      .def_readonly("Kprime", &SymmetrizerConstants::Kprime)
      .def_readonly("C_delta", &SymmetrizerConstants::C_delta);
  py::class_<SymmetrizerBundle>(m, "SymmetrizerBundle")
      .def_property_readonly("kind",
                             [](const SymmetrizerBundle& b) {
                               return std::string(to_string(b.kind));
                             })
      .def_readonly("center", &SymmetrizerBundle::center)
      .def_readonly("radius", &SymmetrizerBundle::radius)
      .def_readonly("constants", &SymmetrizerBundle::constants);
  py::class_<CertificationResult>(m, "CertificationResult")
      .def_readonly("min_eig_dissipativity", &CertificationResult::min_eig_dissipativity)
      .def_readonly("min_eig_coercivity", &CertificationResult::min_eig_coercivity)
      .def_readonly("max_similarity_residual",
                    &CertificationResult::max_similarity_residual)
      .def_readonly("samples", &CertificationResult::samples)
      .def_readonly("failures", &CertificationResult::failures)
      .def_readonly("certified", &CertificationResult::certified);
  py::class_<SharpnessProbe>(m, "SharpnessProbe")
      .def_readonly("applicable", &SharpnessProbe::applicable)
      .def_readonly("wrong_version_certifies", &SharpnessProbe::wrong_version_certifies)
      .def_readonly("probe_constant", &SharpnessProbe::probe_constant)
      .def_readonly("weight_exponent", &SharpnessProbe::weight_exponent);
  py::class_<CoverReport>(m, "CoverReport")
      .def_readonly("bundles", &CoverReport::bundles)
      .def_readonly("results", &CoverReport::results)
      .def_readonly("grid_points", &CoverReport::grid_points)
      .def_readonly("covered", &CoverReport::covered)
      .def_readonly("all_certified", &CoverReport::all_certified);
  m.def("build_bundle", &build_bundle, py::arg("state"), py::arg("center"),
        py::arg("samples") = 500);
  m.def("certify", &certify, py::arg("bundle"), py::arg("state"),
        py::arg("samples") = 500);
  m.def("probe_wrong_weight", &probe_wrong_weight, py::arg("bundle"),
        py::arg("state"), py::arg("samples") = 200);
  m.def("cover_hemisphere", &cover_hemisphere, py::arg("state"), py::arg("n") = 48,
        py::arg("samples_per_bundle") = 150);
  m.def("similarity_residual", &similarity_residual);

  // ---- energy estimate ---------------------------------------------------------
  py::class_<StableSolution>(m, "StableSolution")
      .def_readonly("c1", &StableSolution::c1)
      .def_readonly("c2", &StableSolution::c2)
      .def_readonly("trace", &StableSolution::trace)
      .def_readonly("det", &StableSolution::det)
      .def_readonly("residual", &StableSolution::residual);
  m.def("solve_stable_bvp", &solve_stable_bvp, py::arg("state"), py::arg("point"),
        py::arg("g_hat"), py::arg("tol") = 1e-8);
  m.def("evaluate_solution",
        py::overload_cast<const StableSolution&, double>(&evaluate_solution),
        py::arg("solution"), py::arg("x1"));
  m.def("interior_norm_sq",
        py::overload_cast<const StableSolution&>(&interior_norm_sq),
        py::arg("solution"));
  m.def("reconstruct_front", &reconstruct_front, py::arg("state"), py::arg("point"),
        py::arg("g_hat"), py::arg("trace"));

  py::class_<EnergyProbeResult>(m, "EnergyProbeResult")
      .def_readonly("pt", &EnergyProbeResult::pt)
      .def_readonly("c1", &EnergyProbeResult::c1)
      .def_readonly("c2", &EnergyProbeResult::c2)
      .def_readonly("trace_norm", &EnergyProbeResult::trace_norm)
      .def_readonly("interior_norm", &EnergyProbeResult::interior_norm)
      .def_readonly("front_abs", &EnergyProbeResult::front_abs)
      .def_readonly("amplification", &EnergyProbeResult::amplification);
  m.def("energy_probe", &energy_probe, py::arg("state"), py::arg("point"),
        py::arg("g_hat"), py::arg("tol") = 1e-8);

  py::class_<GammaSweepResult>(m, "GammaSweepResult")
      .def_readonly("probes", &GammaSweepResult::probes)
      .def_readonly("slope", &GammaSweepResult::slope)
      .def_readonly("slope_all", &GammaSweepResult::slope_all);
  m.def("gamma_sweep", &gamma_sweep, py::arg("state"), py::arg("base_point"),
        py::arg("gammas"), py::arg("g_hat"));

  py::class_<KreissCheckResult>(m, "KreissCheckResult")
      .def_readonly("fitted_C", &KreissCheckResult::fitted_C)
      .def_readonly("min_ratio", &KreissCheckResult::min_ratio)
      .def_readonly("draws", &KreissCheckResult::draws)
      .def_readonly("holds", &KreissCheckResult::holds);
  m.def("kreiss_quadrature_check", &kreiss_quadrature_check, py::arg("state"),
        py::arg("point"), py::arg("g_hat"), py::arg("n_draws") = 20,
        py::arg("seed") = 12345u);

  py::class_<PoleDecouplingReport>(m, "PoleDecouplingReport")
      .def_readonly("pt", &PoleDecouplingReport::pt)
      .def_readonly("max_unstable_fraction", &PoleDecouplingReport::max_unstable_fraction)
      .def_readonly("decoupled", &PoleDecouplingReport::decoupled);
  m.def(
      "check_pole_decoupling",
      [](const BasicState& s, const std::string& pole, double gamma_lift) {
        return check_pole_decoupling(s, point_class_from(pole), gamma_lift);
      },
      py::arg("state"), py::arg("pole"), py::arg("gamma_lift") = 1e-3);

  // ---- front lifting -------------------------------------------------------------
  py::class_<FrontSample>(m, "FrontSample")
      .def(py::init<>())
      .def(py::init([](int N, double L, std::vector<cplx> values) {
             return FrontSample{N, L, std::move(values)};
           }),
           py::arg("N"), py::arg("L"), py::arg("values"))
      .def_readwrite("N", &FrontSample::N)
      .def_readwrite("L", &FrontSample::L)
      .def_readwrite("values", &FrontSample::values);
  m.def("validate_front", [](const FrontSample& f) { validate(f); });
  m.def("front_frequencies", &front_frequencies);
  m.def("front_transform", &front_transform);
  m.def("sobolev_norm", &sobolev_norm, py::arg("front"), py::arg("s"));

  py::class_<CutoffSpec>(m, "CutoffSpec")
      .def_readonly("M", &CutoffSpec::M)
      .def_readonly("ease_frac", &CutoffSpec::ease_frac)
      .def_readonly("plateau_slope", &CutoffSpec::plateau_slope)
      .def_readonly("slope_bound_ok", &CutoffSpec::slope_bound_ok)
      .def("chi", &CutoffSpec::chi)
      .def("dchi", &CutoffSpec::dchi);
  m.def("make_cutoff", &make_cutoff, py::arg("M"));

  py::class_<LiftedFront>(m, "LiftedFront")
      .def_readonly("x1", &LiftedFront::x1)
      .def_readonly("L", &LiftedFront::L)
      .def_readonly("psi", &LiftedFront::psi)
      .def_readonly("dpsi_dx1", &LiftedFront::dpsi_dx1);
  m.def("lift", &lift, py::arg("front"), py::arg("cutoff"), py::arg("x1_grid"));
  m.def("verify_flatness", &verify_flatness, py::arg("lifted"), py::arg("h"));

  py::class_<DecayCheckResult>(m, "DecayCheckResult")
      .def_readonly("M", &DecayCheckResult::M)
      .def_readonly("sup_dpsi", &DecayCheckResult::sup_dpsi)
      .def_readonly("scaled", &DecayCheckResult::scaled)
      .def_readonly("fitted_constant", &DecayCheckResult::fitted_constant)
      .def_readonly("fitted_exponent", &DecayCheckResult::fitted_exponent)
      .def_readonly("monotone_nonincreasing", &DecayCheckResult::monotone_nonincreasing);
  m.def("linf_decay_check", &linf_decay_check, py::arg("front"), py::arg("M_list"));

  py::class_<DiffeoReport>(m, "DiffeoReport")
      .def_readonly("min_value", &DiffeoReport::min_value)
      .def_readonly("ok", &DiffeoReport::ok);
  m.def("diffeo_check", &diffeo_check);
  m.def("lifted_sobolev_norm", &lifted_sobolev_norm, py::arg("lifted"), py::arg("s"));

  // ---- sweep driver ----------------------------------------------------------------
  py::class_<SweepConfig>(m, "SweepConfig")
      .def(py::init<>())
      .def_readwrite("base", &SweepConfig::base)
      .def_readwrite("hemisphere_n", &SweepConfig::hemisphere_n)
      .def_readwrite("tol", &SweepConfig::tol)
      .def_readwrite("jobs", &SweepConfig::jobs)
      .def_readwrite("out_dir", &SweepConfig::out_dir);
  m.def("parse_config", &parse_config, py::arg("json_text"));
  m.def("validate_config", [](const SweepConfig& c) { validate(c); });
  m.def("config_echo", &config_echo);

  py::class_<DiagramRow>(m, "DiagramRow")
      .def_readonly("index", &DiagramRow::index)
      .def_readonly("coords", &DiagramRow::coords)
      .def_readonly("state", &DiagramRow::state)
      .def_readonly("hypotheses_pass", &DiagramRow::hypotheses_pass)
      .def_readonly("stability", &DiagramRow::stability)
      .def_readonly("root_count", &DiagramRow::root_count)
      .def_readonly("max_root_residual", &DiagramRow::max_root_residual)
      .def_readonly("min_abs_det_boundary", &DiagramRow::min_abs_det_boundary)
      .def_readonly("min_abs_det_interior", &DiagramRow::min_abs_det_interior)
      .def_readonly("roots_consistent", &DiagramRow::roots_consistent)
      .def_readonly("certified_bundles", &DiagramRow::certified_bundles)
      .def_readonly("failed_bundles", &DiagramRow::failed_bundles)
      .def_readonly("cover_complete", &DiagramRow::cover_complete)
      .def_readonly("energy_slope", &DiagramRow::energy_slope)
      .def_readonly("kreiss_C", &DiagramRow::kreiss_C)
      .def_readonly("energy_ok", &DiagramRow::energy_ok)
      .def_readonly("consistent", &DiagramRow::consistent)
      .def_readonly("note", &DiagramRow::note);
  py::class_<LiftingSummary>(m, "LiftingSummary")
      .def_readonly("ran", &LiftingSummary::ran)
      .def_readonly("trace_error", &LiftingSummary::trace_error)
      .def_readonly("flatness_fd", &LiftingSummary::flatness_fd)
      .def_readonly("decay_constant", &LiftingSummary::decay_constant)
      .def_readonly("decay_exponent", &LiftingSummary::decay_exponent)
      .def_readonly("diffeo_min", &LiftingSummary::diffeo_min)
      .def_readonly("ok", &LiftingSummary::ok);
  py::class_<SweepReport>(m, "SweepReport")
      .def_readonly("rows", &SweepReport::rows)
      .def_readonly("lifting", &SweepReport::lifting)
      .def_readonly("all_consistent", &SweepReport::all_consistent);
  m.def("run_sweep", &run_sweep, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("write_reports", &write_reports, py::arg("report"), py::arg("config"));

  m.attr("__version__") = "0.1.0";
}
