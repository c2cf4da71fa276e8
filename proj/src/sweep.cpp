#include "pvistab/sweep.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <thread>

namespace pvi {

namespace {

using nlohmann::json;

const char* const kAxisNames[] = {"rho", "sound_speed", "v", "H", "Hc", "eps"};

bool valid_axis(const std::string& name) {
  return std::find(std::begin(kAxisNames), std::end(kAxisNames), name) !=
         std::end(kAxisNames);
}

void apply_axis(BasicState& s, const std::string& name, double value) {
  if (name == "rho")
    s.rho = value;
  else if (name == "sound_speed")
    s.sound_speed = value;
  else if (name == "v")
    s.v = value;
  else if (name == "H")
    s.H = value;
  else if (name == "Hc")
    s.Hc = value;
  else if (name == "eps")
    s.eps = value;
  else
    throw std::invalid_argument("unknown axis: " + name);
}

std::string fd(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string sanitize(std::string text) {
  for (char& c : text)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return text;
}

struct RowResult {
  DiagramRow row;
  std::vector<RootRow> roots;
  std::vector<EnergyRow> energy;
  std::optional<CertSummary> cert;
};

bool wants(const SweepConfig& cfg, SweepTask t) {
  return std::find(cfg.tasks.begin(), cfg.tasks.end(), t) != cfg.tasks.end();
}

RowResult compute_row(const SweepConfig& cfg, int index) {
  RowResult rr;
  DiagramRow& row = rr.row;
  row.index = index;

  auto fail = [&](const std::string& msg) {
    if (row.note.empty()) row.note = msg;
    row.consistent = false;
  };

  BasicState st = cfg.base;
  {
    std::vector<int> idx(cfg.axes.size(), 0);
    int rem = index;
    for (int a = static_cast<int>(cfg.axes.size()) - 1; a >= 0; --a) {
      idx[a] = rem % cfg.axes[a].count;
      rem /= cfg.axes[a].count;
    }
    for (size_t a = 0; a < cfg.axes.size(); ++a) {
      const AxisSpec& ax = cfg.axes[a];
      const double val =
          ax.count == 1
              ? ax.lo
              : ax.lo + (ax.hi - ax.lo) * idx[a] / (ax.count - 1.0);
      row.coords.push_back(val);
      apply_axis(st, ax.name, val);
    }
  }
  row.state = st;

  try {
    validate(st);
  } catch (const std::exception& e) {
    row.stability = "invalid";
    fail(e.what());
    return rr;
  }

  const HypothesisReport hyp = check_hypotheses(st);
  row.hypotheses_pass = hyp.all_pass;
  row.stability = hyp.all_pass ? to_string(stability_class(st)) : "excluded";

  std::optional<RootScanReport> scan;
  if ((wants(cfg, SweepTask::Roots) || wants(cfg, SweepTask::Energy)) &&
      hyp.all_pass) {
    try {
      scan = scan_boundary_roots(st, 10000, cfg.tol);
    } catch (const std::exception& e) {
      if (wants(cfg, SweepTask::Roots)) {
        row.roots_consistent = false;
        fail(std::string("root scan: ") + e.what());
      }
    }
  }

  if (wants(cfg, SweepTask::Roots) && scan) {
    row.root_count = static_cast<int>(scan->roots.size());
    for (const BoundaryRoot& r : scan->roots) {
      rr.roots.push_back({index, r.V, r.pt, r.residual, r.dist_critical});
      row.max_root_residual = std::max(row.max_root_residual, r.residual);
    }
    row.min_abs_det_boundary = scan->min_abs_det_off_roots;
    try {
      row.min_abs_det_interior = min_interior_abs_det(st, 10000, 0.01);
    } catch (const std::exception& e) {
      fail(std::string("interior scan: ") + e.what());
    }
    row.roots_consistent = scan->count_consistent &&
                           scan->quartic_consistent &&
                           row.min_abs_det_interior > 0.0;
    if (!row.roots_consistent) fail("root scan inconsistent");
  }

  if (wants(cfg, SweepTask::Symmetrizers)) {
    try {
      const CoverReport cov =
          cover_hemisphere(st, cfg.hemisphere_n, 150);
      int certified = 0;
      for (const CertificationResult& r : cov.results)
        if (r.certified) ++certified;
      row.certified_bundles = certified;
      row.failed_bundles = static_cast<int>(cov.results.size()) - certified;
      row.cover_complete =
          cov.all_certified && cov.covered == cov.grid_points;
      rr.cert = CertSummary{index,       cov.bundles,  cov.results,
                            cov.grid_points, cov.covered, cov.all_certified};
      if (!row.cover_complete) fail("certified cover incomplete");
    } catch (const std::exception& e) {
      row.cover_complete = false;
      fail(std::string("certification: ") + e.what());
    }
  }

  if (wants(cfg, SweepTask::Energy) && hyp.all_pass) {
    try {
      Eigen::Vector3cd g;
      g << cplx(1.0, 0.2), cplx(0.0, 0.5), cplx(-0.2, 0.1);
      const std::vector<double> gammas{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};

      FrequencyPoint base_pt;
      const bool at_root = scan && !scan->roots.empty();
      if (at_root) {
        base_pt = scan->roots.front().pt;
      } else {
        bool found = false;
        for (double t = 0.15; t < 3.1 && !found; t += 0.1) {
          const FrequencyPoint cand{0.0, std::cos(t), std::sin(t)};
          if (classify_point(st, cand, cfg.tol).cls ==
                  PointClass::BoundaryLopOK &&
              std::abs(lopatinskii_det(st, cand)) > 0.01) {
            base_pt = cand;
            found = true;
          }
        }
        if (!found)
          throw std::runtime_error("no boundary probe point available");
      }

      const GammaSweepResult sw = gamma_sweep(st, base_pt, gammas, g);
      row.energy_slope = sw.slope;
      for (const EnergyProbeResult& p : sw.probes)
        rr.energy.push_back(
            {index, p.pt, p.amplification, p.interior_norm, p.front_abs});
      const double target = at_root ? -1.0 : 0.0;
      if (std::abs(sw.slope - target) > 0.1) {
        row.energy_ok = false;
        fail("gamma sweep slope out of band");
      }

      const KreissCheckResult kc =
          kreiss_quadrature_check(st, normalize_to_sigma(0.3, 0.5, 0.8), g);
      row.kreiss_C = kc.fitted_C;
      if (!kc.holds) {
        row.energy_ok = false;
        fail("kreiss ratio unbounded");
      }
    } catch (const std::exception& e) {
      row.energy_ok = false;
      fail(std::string("energy: ") + e.what());
    }
  }

  return rr;
}

LiftingSummary run_lifting_exhibit() {
  LiftingSummary ls;
  ls.ran = true;

  FrontSample f;
  f.N = 256;
  f.L = 32.0;
  f.values.resize(f.N);
  for (int k = 0; k < f.N; ++k) {
    const double x = f.L * k / f.N - f.L / 2.0;
    f.values[k] = std::exp(-x * x / 2.0);
  }
  const double h2 = sobolev_norm(f, 2.0);
  for (cplx& v : f.values) v /= h2;

  const CutoffSpec cut = make_cutoff(4.0);
  const LiftedFront lf = lift(f, cut, {0.0, 0.01, 0.02});
  for (int k = 0; k < f.N; ++k)
    ls.trace_error =
        std::max(ls.trace_error, std::abs(lf.psi(0, k) - f.values[k]));
  ls.flatness_fd = verify_flatness(lf, 0.01);

  const DecayCheckResult dec = linf_decay_check(f, {4.0, 16.0, 64.0, 256.0});
  ls.decay_constant = dec.fitted_constant;
  ls.decay_exponent = dec.fitted_exponent;

  std::vector<double> grid{0.0};
  for (int i = 1; i <= 200; ++i) grid.push_back(16.0 * i / 200.0);
  const DiffeoReport rep = diffeo_check(lift(f, make_cutoff(16.0), grid));
  ls.diffeo_min = rep.min_value;

  ls.ok = ls.trace_error <= 1e-12 && ls.flatness_fd <= 1e-6 &&
          ls.decay_exponent <= -0.65 && cut.slope_bound_ok && rep.ok;
  return ls;
}

}  // namespace

const char* to_string(SweepTask t) {
  switch (t) {
    case SweepTask::Hypotheses: return "hypotheses";
    case SweepTask::Roots: return "roots";
    case SweepTask::Symmetrizers: return "symmetrizers";
    case SweepTask::Energy: return "energy";
    case SweepTask::Lifting: return "lifting";
  }
  return "?";
}

SweepTask parse_task(const std::string& name) {
  for (SweepTask t : {SweepTask::Hypotheses, SweepTask::Roots,
                      SweepTask::Symmetrizers, SweepTask::Energy,
                      SweepTask::Lifting})
    if (name == to_string(t)) return t;
  throw std::invalid_argument("unknown task: " + name);
}

SweepConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("config parse: ") + e.what());
  }
  SweepConfig cfg;
  cfg.tasks.clear();
  try {
    if (j.contains("base")) {
      const json& b = j.at("base");
      cfg.base.rho = b.value("rho", cfg.base.rho);
      cfg.base.sound_speed = b.value("sound_speed", cfg.base.sound_speed);
      cfg.base.v = b.value("v", cfg.base.v);
      cfg.base.H = b.value("H", cfg.base.H);
      cfg.base.Hc = b.value("Hc", cfg.base.Hc);
      cfg.base.eps = b.value("eps", cfg.base.eps);
    }
    if (j.contains("axes")) {
      for (const json& a : j.at("axes")) {
        AxisSpec ax;
        ax.name = a.at("name").get<std::string>();
        ax.lo = a.at("lo").get<double>();
        ax.hi = a.value("hi", ax.lo);
        ax.count = a.value("count", 1);
        cfg.axes.push_back(ax);
      }
    }
    if (j.contains("tasks"))
      for (const json& t : j.at("tasks"))
        cfg.tasks.push_back(parse_task(t.get<std::string>()));
    cfg.hemisphere_n = j.value("hemisphere_n", cfg.hemisphere_n);
    cfg.tol = j.value("tol", cfg.tol);
    cfg.jobs = j.value("jobs", cfg.jobs);
    cfg.out_dir = j.value("out", cfg.out_dir);
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return cfg;
}

void validate(const SweepConfig& cfg) {
  if (cfg.tasks.empty()) throw std::invalid_argument("no tasks requested");
  for (const AxisSpec& ax : cfg.axes) {
    if (!valid_axis(ax.name))
      throw std::invalid_argument("unknown axis: " + ax.name);
    if (ax.count < 1) throw std::invalid_argument("axis count must be >= 1");
  }
  if (cfg.hemisphere_n < 8)
    throw std::invalid_argument("hemisphere resolution must be >= 8");
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (cfg.jobs < 1) throw std::invalid_argument("jobs must be >= 1");
  if (cfg.out_dir.empty()) throw std::invalid_argument("empty output directory");
  validate(cfg.base);
}

std::string config_echo(const SweepConfig& cfg) {
  json j;
  j["base"] = {{"rho", cfg.base.rho},
               {"sound_speed", cfg.base.sound_speed},
               {"v", cfg.base.v},
               {"H", cfg.base.H},
               {"Hc", cfg.base.Hc},
               {"eps", cfg.base.eps}};
  j["axes"] = json::array();
  for (const AxisSpec& ax : cfg.axes)
    j["axes"].push_back({{"name", ax.name},
                         {"lo", ax.lo},
                         {"hi", ax.hi},
                         {"count", ax.count}});
  j["tasks"] = json::array();
  for (SweepTask t : cfg.tasks) j["tasks"].push_back(to_string(t));
  j["hemisphere_n"] = cfg.hemisphere_n;
  j["tol"] = cfg.tol;
  j["jobs"] = cfg.jobs;
  j["out"] = cfg.out_dir;
  return j.dump(2);
}

SweepReport run_sweep(const SweepConfig& cfg) {
  validate(cfg);

  int total = 1;
  for (const AxisSpec& ax : cfg.axes) total *= ax.count;

  std::vector<RowResult> results(total);
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= total) break;
      results[i] = compute_row(cfg, i);
    }
  };
  const int jobs = std::min(cfg.jobs, total);
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  SweepReport report;
  report.rows.reserve(total);
  for (RowResult& rr : results) {
    report.rows.push_back(std::move(rr.row));
    report.roots.insert(report.roots.end(), rr.roots.begin(), rr.roots.end());
    report.energy.insert(report.energy.end(), rr.energy.begin(),
                         rr.energy.end());
    if (rr.cert) report.certifications.push_back(std::move(*rr.cert));
  }

  if (wants(cfg, SweepTask::Lifting)) report.lifting = run_lifting_exhibit();

  report.all_consistent =
      std::all_of(report.rows.begin(), report.rows.end(),
                  [](const DiagramRow& r) { return r.consistent; }) &&
      (!report.lifting.ran || report.lifting.ok);
  return report;
}

int write_reports(const SweepReport& report, const SweepConfig& cfg) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw std::runtime_error("cannot create " + cfg.out_dir);

  auto open = [&](const char* name) {
    std::ofstream f(fs::path(cfg.out_dir) / name,
                    std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error(std::string("cannot write ") + name);
    return f;
  };

  {
    std::ofstream f = open("diagram.csv");
    f << "index";
    for (const AxisSpec& ax : cfg.axes) f << ",axis:" << ax.name;
    f << ",rho,sound_speed,v,H,Hc,eps,hypotheses_pass,stability,root_count,"
         "max_root_residual,min_abs_det_boundary,min_abs_det_interior,"
         "roots_consistent,certified_bundles,failed_bundles,cover_complete,"
         "energy_slope,kreiss_C,energy_ok,consistent,note\n";
    for (const DiagramRow& r : report.rows) {
      f << r.index;
      for (double c : r.coords) f << ',' << fd(c);
      f << ',' << fd(r.state.rho) << ',' << fd(r.state.sound_speed) << ','
        << fd(r.state.v) << ',' << fd(r.state.H) << ',' << fd(r.state.Hc)
        << ',' << fd(r.state.eps) << ',' << (r.hypotheses_pass ? 1 : 0) << ','
        << r.stability << ',' << r.root_count << ','
        << fd(r.max_root_residual) << ',' << fd(r.min_abs_det_boundary) << ','
        << fd(r.min_abs_det_interior) << ',' << (r.roots_consistent ? 1 : 0)
        << ',' << r.certified_bundles << ',' << r.failed_bundles << ','
        << (r.cover_complete ? 1 : 0) << ',' << fd(r.energy_slope) << ','
        << fd(r.kreiss_C) << ',' << (r.energy_ok ? 1 : 0) << ','
        << (r.consistent ? 1 : 0) << ',' << sanitize(r.note) << '\n';
    }
  }

  {
    std::ofstream f = open("roots.csv");
    f << "row,V,gamma,delta,eta,residual,dist_critical\n";
    for (const RootRow& r : report.roots)
      f << r.row << ',' << fd(r.V) << ',' << fd(r.pt.gamma) << ','
        << fd(r.pt.delta) << ',' << fd(r.pt.eta) << ',' << fd(r.residual)
        << ',' << fd(r.dist_critical) << '\n';
  }

  {
    std::ofstream f = open("energy.csv");
    f << "row,gamma,delta,eta,amplification,interior_norm,front_abs\n";
    for (const EnergyRow& r : report.energy)
      f << r.row << ',' << fd(r.pt.gamma) << ',' << fd(r.pt.delta) << ','
        << fd(r.pt.eta) << ',' << fd(r.amplification) << ','
        << fd(r.interior_norm) << ',' << fd(r.front_abs) << '\n';
  }

  {
    json certs;
    certs["rows"] = json::array();
    for (const CertSummary& cs : report.certifications) {
      json row;
      row["row"] = cs.row;
      row["grid_points"] = cs.grid_points;
      row["covered"] = cs.covered;
      row["all_certified"] = cs.all_certified;
      row["bundles"] = json::array();
      for (size_t i = 0; i < cs.bundles.size(); ++i) {
        const SymmetrizerBundle& b = cs.bundles[i];
        const CertificationResult& r = cs.results[i];
        row["bundles"].push_back(
            {{"case", to_string(b.kind)},
             {"center", {b.center.gamma, b.center.delta, b.center.eta}},
             {"radius", b.radius},
             {"kappa", b.constants.kappa},
             {"C", b.constants.C},
             {"Kprime", b.constants.Kprime},
             {"min_eigs",
              {{"dissipativity", r.min_eig_dissipativity},
               {"coercivity", r.min_eig_coercivity}}},
             {"certified", r.certified}});
      }
      certs["rows"].push_back(std::move(row));
    }
    open("certifications.json") << certs.dump(2) << '\n';
  }

  {
    json summary;
    summary["version"] = "0.1.0";
    summary["config"] = json::parse(config_echo(cfg));
    summary["rows"] = report.rows.size();
    int consistent = 0;
    for (const DiagramRow& r : report.rows)
      if (r.consistent) ++consistent;
    summary["consistent_rows"] = consistent;
    summary["all_consistent"] = report.all_consistent;
    summary["root_rows"] = report.roots.size();
    summary["energy_rows"] = report.energy.size();
    if (report.lifting.ran)
      summary["lifting"] = {{"trace_error", report.lifting.trace_error},
                            {"flatness_fd", report.lifting.flatness_fd},
                            {"decay_constant", report.lifting.decay_constant},
                            {"decay_exponent", report.lifting.decay_exponent},
                            {"diffeo_min", report.lifting.diffeo_min},
                            {"ok", report.lifting.ok}};
    summary["exit_code"] = report.all_consistent ? 0 : 1;
    open("summary.json") << summary.dump(2) << '\n';
  }

  return report.all_consistent ? 0 : 1;
}

}  // namespace pvi
