#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "pvistab/sweep.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<pvi::SweepTask> split_tasks(const std::string& csv) {
  std::vector<pvi::SweepTask> tasks;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) tasks.push_back(pvi::parse_task(item));
  return tasks;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Stability sweeps for the plasma-vacuum interface toolkit: hypothesis "
      "checks, boundary-root scans, symmetrizer certification covers, energy "
      "probes and front-lifting exhibits over parameter grids."};

  std::string config_path, out_dir, tasks_csv;
  int hemisphere_n = 0, jobs = 0;
  double tol = 0.0;
  app.add_option("--config", config_path, "JSON sweep configuration");
  app.add_option("--out", out_dir, "output directory (overrides config)");
  app.add_option("--tasks", tasks_csv,
                 "comma-separated subset of "
                 "hypotheses,roots,symmetrizers,energy,lifting");
  app.add_option("--hemisphere-n", hemisphere_n,
                 "hemisphere grid resolution (>= 8)");
  app.add_option("--tol", tol, "classification/root tolerance");
  app.add_option("--jobs", jobs, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    pvi::SweepConfig cfg;
    if (!config_path.empty()) {
      cfg = pvi::parse_config(read_file(config_path));
    } else {
      cfg.tasks = {pvi::SweepTask::Hypotheses, pvi::SweepTask::Roots};
    }
    if (!tasks_csv.empty()) cfg.tasks = split_tasks(tasks_csv);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (hemisphere_n > 0) cfg.hemisphere_n = hemisphere_n;
    if (tol > 0.0) cfg.tol = tol;
    if (jobs > 0) cfg.jobs = jobs;
    pvi::validate(cfg);

    const pvi::SweepReport report = pvi::run_sweep(cfg);
    const int code = pvi::write_reports(report, cfg);
    std::fprintf(stderr, "%zu rows, %s; reports in %s\n", report.rows.size(),
                 report.all_consistent ? "all consistent"
                                       : "CONSISTENCY FAILURES",
                 cfg.out_dir.c_str());
    return code;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
