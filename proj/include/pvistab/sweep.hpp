#pragma once

#include <string>
#include <vector>

#include "pvistab/energy.hpp"
#include "pvistab/lifting.hpp"
#include "pvistab/symmetrizer.hpp"

namespace pvi {

// One grid axis over a BasicState field. count = 1 pins the value at lo.
struct AxisSpec {
  std::string name;  // rho | sound_speed | v | H | Hc | eps
  double lo = 0.0;
  double hi = 0.0;
  int count = 1;
};

enum class SweepTask { Hypotheses, Roots, Symmetrizers, Energy, Lifting };
const char* to_string(SweepTask t);
SweepTask parse_task(const std::string& name);  // throws std::invalid_argument

struct SweepConfig {
  BasicState base;
  std::vector<AxisSpec> axes;      // empty = single-point grid
  std::vector<SweepTask> tasks;
  int hemisphere_n = 32;           // certification cover resolution
  double tol = 1e-6;               // classification / root-scan tolerance
  int jobs = 1;
  std::string out_dir = "out";
};

// JSON keys: base {rho, sound_speed, v, H, Hc, eps}, axes [{name, lo, hi,
// count}], tasks [names], hemisphere_n, tol, jobs, out. Missing keys keep the
// defaults above. Malformed input throws std::invalid_argument.
SweepConfig parse_config(const std::string& json_text);
void validate(const SweepConfig& cfg);       // nonempty tasks, sane counts
std::string config_echo(const SweepConfig& cfg);  // canonical JSON round-trip

// ---- report rows -----------------------------------------------------------

struct DiagramRow {
  int index = 0;                  // lexicographic grid index
  std::vector<double> coords;     // axis values, axis order
  BasicState state;
  bool hypotheses_pass = false;
  std::string stability = "unknown";  // class name, or "excluded"
  int root_count = -1;            // -1 = task not run on this row
  double max_root_residual = 0.0;
  double min_abs_det_boundary = 0.0;  // off roots, gamma = 0 circle
  double min_abs_det_interior = 0.0;  // gamma >= 0.01 grid
  bool roots_consistent = true;
  int certified_bundles = -1;
  int failed_bundles = -1;
  bool cover_complete = true;
  double energy_slope = 0.0;      // gamma-sweep log-log slope, when measured
  double kreiss_C = 0.0;
  bool energy_ok = true;
  bool consistent = true;         // row verdict entering the exit code
  std::string note;               // first recorded failure, empty when clean
};

struct RootRow {
  int row = 0;
  double V = 0.0;
  FrequencyPoint pt;
  double residual = 0.0;
  double dist_critical = 0.0;
};

struct EnergyRow {
  int row = 0;
  FrequencyPoint pt;
  double amplification = 0.0;
  double interior_norm = 0.0;
  double front_abs = 0.0;
};

struct CertSummary {
  int row = 0;
  std::vector<SymmetrizerBundle> bundles;
  std::vector<CertificationResult> results;
  int grid_points = 0;
  int covered = 0;
  bool all_certified = false;
};

// State-independent lifting exhibit, run once per sweep when requested.
struct LiftingSummary {
  bool ran = false;
  double trace_error = 0.0;
  double flatness_fd = 0.0;
  double decay_constant = 0.0;
  double decay_exponent = 0.0;
  double diffeo_min = 0.0;
  bool ok = false;
};

struct SweepReport {
  std::vector<DiagramRow> rows;
  std::vector<RootRow> roots;
  std::vector<EnergyRow> energy;
  std::vector<CertSummary> certifications;
  LiftingSummary lifting;
  bool all_consistent = false;
};

// Work-pool evaluation of every grid point; rows land in lexicographic order
// regardless of scheduling. Per-row failures are recorded in the row, never
// thrown.
SweepReport run_sweep(const SweepConfig& cfg);

// Emits diagram.csv, roots.csv, energy.csv, certifications.json, summary.json
// into cfg.out_dir (created if absent). Floats use %.17g; reruns of the same
// config are byte-identical. Returns 0 when all rows are consistent, else 1.
// Throws std::runtime_error on I/O failure.
int write_reports(const SweepReport& report, const SweepConfig& cfg);

}  // namespace pvi
