#pragma once

// Grid runs over gap and particle size, CSV/plot output.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mnpq/config.hpp"
#include "mnpq/metrics.hpp"

namespace mnpq {

/// Everything computed at one spatial point for one analysis variant.
struct PointResult {
  double radius = 0.0;
  double gap = 0.0;
  double gamma_a = 0.0;
  std::vector<double> times;         // s
  std::vector<double> concurrence;   // per time
  std::vector<double> qfi;           // per time, empty unless requested
  double stationary_concurrence = 0.0;
  double stationary_qfi = 0.0;
  EffectiveParams effective;
  double weak_excitation_ratio = 0.0;
  int suppressed_modes = 0;
  double steady_residual = 0.0;
  Engine transient_engine = Engine::superoperator;  // engine actually used
};

struct PointRequest {
  bool transient = true;
  bool qfi = false;
};

/// Effective model, steady state and (optionally) the time trace at one point.
PointResult run_point(const RunConfig& cfg, int multipoles, double radius, double gap,
                      const PointRequest& req);

struct Axis {
  std::string name;  // CSV column name, SI-suffixed
  std::vector<double> values;
};

struct SweepSeries {
  std::string analysis;  // "dipole" or "multipole"
  int multipoles = 1;
  std::vector<PointResult> points;  // ordered like the spatial axis
};

struct SweepMetadata {
  std::string kind;
  std::string config_hash;
  std::string version;
  std::string config_json;
};

struct SweepGrid {
  Axis spatial;
  std::size_t time_points = 0;
  bool has_qfi = false;
  std::vector<SweepSeries> series;
  SweepMetadata metadata;

  std::size_t cell_count() const;
  const SweepSeries* find(std::string_view analysis) const;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

SweepGrid run_distance_sweep(const RunConfig& cfg, const ProgressFn& progress = {});
SweepGrid run_size_sweep(const RunConfig& cfg, const ProgressFn& progress = {});
SweepGrid run_qfi_map(const RunConfig& cfg, const ProgressFn& progress = {});

/// Run `count` independent jobs on `workers` threads; job(i) must write only
/// its own slot. The first exception (lowest index) is rethrown.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& job,
                  const ProgressFn& progress = {});

/// Writes <path> (cells), <path minus .csv>_effective.csv, and <path>.meta.json.
void emit_csv(const SweepGrid& grid, const std::string& path);

/// Gnuplot script rendering the heat map and stationary curves of a CSV.
void emit_plot_script(const SweepGrid& grid, const std::string& csv_path,
                      const std::string& script_path);

/// printf("%.17g") formatting used for every float in the outputs.
std::string format_double(double v);

}  // namespace mnpq
