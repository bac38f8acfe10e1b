#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "mnpq/config.hpp"
#include "mnpq/errors.hpp"
#include "mnpq/sweep.hpp"

using namespace mnpq;
namespace fs = std::filesystem;

namespace {

const std::string small =
    "[material]\npreset = silver-drude\n"
    "[geometry]\ngap_start = 10 nm\ngap_stop = 40 nm\ngap_points = 3\n"
    "radius_start = 20 nm\nradius_stop = 40 nm\nradius_points = 3\n"
    "[run]\nmultipoles = 3\ntime_points = 12\n";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string l; std::getline(ss, l);) out.push_back(l);
  return out;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "mnpq_sweep_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_SUITE("sweep") {

TEST_CASE("output is identical for any worker count") {
  auto cfg = parse_config(small);
  std::string first, first_eff;
  for (unsigned w : {1u, 2u, 5u}) {
    cfg.workers = w;
    const auto path = scratch("det_" + std::to_string(w) + ".csv");
    emit_csv(run_distance_sweep(cfg), path.string());
    const auto text = slurp(path);
    const auto eff = slurp(scratch("det_" + std::to_string(w) + "_effective.csv"));
    if (first.empty()) {
      first = text;
      first_eff = eff;
    }
    CHECK(text == first);
    CHECK(eff == first_eff);
  }
  // rerun is byte-identical as well
  cfg.workers = 1;
  const auto again = scratch("det_again.csv");
  emit_csv(run_distance_sweep(cfg), again.string());
  CHECK(slurp(again) == first);
}

TEST_CASE("two by two grid in axis-major order") {
  const auto cfg = parse_config(small, {{"geometry.gap_points", "2"}, {"run.time_points", "3"}});
  const auto grid = run_distance_sweep(cfg);
  REQUIRE(grid.series.size() == 2);
  CHECK(grid.cell_count() == 2 * 2 * 4);
  const auto path = scratch("grid.csv");
  emit_csv(grid, path.string());
  const auto rows = lines(slurp(path));
  REQUIRE(rows.size() == 1 + grid.cell_count());
  CHECK(rows[0] == "analysis,multipoles,gap_m,time_s,time_tau,concurrence,stationary");

  std::vector<std::string> keys;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    std::size_t cut = 0;
    for (int field = 0; field < 3; ++field) cut = rows[k].find(',', cut + 1);
    keys.push_back(rows[k].substr(0, cut));
  }
  const std::vector<std::string> expected{"dipole,1,1e-08", "dipole,1,4.0000000000000001e-08",
                                          "multipole,3,1e-08", "multipole,3,4.0000000000000001e-08"};
  for (std::size_t cell = 0; cell < 4; ++cell)
    for (std::size_t t = 0; t < 4; ++t) CHECK(keys[cell * 4 + t] == expected[cell]);
  // the last row of each cell is the stationary value
  for (std::size_t cell = 0; cell < 4; ++cell) {
    CHECK(rows[1 + cell * 4 + 3].back() == '1');
    CHECK(rows[1 + cell * 4 + 3].find(",inf,inf,") != std::string::npos);
  }

  const auto eff = lines(slurp(scratch("grid_effective.csv")));
  CHECK(eff.size() == 5);
  CHECK(fs::exists(scratch("grid.csv.meta.json")));
}

TEST_CASE("empty grid gives a header-only file") {
  SweepGrid grid;
  grid.spatial = {"gap_m", {}};
  const auto path = scratch("empty.csv");
  emit_csv(grid, path.string());
  const auto rows = lines(slurp(path));
  CHECK(rows.size() == 1);
  CHECK(rows[0].rfind("analysis,", 0) == 0);
}

TEST_CASE("dipole analysis equals a multipole run forced to N = 1") {
  const auto cfg = parse_config(small, {{"run.multipoles", "1"}, {"run.analysis", "both"}});
  const auto grid = run_size_sweep(cfg);
  const auto* d = grid.find("dipole");
  const auto* m = grid.find("multipole");
  REQUIRE(d);
  REQUIRE(m);
  for (std::size_t k = 0; k < d->points.size(); ++k) {
    CHECK(d->points[k].stationary_concurrence == m->points[k].stationary_concurrence);
    CHECK(d->points[k].concurrence == m->points[k].concurrence);
  }
}

TEST_CASE("qfi map columns and the standard quantum limit flag") {
  const auto cfg = parse_config(small, {{"run.analysis", "dipole"}, {"run.time_points", "4"}});
  const auto grid = run_qfi_map(cfg);
  CHECK(grid.has_qfi);
  const auto path = scratch("qfi.csv");
  emit_csv(grid, path.string());
  const auto rows = lines(slurp(path));
  CHECK(rows[0] == "analysis,multipoles,radius_m,time_s,time_tau,concurrence,qfi,above_sql,stationary");
  for (const auto& p : grid.series[0].points) {
    CHECK(p.qfi.size() == 4);
    CHECK(p.stationary_qfi >= 0.0);
    CHECK(p.stationary_qfi <= 4.0 + 1e-9);
  }
  emit_plot_script(grid, path.string(), scratch("qfi.gp").string());
  const auto script = slurp(scratch("qfi.gp"));
  CHECK(script.find("qfi.csv") != std::string::npos);
}

TEST_CASE("stiff cells fall back to the propagator") {
  const auto cfg = parse_config(small);
  const auto p = run_point(cfg, 10, 5e-9, 5e-9, {});
  CHECK(p.transient_engine == Engine::propagator);
  CHECK(p.concurrence.size() == 12);
  CHECK(std::abs(p.concurrence.back() - p.stationary_concurrence) < 1e-6);

  const auto q = run_point(cfg, 10, 30e-9, 30e-9, {});
  CHECK(q.transient_engine == Engine::superoperator);
}

TEST_CASE("parallel_for covers every index once and reports the first failure") {
  std::vector<std::atomic<int>> hits(100);
  parallel_for(100, 4, [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) CHECK(h.load() == 1);

  try {
    parallel_for(50, 3, [](std::size_t i) {
      if (i == 17 || i == 33) throw std::runtime_error("job " + std::to_string(i));
    });
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "job 17");
  }
  parallel_for(0, 4, [](std::size_t) { FAIL("no jobs expected"); });
}

TEST_CASE("progress reporting does not change the output") {
  auto cfg = parse_config(small, {{"run.time_points", "3"}});
  cfg.workers = 2;
  std::size_t calls = 0;
  const auto a = run_distance_sweep(cfg, [&](std::size_t, std::size_t) { ++calls; });
  const auto b = run_distance_sweep(cfg);
  CHECK(calls == 6);
  emit_csv(a, scratch("prog_a.csv").string());
  emit_csv(b, scratch("prog_b.csv").string());
  CHECK(slurp(scratch("prog_a.csv")) == slurp(scratch("prog_b.csv")));
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
}

}  // TEST_SUITE
