#include "mnpq/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "mnpq/units.hpp"

namespace mnpq {
namespace {

struct Variant {
  std::string name;
  int multipoles;
};

std::vector<Variant> variants(const RunConfig& cfg) {
  std::vector<Variant> v;
  if (cfg.analysis != Analysis::multipole) v.push_back({"dipole", 1});
  if (cfg.analysis != Analysis::dipole) v.push_back({"multipole", cfg.multipoles()});
  return v;
}

SweepGrid run_grid(const RunConfig& cfg, const std::string& kind, Axis axis,
                   const std::function<std::pair<double, double>(double)>& geometry_of,
                   bool with_qfi, const ProgressFn& progress) {
  SweepGrid grid;
  grid.spatial = std::move(axis);
  grid.time_points = cfg.time_points;
  grid.has_qfi = with_qfi;
  const auto conf = resolved_config_json(cfg);
  grid.metadata = {kind, fnv1a_hex(conf), MNPQ_VERSION, conf};

  const auto vs = variants(cfg);
  const std::size_t n_points = grid.spatial.values.size();
  for (const auto& v : vs) {
    SweepSeries s;
    s.analysis = v.name;
    s.multipoles = v.multipoles;
    s.points.resize(n_points);
    grid.series.push_back(std::move(s));
  }

  PointRequest req;
  req.transient = true;
  req.qfi = with_qfi;
  parallel_for(
      vs.size() * n_points, effective_workers(cfg),
      [&](std::size_t job) {
        const std::size_t vi = job / n_points, pi = job % n_points;
        const auto [radius, gap] = geometry_of(grid.spatial.values[pi]);
        const auto where = [&] {
          char buf[96];
          std::snprintf(buf, sizeof buf, "%s, N = %d, r = %g nm, s = %g nm: ", vs[vi].name.c_str(),
                        vs[vi].multipoles, radius * 1e9, gap * 1e9);
          return std::string(buf);
        };
        try {
          grid.series[vi].points[pi] = run_point(cfg, vs[vi].multipoles, radius, gap, req);
        } catch (const DomainError& e) {
          throw DomainError(where() + e.what());
        } catch (const NumericalError& e) {
          throw NumericalError(where() + e.what());
        }
      },
      progress);
  return grid;
}

std::string strip_csv(const std::string& path) {
  const std::string ext = ".csv";
  if (path.size() > ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0) {
    return path.substr(0, path.size() - ext.size());
  }
  return path;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  return out;
}

void finish_output(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error("write to '" + path + "' failed");
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

PointResult run_point(const RunConfig& cfg, int multipoles, double radius, double gap,
                      const PointRequest& req) {
  const auto sys = assemble(cfg.setup_for(multipoles, radius, gap));
  PointResult p;
  p.radius = radius;
  p.gap = gap;
  p.effective = sys.effective;
  p.gamma_a = sys.dicke.gamma_a;
  p.weak_excitation_ratio = sys.weak_excitation_ratio();
  p.suppressed_modes = sys.suppressed_modes();

  const auto ss = steady_state(sys.effective);
  p.steady_residual = ss.residual;
  p.stationary_concurrence = concurrence(ss.rho);
  const auto gen = relative_phase_generator();
  if (req.qfi) p.stationary_qfi = qfi(ss.rho, gen);

  if (req.transient) {
    EvolutionOptions eo;
    eo.engine = cfg.engine;
    eo.ode = cfg.ode;
    const auto times = cfg.time_samples(p.gamma_a);
    const auto ev = evolve(sys.effective, cfg.initial_density(), times, eo);
    p.transient_engine = ev.engine;
    p.times = ev.times;
    p.concurrence.reserve(ev.states.size());
    for (const auto& rho : ev.states) {
      p.concurrence.push_back(concurrence(rho));
      if (req.qfi) p.qfi.push_back(qfi(rho, gen));
    }
  }
  return p;
}

std::size_t SweepGrid::cell_count() const {
  return series.size() * spatial.values.size() * (time_points + 1);
}

const SweepSeries* SweepGrid::find(std::string_view analysis) const {
  for (const auto& s : series)
    if (s.analysis == analysis) return &s;
  return nullptr;
}

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& job,
                  const ProgressFn& progress) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
      const std::size_t d = done.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard<std::mutex> lock(progress_mutex);
        progress(d, count);
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned k = 0; k < n; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

SweepGrid run_distance_sweep(const RunConfig& cfg, const ProgressFn& progress) {
  const double radius = cfg.setup.geometry.radius;
  return run_grid(cfg, "distance", {"gap_m", cfg.gap_range.values()},
                  [radius](double s) { return std::make_pair(radius, s); }, false, progress);
}

SweepGrid run_size_sweep(const RunConfig& cfg, const ProgressFn& progress) {
  return run_grid(cfg, "size", {"radius_m", cfg.radius_range.values()},
                  [](double r) { return std::make_pair(r, r); }, false, progress);
}

SweepGrid run_qfi_map(const RunConfig& cfg, const ProgressFn& progress) {
  return run_grid(cfg, "qfi", {"radius_m", cfg.radius_range.values()},
                  [](double r) { return std::make_pair(r, r); }, true, progress);
}

void emit_csv(const SweepGrid& grid, const std::string& path) {
  const auto f = format_double;
  {
    auto out = open_output(path);
    out << "analysis,multipoles," << grid.spatial.name << ",time_s,time_tau,concurrence";
    if (grid.has_qfi) out << ",qfi,above_sql";
    out << ",stationary\n";
    const double inf = std::numeric_limits<double>::infinity();
    for (const auto& s : grid.series) {
      for (std::size_t pi = 0; pi < s.points.size(); ++pi) {
        const auto& p = s.points[pi];
        const std::string lead = s.analysis + "," + std::to_string(s.multipoles) + "," +
                                 f(grid.spatial.values[pi]) + ",";
        for (std::size_t k = 0; k < p.times.size(); ++k) {
          out << lead << f(p.times[k]) << "," << f(p.times[k] * p.gamma_a) << "," << f(p.concurrence[k]);
          if (grid.has_qfi) out << "," << f(p.qfi[k]) << "," << (p.qfi[k] > 2.0 ? 1 : 0);
          out << ",0\n";
        }
        out << lead << f(inf) << "," << f(inf) << "," << f(p.stationary_concurrence);
        if (grid.has_qfi) out << "," << f(p.stationary_qfi) << "," << (p.stationary_qfi > 2.0 ? 1 : 0);
        out << ",1\n";
      }
    }
    finish_output(out, path);
  }

  const std::string base = strip_csv(path);
  {
    const std::string epath = base + "_effective.csv";
    auto out = open_output(epath);
    out << "analysis,multipoles," << grid.spatial.name
        << ",rabi_re_rad_s,rabi_im_rad_s,exchange_rad_s,cross_decay_rad_s,detuning1_rad_s,"
           "detuning2_rad_s,decay1_rad_s,decay2_rad_s,gamma_a_rad_s,weak_excitation_ratio,"
           "suppressed_modes,steady_residual,transient_engine,stationary_concurrence";
    if (grid.has_qfi) out << ",stationary_qfi";
    out << "\n";
    for (const auto& s : grid.series) {
      for (std::size_t pi = 0; pi < s.points.size(); ++pi) {
        const auto& p = s.points[pi];
        const auto& e = p.effective;
        out << s.analysis << "," << s.multipoles << "," << f(grid.spatial.values[pi]) << ","
            << f(e.rabi[0].real()) << "," << f(e.rabi[0].imag()) << "," << f(e.exchange) << ","
            << f(e.cross_decay) << "," << f(e.detuning[0]) << "," << f(e.detuning[1]) << ","
            << f(e.decay[0]) << "," << f(e.decay[1]) << "," << f(p.gamma_a) << ","
            << f(p.weak_excitation_ratio) << "," << p.suppressed_modes << ","
            << f(p.steady_residual) << "," << to_string(p.transient_engine) << ","
            << f(p.stationary_concurrence);
        if (grid.has_qfi) out << "," << f(p.stationary_qfi);
        out << "\n";
      }
    }
    finish_output(out, epath);
  }

  {
    using nlohmann::json;
    json meta;
    meta["kind"] = grid.metadata.kind;
    meta["tool_version"] = grid.metadata.version;
    meta["config_hash"] = grid.metadata.config_hash;
    meta["config"] = grid.metadata.config_json.empty() ? json() : json::parse(grid.metadata.config_json);
    meta["axes"] = json::array({json{{"name", grid.spatial.name}, {"unit", "m"}, {"points", grid.spatial.values.size()}},
                                json{{"name", "time_s"}, {"unit", "s"}, {"points", grid.time_points}}});
    json series = json::array();
    for (const auto& s : grid.series) series.push_back({{"analysis", s.analysis}, {"multipoles", s.multipoles}});
    meta["series"] = series;
    meta["cells"] = grid.cell_count();
    const std::string mpath = path + ".meta.json";
    auto out = open_output(mpath);
    out << meta.dump(2) << "\n";
    finish_output(out, mpath);
  }
}

void emit_plot_script(const SweepGrid& grid, const std::string& csv_path,
                      const std::string& script_path) {
  const bool qfi = grid.has_qfi;
  const std::string value_col = qfi ? "$7" : "$6";
  const std::string stat_col = qfi ? "$9" : "$7";
  const std::string label = grid.spatial.name == "gap_m" ? "s (nm)" : "r = s (nm)";
  const std::string base = strip_csv(csv_path);
  auto out = open_output(script_path);
  out << "# gnuplot " << script_path << "\n"
      << "set datafile separator ','\n"
      << "set terminal svg size 900,600 dynamic\n"
      << "set xlabel '" << label << "'\n"
      << "set ylabel 't {/Symbol g}_a'\n"
      << "set logscale y\n"
      << "set cblabel '" << (qfi ? "F_Q" : "C") << "'\n"
      << "set palette rgbformulae 33,13,10\n";
  if (qfi) out << "set cbrange [0:4]\n";
  else out << "set cbrange [0:1]\n";
  for (const auto& s : grid.series) {
    out << "set output '" << base << "_" << s.analysis << ".svg'\n"
        << "set title '" << s.analysis << " (N = " << s.multipoles << ")'\n"
        << "plot '" << csv_path << "' every ::1 using "
        << "((strcol(1) eq '" << s.analysis << "' && " << stat_col << " == 0) ? $3*1e9 : 1/0):5:"
        << value_col << " with points pointtype 5 pointsize 0.6 palette notitle\n";
  }
  out << "unset logscale y\n"
      << "unset cbrange\n"
      << "set output '" << base << "_stationary.svg'\n"
      << "set title 'stationary'\n"
      << "set ylabel '" << (qfi ? "F_Q" : "C") << "(t -> inf)'\n"
      << "plot ";
  for (std::size_t k = 0; k < grid.series.size(); ++k) {
    const auto& s = grid.series[k];
    out << (k ? ", \\\n     " : "") << "'" << csv_path << "' every ::1 using "
        << "((strcol(1) eq '" << s.analysis << "' && " << stat_col << " == 1) ? $3*1e9 : 1/0):"
        << value_col << " with linespoints title '" << s.analysis << "'";
  }
  if (qfi) out << ", \\\n     2 with lines dashtype 2 title 'SQL'";
  out << "\n";
  finish_output(out, script_path);
}

}  // namespace mnpq
