// mnpq: plasmon-mediated two-qubit entanglement, command-line front end.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mnpq/config.hpp"
#include "mnpq/metrics.hpp"
#include "mnpq/sweep.hpp"
#include "mnpq/units.hpp"
#include "mnpq/validation.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidationFailed = 1;
constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

const char* kDefaultConfig = "[material]\npreset = silver-drude\n";

struct Common {
  std::string config_path;
  std::vector<std::string> sets;
  std::string radius, gap, response, analysis, intensity, engine, output;
  int multipoles = 0;
  int workers = -1;
  bool quiet = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("-c,--config", c.config_path, "configuration file")->check(CLI::ExistingFile);
  app->add_option("--set", c.sets, "override, e.g. --set geometry.radius=20nm (repeatable)");
  app->add_option("--radius", c.radius, "MNP radius with unit, e.g. 30nm");
  app->add_option("--gap", c.gap, "surface gap with unit, e.g. 30nm");
  app->add_option("-N,--multipoles", c.multipoles, "multipole orders in the multipole analysis");
  app->add_option("--response", c.response, "local | nonlocal");
  app->add_option("--analysis", c.analysis, "dipole | multipole | both");
  app->add_option("--intensity", c.intensity, "drive intensity with unit, e.g. 10W/cm2");
  app->add_option("--engine", c.engine, "superoperator | explicit | propagator");
  app->add_option("-o,--output", c.output, "output path prefix");
  app->add_option("-j,--workers", c.workers, "worker threads (0 = all cores; MNPQ_WORKERS overrides)");
  app->add_flag("-q,--quiet", c.quiet, "no progress output");
}

mnpq::RunConfig load(const Common& c) {
  std::string text = kDefaultConfig;
  if (!c.config_path.empty()) {
    std::ifstream in(c.config_path);
    if (!in) throw mnpq::ConfigError("cannot read config file '" + c.config_path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  std::vector<mnpq::Override> ov;
  auto flag = [&](const std::string& key, const std::string& v) {
    if (!v.empty()) ov.emplace_back(key, v);
  };
  flag("geometry.radius", c.radius);
  flag("geometry.gap", c.gap);
  if (c.multipoles > 0) ov.emplace_back("run.multipoles", std::to_string(c.multipoles));
  flag("run.response", c.response);
  flag("run.analysis", c.analysis);
  flag("drive.intensity", c.intensity);
  flag("run.engine", c.engine);
  flag("run.output", c.output);
  if (c.workers >= 0) ov.emplace_back("run.workers", std::to_string(c.workers));
  for (const auto& s : c.sets) ov.push_back(mnpq::parse_override(s));
  return mnpq::parse_config(text, ov);
}

mnpq::ProgressFn progress_printer(bool quiet, const std::string& label) {
  if (quiet) return {};
  return [label](std::size_t done, std::size_t total) {
    std::fprintf(stderr, "\r%s: %zu/%zu", label.c_str(), done, total);
    if (done == total) std::fprintf(stderr, "\n");
  };
}

int cmd_params(const Common& c, bool as_json) {
  using nlohmann::json;
  const auto cfg = load(c);
  const auto sys = mnpq::assemble(cfg.setup);
  const auto& e = sys.effective;
  const auto& d = sys.dicke;
  if (as_json) {
    json modes = json::array();
    for (const auto& m : sys.modes) {
      modes.push_back({{"l", m.l},
                       {"omega_rad_s", m.omega},
                       {"gamma_nr_rad_s", m.gamma_nr},
                       {"gamma_r_rad_s", m.gamma_r},
                       {"gamma_rad_s", m.gamma},
                       {"coupling_rad_s", m.coupling},
                       {"eta_rad_s", m.eta},
                       {"delta", {m.nonlocal_correction.real(), m.nonlocal_correction.imag()}},
                       {"suppressed", m.suppressed}});
    }
    json j{{"config_hash", mnpq::fnv1a_hex(mnpq::resolved_config_json(cfg))},
           {"omega_pl_rad_s", sys.omega_pl},
           {"lambda_0_m", mnpq::units::wavelength_of(sys.omega_pl)},
           {"drive_frequency_rad_s", sys.drive_frequency},
           {"chi_Cm", sys.dipole.chi},
           {"chi_local_Cm", sys.dipole.chi_local},
           {"rabi_mnp_rad_s", sys.rabi_mnp},
           {"radiative_rate_rad_s", sys.radiative_rate},
           {"weak_excitation_ratio", sys.weak_excitation_ratio()},
           {"modes", modes},
           {"effective",
            {{"rabi_rad_s", {e.rabi[0].real(), e.rabi[0].imag()}},
             {"exchange_rad_s", e.exchange},
             {"cross_decay_rad_s", e.cross_decay},
             {"detuning_rad_s", {e.detuning[0], e.detuning[1]}},
             {"decay_rad_s", {e.decay[0], e.decay[1]}}}},
           {"dicke",
            {{"gamma_s", d.gamma_s}, {"gamma_a", d.gamma_a}, {"delta_s", d.delta_s},
             {"delta_a", d.delta_a}, {"delta_minus", d.delta_minus}, {"delta_plus", d.delta_plus}}}};
    std::cout << j.dump(2) << "\n";
    return kOk;
  }
  std::printf("response          %s, N = %d\n", std::string(mnpq::to_string(cfg.setup.response)).c_str(),
              cfg.setup.multipoles);
  std::printf("lambda_0          %.3f nm\n", mnpq::units::to_nm(mnpq::units::wavelength_of(sys.omega_pl)));
  std::printf("omega_pl          %.6e rad/s (%.5f eV)\n", sys.omega_pl,
              mnpq::units::rad_per_s_to_ev(sys.omega_pl));
  std::printf("chi               %.6e C m (local %.6e)\n", sys.dipole.chi, sys.dipole.chi_local);
  std::printf("Omega             %.6e rad/s\n", sys.rabi_mnp);
  std::printf("gamma_1^r         %.6e rad/s (%s)\n", sys.radiative_rate,
              cfg.setup.radiative == mnpq::RadiativeDamping::include ? "included" : "neglected");
  std::printf("Omega/gamma_1     %.6g\n\n", sys.weak_excitation_ratio());
  std::printf("%3s %14s %14s %14s %14s %12s\n", "l", "omega", "gamma", "g_l", "Re(1+Delta)", "suppressed");
  for (const auto& m : sys.modes) {
    std::printf("%3d %14.6e %14.6e %14.6e %14.6g %12s\n", m.l, m.omega, m.gamma, m.coupling,
                1.0 + m.nonlocal_correction.real(), m.suppressed ? "yes" : "no");
  }
  std::printf("\nOmega~            %.6e %+.6e i rad/s\n", e.rabi[0].real(), e.rabi[0].imag());
  std::printf("g~                %.6e rad/s\n", e.exchange);
  std::printf("gamma~_12         %.6e rad/s\n", e.cross_decay);
  std::printf("Delta omega~_1,2  %.6e %.6e rad/s\n", e.detuning[0], e.detuning[1]);
  std::printf("gamma~_1,2        %.6e %.6e rad/s\n", e.decay[0], e.decay[1]);
  std::printf("gamma_s, gamma_a  %.6e %.6e rad/s\n", d.gamma_s, d.gamma_a);
  const auto ss = mnpq::steady_state(e);
  std::printf("C(t -> inf)       %.6f\n", mnpq::concurrence(ss.rho));
  std::printf("F_Q(t -> inf)     %.6f\n", mnpq::qfi(ss.rho, mnpq::relative_phase_generator()));
  return kOk;
}

int cmd_evolve(const Common& c) {
  const auto cfg = load(c);
  const auto sys = mnpq::assemble(cfg.setup);
  mnpq::EvolutionOptions eo;
  eo.engine = cfg.engine;
  eo.ode = cfg.ode;
  const auto times = cfg.time_samples(sys.dicke.gamma_a);
  const auto ev = mnpq::evolve(sys.effective, cfg.initial_density(), times, eo);
  const auto gen = mnpq::relative_phase_generator();

  const std::string path = cfg.output + "_evolve.csv";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw mnpq::Error("cannot open '" + path + "' for writing");
  const auto f = mnpq::format_double;
  out << "time_s,time_tau,rho_11,rho_22,rho_33,rho_44,re_rho_23,im_rho_23,re_rho_14,im_rho_14,"
         "concurrence,qfi\n";
  for (std::size_t k = 0; k < ev.times.size(); ++k) {
    const auto& r = ev.states[k];
    out << f(ev.times[k]) << "," << f(ev.times[k] * sys.dicke.gamma_a) << "," << f(r(0, 0).real())
        << "," << f(r(1, 1).real()) << "," << f(r(2, 2).real()) << "," << f(r(3, 3).real()) << ","
        << f(r(1, 2).real()) << "," << f(r(1, 2).imag()) << "," << f(r(0, 3).real()) << ","
        << f(r(0, 3).imag()) << "," << f(mnpq::concurrence(r)) << "," << f(mnpq::qfi(r, gen)) << "\n";
  }
  if (!out.flush()) throw mnpq::Error("write to '" + path + "' failed");
  if (!c.quiet) {
    std::fprintf(stderr, "wrote %s (%zu samples, engine %s, %zu renormalisations, max trace drift %.3g)\n",
                 path.c_str(), ev.times.size(), std::string(mnpq::to_string(cfg.engine)).c_str(),
                 ev.renormalizations, ev.max_trace_drift);
  }
  return kOk;
}

int cmd_sweep(const Common& c, const std::string& kind) {
  const auto cfg = load(c);
  const auto prog = progress_printer(c.quiet, kind);
  mnpq::SweepGrid grid;
  if (kind == "sweep-distance") grid = mnpq::run_distance_sweep(cfg, prog);
  else if (kind == "sweep-size") grid = mnpq::run_size_sweep(cfg, prog);
  else grid = mnpq::run_qfi_map(cfg, prog);

  const std::string suffix = kind == "sweep-distance" ? "_distance" : kind == "sweep-size" ? "_size" : "_qfi";
  const std::string csv = cfg.output + suffix + ".csv";
  mnpq::emit_csv(grid, csv);
  mnpq::emit_plot_script(grid, csv, cfg.output + suffix + ".gp");
  if (!c.quiet) {
    for (const auto& s : grid.series) {
      std::fprintf(stderr, "%s (N = %d):\n", s.analysis.c_str(), s.multipoles);
      for (std::size_t k = 0; k < s.points.size(); ++k) {
        std::fprintf(stderr, "  %7.2f nm  C = %.4f", mnpq::units::to_nm(grid.spatial.values[k]),
                     s.points[k].stationary_concurrence);
        if (grid.has_qfi) std::fprintf(stderr, "  F_Q = %.4f", s.points[k].stationary_qfi);
        std::fprintf(stderr, "\n");
      }
    }
    std::fprintf(stderr, "wrote %s\n", csv.c_str());
  }
  return kOk;
}

int cmd_validate(const Common& c, const std::string& report_path) {
  const auto cfg = load(c);
  const auto rep = mnpq::run_validation(cfg);
  const std::string text = rep.to_json();
  if (report_path.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream out(report_path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text << "\n")) throw mnpq::Error("cannot write '" + report_path + "'");
  }
  if (!c.quiet) {
    for (const auto& ch : rep.checks) {
      std::fprintf(stderr, "%-4s  %-34s %s\n", std::string(mnpq::to_string(ch.status)).c_str(),
                   ch.name.c_str(), ch.summary.c_str());
    }
  }
  return rep.passed() ? kOk : kValidationFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Plasmon-mediated entanglement of two quantum-dot qubits"};
  app.set_version_flag("--version", std::string(MNPQ_VERSION));
  app.require_subcommand(1);

  Common common;
  bool params_json = false;
  std::string report_path;

  auto* params = app.add_subcommand("params", "mode table and effective parameters at one geometry");
  add_common(params, common);
  params->add_flag("--json", params_json, "machine-readable output");
  auto* evolve = app.add_subcommand("evolve", "time evolution at one geometry");
  add_common(evolve, common);
  auto* sd = app.add_subcommand("sweep-distance", "stationary and transient concurrence versus gap");
  add_common(sd, common);
  auto* ss = app.add_subcommand("sweep-size", "concurrence versus radius with gap = radius");
  add_common(ss, common);
  auto* qm = app.add_subcommand("qfi-map", "quantum Fisher information versus radius with gap = radius");
  add_common(qm, common);
  auto* val = app.add_subcommand("validate", "cross-checks and oracle tests; JSON report");
  add_common(val, common);
  val->add_option("--report", report_path, "write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    if (params->parsed()) return cmd_params(common, params_json);
    if (evolve->parsed()) return cmd_evolve(common);
    if (sd->parsed()) return cmd_sweep(common, "sweep-distance");
    if (ss->parsed()) return cmd_sweep(common, "sweep-size");
    if (qm->parsed()) return cmd_sweep(common, "qfi-map");
    if (val->parsed()) return cmd_validate(common, report_path);
  } catch (const mnpq::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const mnpq::DomainError& e) {
    std::fprintf(stderr, "invalid parameters: %s\n", e.what());
    return kConfigError;
  } catch (const mnpq::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kNumericalError;
  } catch (const mnpq::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kNumericalError;
  }
  return kOk;
}
