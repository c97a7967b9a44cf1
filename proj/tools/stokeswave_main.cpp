// Command-line front end: solve waves, sweep depth-indexed functionals,
// integrate particle trajectories, and run the verification suite.
//
// Exit codes: 0 success, 2 usage or property violation, 3 computational
// failure (no convergence, unreadable files).

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stokeswave/stokeswave.hpp"

namespace fs = std::filesystem;

namespace {

struct SweepSpec {
  double p_min = -1.0;  // < 0: wave-dependent default c*lambda/1000
  double p_max = -1.0;  // < 0: wave-dependent default 3*c*lambda
  int count = 33;
  std::string spacing = "log";  // "log" | "linear"
  bool include_zero = true;
};

struct RunConfig {
  stokes::WaveParameters wave;
  SweepSpec sweep;
  std::vector<double> s_values{1.0};
  int quadrature_nodes = 0;  // 0: 4*modes
  std::map<std::string, double> tolerances;
  std::string output_dir = ".";
};

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("config file " + path.string() + ": " + e.what());
  }
  RunConfig cfg;
  try {
    if (j.contains("wave")) {
      const auto& w = j.at("wave");
      cfg.wave.wavelength = w.value("wavelength", cfg.wave.wavelength);
      cfg.wave.wave_height = w.value("wave_height", cfg.wave.wave_height);
      cfg.wave.gravity = w.value("gravity", cfg.wave.gravity);
      cfg.wave.modes = w.value("modes", cfg.wave.modes);
      cfg.wave.newton_tol = w.value("newton_tol", cfg.wave.newton_tol);
      cfg.wave.max_iterations = w.value("max_iterations", cfg.wave.max_iterations);
      cfg.wave.steepness_cap = w.value("steepness_cap", cfg.wave.steepness_cap);
    }
    if (j.contains("sweep")) {
      const auto& s = j.at("sweep");
      cfg.sweep.p_min = s.value("p_min", cfg.sweep.p_min);
      cfg.sweep.p_max = s.value("p_max", cfg.sweep.p_max);
      cfg.sweep.count = s.value("count", cfg.sweep.count);
      cfg.sweep.spacing = s.value("spacing", cfg.sweep.spacing);
      cfg.sweep.include_zero = s.value("include_zero", cfg.sweep.include_zero);
    }
    if (j.contains("s_values")) cfg.s_values = j.at("s_values").get<std::vector<double>>();
    if (j.contains("quadrature_nodes")) cfg.quadrature_nodes = j.at("quadrature_nodes").get<int>();
    if (j.contains("tolerances"))
      cfg.tolerances = j.at("tolerances").get<std::map<std::string, double>>();
    if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config file " + path.string() + ": " + e.what());
  }
  return cfg;
}

std::vector<double> make_grid(const stokes::StokesWave& w, const SweepSpec& s) {
  const double P = w.period_q();
  const double lo = s.p_min >= 0.0 ? s.p_min : 1e-3 * P;
  const double hi = s.p_max >= 0.0 ? s.p_max : 3.0 * P;
  if (!(lo >= 0.0) || !(hi > lo)) throw std::invalid_argument("need 0 <= p-min < p-max");
  if (s.count < 1) throw std::invalid_argument("p-count must be at least 1");
  std::vector<double> g;
  if (s.spacing == "log") {
    if (!(lo > 0.0))
      throw std::invalid_argument("log spacing needs p-min > 0 (p=0 is added by include_zero)");
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < s.count; ++i)
      g.push_back(s.count == 1 ? lo : std::exp(a + (b - a) * i / (s.count - 1)));
  } else if (s.spacing == "linear") {
    for (int i = 0; i < s.count; ++i)
      g.push_back(s.count == 1 ? lo : lo + (hi - lo) * i / (s.count - 1));
  } else {
    throw std::invalid_argument("p-spacing must be 'log' or 'linear'");
  }
  if (s.include_zero && g.front() > 0.0) g.insert(g.begin(), 0.0);
  return g;
}

stokes::FunctionalKind parse_kind(const std::string& name) {
  using stokes::FunctionalKind;
  for (FunctionalKind k :
       {FunctionalKind::mu_s, FunctionalKind::mu_s_root, FunctionalKind::T,
        FunctionalKind::E_total, FunctionalKind::E_total_moving, FunctionalKind::E_s,
        FunctionalKind::Emov_s, FunctionalKind::drift})
    if (name == stokes::kind_name(k)) return k;
  throw std::invalid_argument("unknown functional kind '" + name +
                              "' (expected one of: mu_s, mu_s_root, T, E_total, "
                              "E_total_moving, E_s, Emov_s, drift)");
}

std::string fmt_s_suffix(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", s);
  return buf;
}


int cmd_solve(const RunConfig& cfg, const std::string& out_override) {
  const stokes::StokesWave w = stokes::solve_stokes_wave(cfg.wave);
  const fs::path out =
      out_override.empty() ? fs::path(cfg.output_dir) / "wave.json" : fs::path(out_override);
  stokes::save_wave(w, out);
  std::printf("lambda        = %.12g\n", w.lambda);
  std::printf("wave_height   = %.12g\n", w.wave_height);
  std::printf("c             = %.17g\n", w.c);
  std::printf("B             = %.17g\n", w.B);
  std::printf("steepness     = %.6g\n", w.steepness);
  std::printf("residual_norm = %.3e\n", w.residual_norm);
  std::printf("wrote %s\n", out.string().c_str());
  return 0;
}

int cmd_sweep(const RunConfig& cfg, const fs::path& wave_file,
              const std::vector<std::string>& kinds, const std::string& out_override) {
  if (kinds.empty()) throw std::invalid_argument("sweep needs at least one --kind");
  const stokes::StokesWave w = stokes::load_wave(wave_file);
  const std::vector<double> grid = make_grid(w, cfg.sweep);
  const std::string dir = out_override.empty() ? cfg.output_dir : out_override;
  const std::string wave_id = stokes::detail::default_wave_id(w);

  for (const std::string& name : kinds) {
    const stokes::FunctionalKind kind = parse_kind(name);
    const std::vector<double> ss =
        stokes::kind_uses_s(kind) ? cfg.s_values : std::vector<double>{0.0};
    for (double s : ss) {
      const stokes::FunctionalCurve curve =
          stokes::functional_sweep(w, kind, s, grid, cfg.quadrature_nodes, wave_id);
      std::string fname = name;
      if (stokes::kind_uses_s(kind)) fname += "_" + fmt_s_suffix(s);
      fname += ".csv";
      const fs::path out = fs::path(dir) / fname;
      stokes::write_curve_csv(curve, out);
      std::printf("wrote %s (%zu points)\n", out.string().c_str(), curve.p_grid.size());
    }
  }
  return 0;
}

int cmd_trajectory(const RunConfig& cfg, const fs::path& wave_file, double x0,
                   std::optional<double> y0_opt, double t0, double periods,
                   int steps_per_period, const std::string& frame_name,
                   const std::string& out_override) {
  if (!(periods > 0.0)) throw std::invalid_argument("--periods must be positive");
  if (steps_per_period < 8) throw std::invalid_argument("--steps-per-period must be >= 8");
  stokes::Frame frame;
  if (frame_name == "lab") frame = stokes::Frame::lab;
  else if (frame_name == "moving") frame = stokes::Frame::moving;
  else throw std::invalid_argument("--frame must be 'lab' or 'moving'");

  const stokes::StokesWave w = stokes::load_wave(wave_file);
  double y0;
  if (y0_opt) {
    y0 = *y0_opt;
  } else {
    const double q = stokes::surface_q_at_x(w, x0 - w.c * t0);
    y0 = stokes::map_point(w, stokes::ConformalPoint{q, 0.0}).y;
  }

  const stokes::ConformalPoint start = stokes::detail::locate_particle(w, x0, y0, t0);
  const double T = stokes::streamline_period(w, start.p, cfg.quadrature_nodes);
  const stokes::ParticlePath path =
      stokes::particle_path(w, x0, y0, t0, periods * T, T / steps_per_period, frame);
  const stokes::PeriodResult per = stokes::drift(w, start.p, cfg.quadrature_nodes);

  const fs::path out = out_override.empty() ? fs::path(cfg.output_dir) / "trajectory.csv"
                                            : fs::path(out_override);
  stokes::write_path_csv(path, out, &per);
  std::printf("p       = %.12g\n", start.p);
  std::printf("T       = %.17g\n", per.T);
  std::printf("drift   = %.17g\n", per.drift);
  std::printf("closed  = %s\n", per.closed ? "true" : "false");
  std::printf("wrote %s (%zu samples)\n", out.string().c_str(), path.t.size());
  return 0;
}

int cmd_verify(const RunConfig& cfg, const fs::path& wave_file, bool grid_given,
               const std::string& out_override) {
  const stokes::StokesWave w = stokes::load_wave(wave_file);
  stokes::VerifyConfig vc;
  if (grid_given) vc.p_grid = make_grid(w, cfg.sweep);
  vc.quadrature_nodes = cfg.quadrature_nodes;
  for (const auto& [name, value] : cfg.tolerances)
    if (!stokes::set_tolerance(vc, name, value))
      throw std::invalid_argument("unknown tolerance name '" + name + "'");

  const stokes::PropertyReport rep = stokes::verify_all(w, vc);
  const std::string dir = out_override.empty() ? cfg.output_dir : out_override;
  stokes::write_report(rep, fs::path(dir) / "report.json", fs::path(dir) / "report.txt");
  std::fputs(stokes::report_to_text(rep).c_str(), stdout);
  std::printf("wrote %s and %s\n", (fs::path(dir) / "report.json").string().c_str(),
              (fs::path(dir) / "report.txt").string().c_str());
  return rep.all_passed() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steady deep-water gravity waves: spectral solver, energy functionals, "
               "particle trajectories, and a numerical certification suite"};
  app.require_subcommand(1);

  // Per-subcommand raw option storage; config-file values fill anything the
  // command line leaves unset (precedence: flags > config file > defaults).
  struct Raw {
    std::string config;
    double lambda = 10.0, height = 0.0, gravity = 9.8;
    int modes = 64;
    double p_min = -1.0, p_max = -1.0;
    int p_count = 33;
    std::string p_spacing = "log";
    bool include_zero = true;
    std::vector<double> s_values;
    int nodes = 0;
    std::string out;
    std::string wave_file;
    std::vector<std::string> kinds;
    double x0 = 0.0, y0 = 0.0, t0 = 0.0, periods = 1.0;
    int steps_per_period = 2000;
    std::string frame = "lab";
  };

  auto add_common = [](CLI::App* cmd, Raw& r) {
    cmd->add_option("--config", r.config, "JSON config file (flags override its values)");
    cmd->add_option("--out", r.out, "output file or directory (command-specific)");
  };
  auto add_grid = [](CLI::App* cmd, Raw& r) {
    cmd->add_option("--p-min", r.p_min, "smallest positive depth parameter (default c*lambda/1000)");
    cmd->add_option("--p-max", r.p_max, "largest depth parameter (default 3*c*lambda)");
    cmd->add_option("--p-count", r.p_count, "number of grid points")->capture_default_str();
    cmd->add_option("--p-spacing", r.p_spacing, "grid spacing: log or linear")
        ->capture_default_str();
    cmd->add_flag("--include-zero,!--no-include-zero", r.include_zero,
                  "prepend the free surface p=0 to the grid (default on)");
    cmd->add_option("--nodes", r.nodes, "quadrature nodes per period (0 = 4*modes)")
        ->capture_default_str();
  };

  Raw solve_r, sweep_r, traj_r, verify_r;

  CLI::App* c_solve = app.add_subcommand("solve", "solve one steady wave and write its JSON file");
  c_solve->add_option("--lambda", solve_r.lambda, "wavelength [m]")->capture_default_str();
  c_solve->add_option("--height", solve_r.height, "crest-to-trough wave height [m]")
      ->capture_default_str();
  c_solve->add_option("--gravity", solve_r.gravity, "gravitational acceleration [m/s^2]")
      ->capture_default_str();
  c_solve->add_option("--modes", solve_r.modes, "number of spectral modes")->capture_default_str();
  add_common(c_solve, solve_r);

  CLI::App* c_sweep = app.add_subcommand("sweep", "evaluate functionals over a depth grid (CSV)");
  c_sweep->add_option("--wave", sweep_r.wave_file, "wave JSON file")->required();
  c_sweep->add_option("--kind", sweep_r.kinds,
                      "functional kind(s): mu_s, mu_s_root, T, E_total, E_total_moving, "
                      "E_s, Emov_s, drift")
      ->required();
  c_sweep->add_option("--s", sweep_r.s_values, "exponent(s) for kinds that take s (default 1)");
  add_grid(c_sweep, sweep_r);
  add_common(c_sweep, sweep_r);

  CLI::App* c_traj = app.add_subcommand("trajectory", "integrate one particle path (CSV)");
  c_traj->add_option("--wave", traj_r.wave_file, "wave JSON file")->required();
  c_traj->add_option("--x0", traj_r.x0, "starting x [m]")->capture_default_str();
  CLI::Option* y0_opt =
      c_traj->add_option("--y0", traj_r.y0, "starting y [m] (default: on the free surface)");
  c_traj->add_option("--t0", traj_r.t0, "starting time [s]")->capture_default_str();
  c_traj->add_option("--periods", traj_r.periods, "number of traversal periods to integrate")
      ->capture_default_str();
  c_traj->add_option("--steps-per-period", traj_r.steps_per_period, "integration steps per period")
      ->capture_default_str();
  c_traj->add_option("--frame", traj_r.frame, "output frame: lab or moving")->capture_default_str();
  c_traj->add_option("--nodes", traj_r.nodes, "quadrature nodes per period (0 = 4*modes)")
      ->capture_default_str();
  add_common(c_traj, traj_r);

  CLI::App* c_verify = app.add_subcommand("verify", "run the full certification suite");
  c_verify->add_option("--wave", verify_r.wave_file, "wave JSON file")->required();
  add_grid(c_verify, verify_r);
  add_common(c_verify, verify_r);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    CLI::App* active = app.get_subcommands().front();
    Raw& r = *[&]() -> Raw* {
      if (active == c_solve) return &solve_r;
      if (active == c_sweep) return &sweep_r;
      if (active == c_traj) return &traj_r;
      return &verify_r;
    }();

    RunConfig cfg;
    if (!r.config.empty()) cfg = load_run_config(r.config);

    auto given = [&](const std::string& flag) {
      const CLI::Option* o = active->get_option_no_throw(flag);
      return o != nullptr && o->count() > 0;
    };
    if (given("--lambda")) cfg.wave.wavelength = r.lambda;
    if (given("--height")) cfg.wave.wave_height = r.height;
    if (given("--gravity")) cfg.wave.gravity = r.gravity;
    if (given("--modes")) cfg.wave.modes = r.modes;
    bool grid_given = !r.config.empty();
    for (const char* f : {"--p-min", "--p-max", "--p-count", "--p-spacing", "--include-zero"})
      if (given(f)) grid_given = true;
    if (given("--p-min")) cfg.sweep.p_min = r.p_min;
    if (given("--p-max")) cfg.sweep.p_max = r.p_max;
    if (given("--p-count")) cfg.sweep.count = r.p_count;
    if (given("--p-spacing")) cfg.sweep.spacing = r.p_spacing;
    if (given("--include-zero")) cfg.sweep.include_zero = r.include_zero;
    if (given("--s")) cfg.s_values = r.s_values;
    if (given("--nodes")) cfg.quadrature_nodes = r.nodes;

    if (active == c_solve) return cmd_solve(cfg, r.out);
    if (active == c_sweep) return cmd_sweep(cfg, r.wave_file, r.kinds, r.out);
    if (active == c_traj) {
      std::optional<double> y0;
      if (y0_opt->count() > 0) y0 = r.y0;
      return cmd_trajectory(cfg, r.wave_file, r.x0, y0, r.t0, r.periods, r.steps_per_period,
                            r.frame, r.out);
    }
    return cmd_verify(cfg, r.wave_file, grid_given, r.out);
  } catch (const stokes::NoConvergence& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const stokes::DegenerateJacobian& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const stokes::NotInFluid& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const stokes::StepTooLarge& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
