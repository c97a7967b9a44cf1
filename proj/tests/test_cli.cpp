// End-to-end tests for the command-line tool, driven as a subprocess.
// The test harness exports STOKESWAVE_CLI with the path to the built binary.

#include <sys/wait.h>

#include <catch2/catch_amalgamated.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "stokeswave/stokeswave.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("stokes_cli_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

// Runs `stokeswave <args>` with the working directory set to `dir`, so that
// relative default outputs land inside the per-test scratch directory.
RunResult run_cli(const std::string& args, const fs::path& dir) {
  const char* exe = std::getenv("STOKESWAVE_CLI");
  REQUIRE(exe != nullptr);
  const fs::path out_file = dir / "_stdout.txt";
  const fs::path err_file = dir / "_stderr.txt";
  const std::string cmd = "cd '" + dir.string() + "' && '" + std::string(exe) + "' " + args +
                          " > '" + out_file.string() + "' 2> '" + err_file.string() + "'";
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("help text is printed with a success exit code") {
  const fs::path dir = fresh_dir("help");
  const RunResult r = run_cli("--help", dir);
  CHECK(r.code == 0);
  CHECK(contains(r.out, "solve"));
  CHECK(contains(r.out, "sweep"));
  CHECK(contains(r.out, "trajectory"));
  CHECK(contains(r.out, "verify"));
}

TEST_CASE("unknown flags and missing subcommands fail with the usage code") {
  const fs::path dir = fresh_dir("usage");
  CHECK(run_cli("", dir).code == 2);
  CHECK(run_cli("solve --no-such-flag 1", dir).code == 2);
  CHECK(run_cli("sweep --kind T", dir).code == 2);  // --wave is required
}

TEST_CASE("solve writes a loadable wave file and reports the speed") {
  const fs::path dir = fresh_dir("solve");
  const RunResult r = run_cli("solve --lambda 10 --height 0.5 --gravity 9.8 --modes 64", dir);
  REQUIRE(r.code == 0);
  CHECK(contains(r.out, "3.9983537055933414"));  // printed wave speed
  CHECK(contains(r.out, "wrote"));

  const stokes::StokesWave w = stokes::load_wave(dir / "wave.json");
  CHECK(w.wave_height == 0.5);
  CHECK(w.c == Catch::Approx(3.9983537055933414).epsilon(1e-12));
  CHECK(w.residual_norm <= 1e-12);
}

TEST_CASE("solve honours an explicit output path and the flat default height") {
  const fs::path dir = fresh_dir("solve_flat");
  const RunResult r = run_cli("solve --out flat.json", dir);
  REQUIRE(r.code == 0);
  const stokes::StokesWave w = stokes::load_wave(dir / "flat.json");
  CHECK(w.wave_height == 0.0);
  CHECK(w.c == std::sqrt(9.8 * 10.0 / (2.0 * std::acos(-1.0))));
}

TEST_CASE("solve beyond the steepness cap fails with the computational code") {
  const fs::path dir = fresh_dir("solve_steep");
  const RunResult r = run_cli("solve --height 3", dir);
  CHECK(r.code == 3);
  CHECK(contains(r.err, "continuation"));
}

TEST_CASE("config file values are overridden by explicit flags") {
  const fs::path dir = fresh_dir("config");
  {
    std::ofstream cfg(dir / "cfg.json");
    cfg << R"({"wave": {"wave_height": 0.1}, "output_dir": ")" << dir.string() << R"("})";
  }
  // Config alone: height 0.1.
  REQUIRE(run_cli("solve --config cfg.json", dir).code == 0);
  CHECK(stokes::load_wave(dir / "wave.json").wave_height == 0.1);
  // Flag overrides the config value.
  REQUIRE(run_cli("solve --config cfg.json --height 0.5", dir).code == 0);
  CHECK(stokes::load_wave(dir / "wave.json").wave_height == 0.5);
}

TEST_CASE("a malformed config file is reported as unreadable input") {
  const fs::path dir = fresh_dir("config_bad");
  {
    std::ofstream cfg(dir / "cfg.json");
    cfg << "{ not json";
  }
  const RunResult r = run_cli("solve --config cfg.json", dir);
  CHECK(r.code == 3);  // unreadable input data
  CHECK(contains(r.err, "cfg.json"));
}

TEST_CASE("sweep writes one deterministic CSV per requested kind") {
  const fs::path dir = fresh_dir("sweep");
  REQUIRE(run_cli("solve --height 0.5", dir).code == 0);

  const RunResult r = run_cli("sweep --wave wave.json --kind T --kind mu_s --s 1 --s 2", dir);
  REQUIRE(r.code == 0);
  REQUIRE(fs::exists(dir / "T.csv"));
  REQUIRE(fs::exists(dir / "mu_s_1.csv"));
  REQUIRE(fs::exists(dir / "mu_s_2.csv"));

  const std::string t_csv = slurp(dir / "T.csv");
  CHECK(contains(t_csv, "# kind=T"));
  CHECK(contains(t_csv, "p,value"));
  CHECK(contains(t_csv, "\n0,"));  // the p=0 surface row is present

  // A second run into a separate directory reproduces the bytes exactly.
  const fs::path dir2 = fresh_dir("sweep_again");
  fs::copy_file(dir / "wave.json", dir2 / "wave.json");
  REQUIRE(run_cli("sweep --wave wave.json --kind T --kind mu_s --s 1 --s 2", dir2).code == 0);
  CHECK(slurp(dir2 / "T.csv") == t_csv);
  CHECK(slurp(dir2 / "mu_s_1.csv") == slurp(dir / "mu_s_1.csv"));
}

TEST_CASE("sweep grid flags shape the grid and bad values are usage errors") {
  const fs::path dir = fresh_dir("sweep_grid");
  REQUIRE(run_cli("solve --height 0.1", dir).code == 0);

  REQUIRE(run_cli("sweep --wave wave.json --kind T --p-min 0.5 --p-max 2 --p-count 4 "
                  "--p-spacing linear --no-include-zero",
                  dir)
              .code == 0);
  // Header plus exactly four data rows, first p = 0.5.
  std::istringstream rows(slurp(dir / "T.csv"));
  std::string line;
  int data_rows = 0;
  bool saw_half = false;
  while (std::getline(rows, line)) {
    if (line.empty() || line[0] == '#' || line == "p,value") continue;
    ++data_rows;
    if (line.rfind("0.5,", 0) == 0) saw_half = true;
  }
  CHECK(data_rows == 4);
  CHECK(saw_half);

  CHECK(run_cli("sweep --wave wave.json --kind no_such_kind", dir).code == 2);
  CHECK(run_cli("sweep --wave wave.json --kind T --p-spacing cubic", dir).code == 2);
  CHECK(run_cli("sweep --wave wave.json --kind T --p-min 5 --p-max 1", dir).code == 2);
}

TEST_CASE("sweep on a missing wave file is a data error") {
  const fs::path dir = fresh_dir("sweep_missing");
  const RunResult r = run_cli("sweep --wave nowhere.json --kind T", dir);
  CHECK(r.code == 3);
}

TEST_CASE("trajectory integrates a surface particle and summarises the drift") {
  const fs::path dir = fresh_dir("traj");
  REQUIRE(run_cli("solve --height 0.5", dir).code == 0);

  const RunResult r = run_cli("trajectory --wave wave.json --x0 0 --periods 1", dir);
  REQUIRE(r.code == 0);
  CHECK(contains(r.out, "T       = 2.5643612771471"));
  CHECK(contains(r.out, "drift   = 0.253223414961"));
  CHECK(contains(r.out, "closed  = false"));

  const std::string csv = slurp(dir / "trajectory.csv");
  CHECK(contains(csv, "# frame=lab"));
  CHECK(contains(csv, "t,x,y"));
  CHECK(contains(csv, "# T="));
  CHECK(contains(csv, "drift="));
}

TEST_CASE("trajectory on flat water reports a closed orbit") {
  const fs::path dir = fresh_dir("traj_flat");
  REQUIRE(run_cli("solve --height 0", dir).code == 0);
  const RunResult r = run_cli("trajectory --wave wave.json --x0 1.5 --periods 1 "
                              "--steps-per-period 256 --frame moving --out still.csv",
                              dir);
  REQUIRE(r.code == 0);
  CHECK(contains(r.out, "drift   = 0\n"));
  CHECK(contains(r.out, "closed  = true"));
  CHECK(contains(slurp(dir / "still.csv"), "# frame=moving"));
}

TEST_CASE("trajectory starting above the free surface is a domain error") {
  const fs::path dir = fresh_dir("traj_above");
  REQUIRE(run_cli("solve --height 0.5", dir).code == 0);
  const RunResult r = run_cli("trajectory --wave wave.json --x0 0 --y0 5", dir);
  CHECK(r.code == 2);
  CHECK(contains(r.err, "free surface"));
}

TEST_CASE("trajectory validates its numeric flags") {
  const fs::path dir = fresh_dir("traj_flags");
  REQUIRE(run_cli("solve --height 0.1", dir).code == 0);
  CHECK(run_cli("trajectory --wave wave.json --periods -1", dir).code == 2);
  CHECK(run_cli("trajectory --wave wave.json --steps-per-period 4", dir).code == 2);
  CHECK(run_cli("trajectory --wave wave.json --frame sidereal", dir).code == 2);
}

TEST_CASE("verify passes on a solved wave and writes both report forms") {
  const fs::path dir = fresh_dir("verify");
  REQUIRE(run_cli("solve --height 0.5", dir).code == 0);
  const RunResult r = run_cli("verify --wave wave.json", dir);
  REQUIRE(r.code == 0);
  CHECK(contains(r.out, "0 failed"));
  REQUIRE(fs::exists(dir / "report.json"));
  REQUIRE(fs::exists(dir / "report.txt"));
  CHECK(contains(slurp(dir / "report.txt"), "PASS"));
  CHECK(contains(slurp(dir / "report.json"), "\"failed\": 0"));
}

TEST_CASE("verify flags a tampered wave with the violation exit code") {
  const fs::path dir = fresh_dir("verify_bad");
  REQUIRE(run_cli("solve --height 0.5", dir).code == 0);

  // Corrupt the leading coefficient by 0.1%: geometry stays sane, but the
  // dynamic surface condition is violated far beyond its tolerance.
  stokes::StokesWave w = stokes::load_wave(dir / "wave.json");
  w.b[0] *= 1.001;
  stokes::save_wave(w, dir / "tampered.json");

  const RunResult r = run_cli("verify --wave tampered.json", dir);
  CHECK(r.code == 2);
  CHECK(contains(r.out, "FAIL"));
  CHECK(contains(slurp(dir / "report.txt"), "dynamic surface condition"));
}

TEST_CASE("verify accepts named tolerance overrides from the config file") {
  const fs::path dir = fresh_dir("verify_tol");
  REQUIRE(run_cli("solve --height 0.1", dir).code == 0);
  {
    std::ofstream cfg(dir / "cfg.json");
    cfg << R"({"tolerances": {"shape": 1e-6}})";
  }
  CHECK(run_cli("verify --wave wave.json --config cfg.json", dir).code == 0);
  {
    std::ofstream cfg(dir / "cfg.json");
    cfg << R"({"tolerances": {"no_such_tolerance": 1e-6}})";
  }
  CHECK(run_cli("verify --wave wave.json --config cfg.json", dir).code == 2);
}
