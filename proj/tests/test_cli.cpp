#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mockq/csv.hpp"
#include "mockq/manifest.hpp"
#include "mockq/stochastic.hpp"

using namespace mockq;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kCli = MOCKQ_CLI_PATH;

fs::path scratch_root() { return fs::temp_directory_path() / "mockq_cli_tests"; }

fs::path fresh_dir(const std::string& name) {
  const fs::path p = scratch_root() / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int run_raw(const std::string& cmd, std::string* log = nullptr) {
  static int counter = 0;
  fs::create_directories(scratch_root());
  const fs::path cap = scratch_root() / ("capture" + std::to_string(counter++) + ".txt");
  const std::string full = cmd + " >" + cap.string() + " 2>&1";
  const int status = std::system(full.c_str());
  if (log != nullptr) *log = slurp(cap);
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

int run(const std::string& args, std::string* log = nullptr) {
  return run_raw("\"" + kCli + "\" " + args, log);
}

json manifest_in(const fs::path& dir) { return json::parse(slurp(dir / "manifest.json")); }

}  // namespace

TEST_CASE("help and version exit cleanly, a bare invocation does not") {
  std::string log;
  CHECK(run("--help", &log) == 0);
  CHECK(log.find("spectrum") != std::string::npos);
  CHECK(run("--version", &log) == 0);
  CHECK_FALSE(log.empty());
  CHECK(run("", &log) == 2);
  CHECK(log.find("usage_error") != std::string::npos);
}

TEST_CASE("spectrum emits oscillator levels and a digest-consistent manifest") {
  const fs::path dir = fresh_dir("spectrum");
  REQUIRE(run("spectrum --out-dir " + dir.string()) == 0);

  const CsvTable table = read_csv((dir / "spectrum.csv").string());
  REQUIRE(table.header == std::vector<std::string>{"n", "re_E", "im_E", "residual"});
  REQUIRE(table.rows.size() == 5);
  for (std::size_t n = 0; n < table.rows.size(); ++n) {
    // harmonic-lv defaults a = d = 1: offset a + d, unit frequency.
    CHECK(std::abs(table.rows[n][1] - (2.0 + static_cast<double>(n) + 0.5)) < 1e-5);
    CHECK(std::abs(table.rows[n][2]) < 1e-10);
    CHECK(table.rows[n][3] < 1e-6);
  }

  const json m = manifest_in(dir);
  CHECK(m["tool"] == "mockq");
  CHECK(m["subcommand"] == "spectrum");
  CHECK(m["config"]["model"] == "harmonic-lv");
  CHECK(m["config"]["n"] == 256);
  CHECK(m["config"]["out-dir"] == dir.string());
  CHECK(m["wall_seconds"].get<double>() >= 0.0);
  CHECK(m["outputs"]["spectrum.csv"] == sha256_file((dir / "spectrum.csv").string()));
}

TEST_CASE("config files fill in defaults while explicit flags win") {
  const fs::path dir = fresh_dir("config");
  const fs::path cfg = dir / "run.json";
  std::ofstream(cfg) << R"({"a": 2.0, "d": 2.0, "levels": 3})";

  REQUIRE(run("spectrum --a 1 --config " + cfg.string() + " --out-dir " + dir.string()) == 0);
  const json m = manifest_in(dir);
  CHECK(m["config"]["a"] == 1.0);
  CHECK(m["config"]["d"] == 2.0);
  CHECK(m["config"]["levels"] == 3);

  const CsvTable table = read_csv((dir / "spectrum.csv").string());
  REQUIRE(table.rows.size() == 3);
  // offset a + d = 3, frequency sqrt(ad) = sqrt(2).
  CHECK(std::abs(table.rows[0][1] - (3.0 + 0.5 * std::sqrt(2.0))) < 1e-4);

  // Two-word subcommands accept spliced keys too.
  const fs::path cfg2 = dir / "lv.json";
  std::ofstream(cfg2) << R"({"n1": 2.5, "t-end": 1.0})";
  REQUIRE(run("lv classical --config " + cfg2.string() + " --out-dir " + dir.string()) == 0);
  const json m2 = manifest_in(dir);
  CHECK(m2["subcommand"] == "lv classical");
  CHECK(m2["config"]["n1"] == 2.5);
  CHECK(m2["config"]["t-end"] == 1.0);
}

TEST_CASE("config file failure modes") {
  const fs::path dir = fresh_dir("badconfig");
  std::string log;

  const fs::path unknown = dir / "unknown.json";
  std::ofstream(unknown) << R"({"no-such-flag": 1})";
  CHECK(run("spectrum --config " + unknown.string(), &log) == 2);
  CHECK(log.find("usage_error") != std::string::npos);

  const fs::path broken = dir / "broken.json";
  std::ofstream(broken) << "{not json";
  CHECK(run("spectrum --config " + broken.string(), &log) == 2);
  CHECK(log.find("not valid JSON") != std::string::npos);

  const fs::path list = dir / "list.json";
  std::ofstream(list) << "[1, 2]";
  CHECK(run("spectrum --config " + list.string(), &log) == 2);

  CHECK(run("spectrum --config " + (dir / "absent.json").string(), &log) == 1);
  CHECK(log.find("io_not_found") != std::string::npos);
}

TEST_CASE("argument range violations exit with usage errors") {
  std::string log;
  CHECK(run("spectrum --n 100", &log) == 2);
  CHECK(log.find("power of two") != std::string::npos);
  CHECK(run("spectrum --n 4") == 2);
  CHECK(run("spectrum --x-min 2 --x-max -2") == 2);
  CHECK(run("spectrum --hbar -1") == 2);
  CHECK(run("bohm --mode trajectories --walkers 50") == 2);
  CHECK(run("lv mock --mode bogus") == 2);
  CHECK(run("evolve --dt 0") == 2);
  CHECK(run("variety --mode views --n-samples 63") == 2);
}

TEST_CASE("library failures surface their error code with exit one") {
  std::string log;
  CHECK(run("lv classical --dt 1 --out-dir " + fresh_dir("lverr").string(), &log) == 1);
  CHECK(log.find("step_too_large") != std::string::npos);
  CHECK(run("ergodicity --steps 100 --burn-in 200 --out-dir " + fresh_dir("ergerr").string(),
            &log) == 1);
  CHECK(log.find("bad_argument") != std::string::npos);
}

TEST_CASE("seeded reruns are byte-identical and reseeding changes the stream") {
  const fs::path a = fresh_dir("traj_a");
  const fs::path b = fresh_dir("traj_b");
  const fs::path c = fresh_dir("traj_c");
  const std::string args =
      " --mode trajectories --mix 1,1 --walkers 100 --steps 20 --stride 10 --dt 0.01";
  REQUIRE(run("bohm" + args + " --seed 42 --out-dir " + a.string()) == 0);
  REQUIRE(run("bohm" + args + " --seed 42 --out-dir " + b.string()) == 0);
  REQUIRE(run("bohm" + args + " --seed 43 --out-dir " + c.string()) == 0);
  const std::string run_a = slurp(a / "trajectories.csv");
  CHECK(run_a == slurp(b / "trajectories.csv"));
  CHECK(run_a != slurp(c / "trajectories.csv"));
  CHECK(manifest_in(a)["outputs"]["trajectories.csv"] ==
        sha256_file((a / "trajectories.csv").string()));
  CHECK(manifest_in(a)["seed"] == 42);

  const fs::path la = fresh_dir("lang_a");
  const fs::path lb = fresh_dir("lang_b");
  REQUIRE(run("langevin --steps 500 --seed 7 --out-dir " + la.string()) == 0);
  REQUIRE(run("langevin --steps 500 --seed 7 --out-dir " + lb.string()) == 0);
  CHECK(slurp(la / "path.csv") == slurp(lb / "path.csv"));
}

TEST_CASE("seed resolution prefers the flag over the environment") {
  const fs::path env_dir = fresh_dir("seed_env");
  const fs::path flag_dir = fresh_dir("seed_flag");
  REQUIRE(run_raw("MOCKQ_SEED=777 \"" + kCli + "\" langevin --steps 200 --out-dir " +
                  env_dir.string()) == 0);
  REQUIRE(run("langevin --steps 200 --seed 777 --out-dir " + flag_dir.string()) == 0);
  CHECK(slurp(env_dir / "path.csv") == slurp(flag_dir / "path.csv"));
  CHECK(manifest_in(env_dir)["seed"] == 777);

  const fs::path both = fresh_dir("seed_both");
  REQUIRE(run_raw("MOCKQ_SEED=5 \"" + kCli + "\" langevin --steps 200 --seed 9 --out-dir " +
                  both.string()) == 0);
  CHECK(manifest_in(both)["seed"] == 9);

  const fs::path none = fresh_dir("seed_none");
  REQUIRE(run("langevin --steps 200 --out-dir " + none.string()) == 0);
  CHECK(manifest_in(none)["seed"] == 0);

  std::string log;
  CHECK(run_raw("MOCKQ_SEED=abc \"" + kCli + "\" langevin --steps 200", &log) == 1);
  CHECK(log.find("bad_argument") != std::string::npos);
}

TEST_CASE("msr action round-trips a tabulated path through csv") {
  const fs::path dir = fresh_dir("msr");
  DiscretePath path;
  path.dt = 0.1;
  CsvWriter input({"t", "phi", "phi_tilde"});
  for (int i = 0; i <= 10; ++i) {
    const double phi = std::sin(0.3 * i);
    const double phi_tilde = std::cos(0.2 * i);
    path.phi.push_back(phi);
    path.phi_tilde.push_back(phi_tilde);
    input.add_row({0.1 * i, phi, phi_tilde});
  }
  const fs::path in_csv = dir / "path_in.csv";
  input.write(in_csv.string());

  REQUIRE(run("msr --input " + in_csv.string() + " --lambda 1 --k 0.8 --kappa 1.3 --out-dir " +
              dir.string()) == 0);
  const CsvTable out = read_csv((dir / "action.csv").string());
  REQUIRE(out.rows.size() == 1);
  const LangevinSpec spec(
      1.0, 0.8, [](double x) { return -1.3 * x; }, 0);
  CHECK(out.rows[0][0] == doctest::Approx(msr_action(path, spec)).epsilon(1e-13));

  std::string log;
  CsvWriter bad({"t", "value"});
  bad.add_row({0.0, 1.0});
  bad.add_row({0.1, 2.0});
  bad.add_row({0.2, 3.0});
  const fs::path bad_csv = dir / "bad.csv";
  bad.write(bad_csv.string());
  CHECK(run("msr --input " + bad_csv.string(), &log) == 1);
  CHECK(log.find("bad_argument") != std::string::npos);
}

TEST_CASE("hydro scaling fits synthesized and tabulated fields") {
  const fs::path dir = fresh_dir("scaling");
  REQUIRE(run("hydro scaling --hurst 0.3333333 --n 65536 --seed 3 --out-dir " + dir.string()) ==
          0);
  const CsvTable summary = read_csv((dir / "scaling_summary.csv").string());
  REQUIRE(summary.rows.size() == 1);
  CHECK(std::abs(summary.rows[0][0] - 2.0 / 3.0) < 0.05);
  const CsvTable lags = read_csv((dir / "scaling.csv").string());
  CHECK(lags.rows.size() >= 8);

  // An overdamped path sampled much faster than its relaxation time looks
  // diffusive, so the fitted exponent sits near one.
  const fs::path lang = fresh_dir("scaling_input");
  REQUIRE(run("langevin --steps 65535 --stride 1 --seed 11 --out-dir " + lang.string()) == 0);
  REQUIRE(run("hydro scaling --input " + (lang / "path.csv").string() + " --out-dir " +
              lang.string()) == 0);
  const CsvTable s2 = read_csv((lang / "scaling_summary.csv").string());
  CHECK(s2.rows[0][0] > 0.5);
  CHECK(s2.rows[0][0] < 1.1);

  CHECK(run("hydro scaling --hurst 0.5 --input " + (lang / "path.csv").string()) == 2);
  CHECK(run("hydro scaling") == 2);
}

TEST_CASE("variety modes emit closed-form values and deterministic views") {
  const fs::path dir = fresh_dir("variety");
  REQUIRE(run("variety --mode continuum --sigma 1 --out-dir " + dir.string()) == 0);
  const CsvTable cont = read_csv((dir / "variety.csv").string());
  REQUIRE(cont.header == std::vector<std::string>{"value", "mask_fraction", "reliable",
                                                  "fisher_lhs", "fisher_rhs", "fisher_residual",
                                                  "applicable"});
  REQUIRE(cont.rows.size() == 1);
  CHECK(std::abs(cont.rows[0][0] - 1.0) < 1e-6);
  CHECK(cont.rows[0][1] > 0.05);
  CHECK(cont.rows[0][1] < 0.09);
  CHECK(cont.rows[0][2] == 1.0);
  CHECK(std::abs(cont.rows[0][3] - 0.125) < 1e-8);
  CHECK(cont.rows[0][5] < 1e-8);
  CHECK(cont.rows[0][6] == 1.0);

  CsvWriter views_in({"element_id", "v1", "v2"});
  views_in.add_row({0.0, 0.0, 0.0});
  views_in.add_row({1.0, 3.0, 4.0});
  const fs::path views_csv = dir / "views_in.csv";
  views_in.write(views_csv.string());
  REQUIRE(run("variety --mode discrete --input " + views_csv.string() + " --out-dir " +
              dir.string()) == 0);
  const CsvTable disc = read_csv((dir / "variety.csv").string());
  CHECK(disc.rows[0][0] == 25.0);

  const fs::path va = fresh_dir("views_a");
  const fs::path vb = fresh_dir("views_b");
  const std::string vargs = "variety --mode views --n-samples 64 --seed 5 --out-dir ";
  REQUIRE(run(vargs + va.string()) == 0);
  REQUIRE(run(vargs + vb.string()) == 0);
  const CsvTable va_table = read_csv((va / "views.csv").string());
  CHECK(va_table.rows.size() == 64);
  CHECK(slurp(va / "views.csv") == slurp(vb / "views.csv"));
}

TEST_CASE("lv mock flow conserves its quadratic energy and vacuum checks are tiny") {
  const fs::path dir = fresh_dir("lvmock");
  REQUIRE(run("lv mock --out-dir " + dir.string()) == 0);
  const CsvTable mock = read_csv((dir / "lv_mock.csv").string());
  REQUIRE(mock.rows.size() == 2001);
  // defaults a = 4, d = 1, literal curvature: w = a - sqrt(ad)/2 = 3.
  const double e0 = 3.0 * 0.1 * 0.1;
  for (std::size_t i = 0; i < mock.rows.size(); i += 100) {
    const double q = mock.rows[i][1], p = mock.rows[i][2];
    CHECK(std::abs(3.0 * q * q + p * p - e0) < 1e-12);
  }

  const fs::path vac = fresh_dir("lvvacuum");
  REQUIRE(run("lv vacuum --out-dir " + vac.string()) == 0);
  const CsvTable checks = read_csv((vac / "vacuum_checks.csv").string());
  REQUIRE(checks.rows.size() == 1);
  // defaults n = 0, a = 1, hbar = 0.5: E = i a hbar/2, quadratic constant
  // -d (4 n pi + hbar)^2 / 8 with d = -a.
  CHECK(std::abs(checks.rows[0][1]) < 1e-12);
  CHECK(std::abs(checks.rows[0][2] - 0.25) < 1e-12);
  CHECK(std::abs(checks.rows[0][3] - 0.03125) < 1e-10);
  CHECK(checks.rows[0][4] < 1e-6);
  CHECK(checks.rows[0][7] < 1e-6);
  const CsvTable state = read_csv((vac / "vacuum_state.csv").string());
  CHECK(state.rows.size() == 256);
  const json m = manifest_in(vac);
  CHECK(m["outputs"].size() == 2);
  CHECK(m["outputs"]["vacuum_state.csv"] == sha256_file((vac / "vacuum_state.csv").string()));
}

TEST_CASE("evolve writes a normalized state with its hydrodynamic view") {
  const fs::path dir = fresh_dir("evolve");
  REQUIRE(run("evolve --model harmonic --steps 50 --out-dir " + dir.string()) == 0);
  const CsvTable state = read_csv((dir / "state.csv").string());
  const CsvTable madelung = read_csv((dir / "madelung.csv").string());
  REQUIRE(state.rows.size() == 256);
  REQUIRE(madelung.header == std::vector<std::string>{"x", "rho", "S", "v"});
  double mass_total = 0.0;
  const double dx = state.rows[1][0] - state.rows[0][0];
  for (std::size_t i = 0; i < state.rows.size(); ++i) {
    const double re = state.rows[i][1], im = state.rows[i][2];
    CHECK(std::abs(madelung.rows[i][1] - (re * re + im * im)) < 1e-12);
    mass_total += madelung.rows[i][1] * dx;
  }
  CHECK(std::abs(mass_total - 1.0) < 1e-9);
  const json m = manifest_in(dir);
  CHECK(m["outputs"]["state.csv"] == sha256_file((dir / "state.csv").string()));
  CHECK(m["outputs"]["madelung.csv"] == sha256_file((dir / "madelung.csv").string()));
}

TEST_CASE("bohm vq output stays real for a real canonical state") {
  const fs::path dir = fresh_dir("bohmvq");
  REQUIRE(run("bohm --model harmonic --mode vq --out-dir " + dir.string()) == 0);
  const CsvTable vq = read_csv((dir / "vq.csv").string());
  REQUIRE(vq.header == std::vector<std::string>{"x", "vq_re", "vq_im", "masked", "resolvable"});
  REQUIRE(vq.rows.size() == 256);
  std::size_t unmasked = 0;
  for (const auto& row : vq.rows) {
    if (row[3] == 0.0 && row[4] == 1.0) {
      ++unmasked;
      CHECK(std::abs(row[2]) < 1e-9);
    }
  }
  CHECK(unmasked > 100);
}

TEST_CASE("ergodicity histogram matches its recorded step count") {
  const fs::path dir = fresh_dir("ergodicity");
  REQUIRE(run("ergodicity --steps 20000 --burn-in 1000 --bins 16 --dt 0.01 --seed 1 --out-dir " +
              dir.string()) == 0);
  const CsvTable hist = read_csv((dir / "histogram.csv").string());
  REQUIRE(hist.rows.size() == 16);
  double count = 0.0;
  for (const auto& row : hist.rows) count += row[2];
  CHECK(count == 19000.0);
  const CsvTable summary = read_csv((dir / "ergodicity_summary.csv").string());
  CHECK(summary.rows[0][0] < 0.2);
  CHECK(manifest_in(dir)["seed"] == 1);
}

TEST_CASE("thread cap and nested output directories are honored") {
  const fs::path dir = fresh_dir("nested") / "a" / "b";
  REQUIRE(run("spectrum --threads 2 --out-dir " + dir.string()) == 0);
  CHECK(fs::exists(dir / "spectrum.csv"));
  const json m = manifest_in(dir);
  CHECK(m["config"]["threads"] == 2);
  CHECK(m["config"]["out-dir"] == dir.string());
}
