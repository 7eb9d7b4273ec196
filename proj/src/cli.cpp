#include "mockq/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mockq/bohm.hpp"
#include "mockq/csv.hpp"
#include "mockq/error.hpp"
#include "mockq/hydro.hpp"
#include "mockq/lv.hpp"
#include "mockq/manifest.hpp"
#include "mockq/spectral.hpp"
#include "mockq/stochastic.hpp"
#include "mockq/variety.hpp"
#include "mockq/version.hpp"
#include "mockq/wavefunction.hpp"

namespace mockq {
namespace {

using nlohmann::json;

const std::vector<std::string> kTopCommands = {"spectrum", "evolve", "bohm",       "lv",   "langevin",
                                               "msr",      "hydro",  "ergodicity", "variety"};
const std::vector<std::string> kLvChildren = {"classical", "mock", "vacuum"};
const std::vector<std::string> kHydroChildren = {"residual", "scaling"};

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

std::string json_scalar_to_token(const json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) return v.dump();
  throw CLI::ValidationError("--config", "key '" + key + "' must be a scalar (flat JSON object)");
}

// Loads the config file and splices its entries, as --key=value tokens, right
// after the subcommand words. Keys already present on the command line are
// skipped, so explicit flags win.
std::vector<std::string> splice_config(std::vector<std::string> tokens) {
  std::optional<std::string> config_path;
  std::vector<std::string> stripped;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] == "--config") {
      if (i + 1 >= tokens.size()) throw CLI::ValidationError("--config", "expected a file path");
      config_path = tokens[i + 1];
      ++i;
    } else if (tokens[i].rfind("--config=", 0) == 0) {
      config_path = tokens[i].substr(9);
    } else {
      stripped.push_back(tokens[i]);
    }
  }
  if (!config_path) return stripped;

  std::ifstream f(*config_path, std::ios::binary);
  require(f.good(), "io_not_found", *config_path);
  json cfg;
  try {
    f >> cfg;
  } catch (const json::exception& e) {
    throw CLI::ValidationError("--config", std::string("not valid JSON: ") + e.what());
  }
  if (!cfg.is_object()) throw CLI::ValidationError("--config", "expected a flat JSON object");

  std::size_t insert_at = 0;
  if (!stripped.empty() && contains(kTopCommands, stripped[0])) {
    insert_at = 1;
    if (stripped[0] == "lv" && stripped.size() > 1 && contains(kLvChildren, stripped[1]))
      insert_at = 2;
    if (stripped[0] == "hydro" && stripped.size() > 1 && contains(kHydroChildren, stripped[1]))
      insert_at = 2;
  }

  std::vector<std::string> injected;
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    const std::string flag = "--" + it.key();
    bool overridden = false;
    for (std::size_t i = insert_at; i < stripped.size(); ++i) {
      if (stripped[i] == flag || stripped[i].rfind(flag + "=", 0) == 0) {
        overridden = true;
        break;
      }
    }
    if (!overridden) injected.push_back(flag + "=" + json_scalar_to_token(it.value(), it.key()));
  }
  stripped.insert(stripped.begin() + static_cast<std::ptrdiff_t>(insert_at), injected.begin(),
                  injected.end());
  return stripped;
}

const CLI::Validator PowerOfTwo(
    [](std::string& s) -> std::string {
      char* end = nullptr;
      const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
      if (end == s.c_str() || *end != '\0' || v < 8 || (v & (v - 1)) != 0)
        return "expected a power of two >= 8, got '" + s + "'";
      return {};
    },
    "POW2");

struct GridOpts {
  double x_min = -8.0;
  double x_max = 8.0;
  std::size_t n = 256;
};

void add_grid_options(CLI::App* cmd, GridOpts& g) {
  cmd->add_option("--x-min", g.x_min, "left edge of the spatial window");
  cmd->add_option("--x-max", g.x_max, "right edge of the spatial window");
  cmd->add_option("--n", g.n, "grid points")->check(PowerOfTwo);
}

Grid1D make_grid(const GridOpts& g) {
  if (!(g.x_max > g.x_min))
    throw CLI::ValidationError("--x-max", "window must satisfy x-max > x-min");
  return Grid1D{g.x_min, g.x_max, g.n};
}

void echo_grid(json& j, const GridOpts& g) {
  j["x-min"] = g.x_min;
  j["x-max"] = g.x_max;
  j["n"] = g.n;
}

struct ModelOpts {
  std::string model = "harmonic-lv";
  double mass = 1.0;
  double omega = 1.0;
  double a = 1.0;
  double d = 1.0;
};

void add_model_options(CLI::App* cmd, ModelOpts& m) {
  cmd->add_option("--model", m.model, "harmonic-lv (default) or harmonic (canonical oscillator)")
      ->check(CLI::IsMember({"harmonic", "harmonic-lv"}));
  cmd->add_option("--mass", m.mass, "particle mass (harmonic model)")->check(CLI::PositiveNumber);
  cmd->add_option("--omega", m.omega, "oscillator frequency (harmonic model)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--a", m.a, "prey rate a (harmonic-lv model)")->check(CLI::PositiveNumber);
  cmd->add_option("--d", m.d, "predator rate d (harmonic-lv model)")->check(CLI::PositiveNumber);
}

HamiltonianSpec make_spec(const ModelOpts& m, const Grid1D& grid) {
  if (m.model == "harmonic-lv") return HarmonicLV{m.a, m.d};
  std::vector<double> V(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    V[i] = 0.5 * m.mass * m.omega * m.omega * x * x;
  }
  return Canonical{m.mass, V};
}

void echo_model(json& j, const ModelOpts& m) {
  j["model"] = m.model;
  if (m.model == "harmonic") {
    j["mass"] = m.mass;
    j["omega"] = m.omega;
  } else {
    j["a"] = m.a;
    j["d"] = m.d;
  }
}

// Mass, frequency, and energy offset of the model's analytic eigensystem.
void model_eigensystem(const ModelOpts& m, double& mass, double& omega, double& offset) {
  if (m.model == "harmonic-lv") {
    mass = 1.0 / m.d;
    omega = std::sqrt(m.a * m.d);
    offset = m.a + m.d;
  } else {
    mass = m.mass;
    omega = m.omega;
    offset = 0.0;
  }
}

WaveFunction mix_state(const ModelOpts& m, const std::vector<double>& mix, MockPlanck hbar,
                       const Grid1D& grid) {
  if (mix.empty()) throw CLI::ValidationError("--mix", "needs at least one coefficient");
  double mass, omega, offset;
  model_eigensystem(m, mass, omega, offset);
  std::vector<cdouble> acc(grid.n, 0.0);
  for (std::size_t j = 0; j < mix.size(); ++j) {
    if (mix[j] == 0.0) continue;
    const WaveFunction phi = hermite_eigenstate(static_cast<int>(j), mass, omega, hbar, grid);
    for (std::size_t i = 0; i < grid.n; ++i) acc[i] += mix[j] * phi.psi[i];
  }
  return WaveFunction(grid, hbar, std::move(acc)).normalized();
}

std::uint64_t resolve_seed(const CLI::Option* opt, std::uint64_t flag_value) {
  if (opt != nullptr && opt->count() > 0) return flag_value;
  if (const char* env = std::getenv("MOCKQ_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    require(end != env && *end == '\0', "bad_argument",
            std::string("MOCKQ_SEED is not an unsigned integer: ") + env);
    return v;
  }
  return 0;
}

struct RunResult {
  std::string subcommand;
  json config = json::object();
  std::uint64_t seed = 0;
  std::vector<std::string> outputs;  // file names inside out_dir
};

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void write_state_csv(const WaveFunction& psi, const std::string& path) {
  CsvWriter csv({"x", "re_psi", "im_psi"});
  for (std::size_t i = 0; i < psi.grid.n; ++i)
    csv.add_row({psi.grid.x(i), psi.psi[i].real(), psi.psi[i].imag()});
  csv.write(path);
}

void write_madelung_csv(const WaveFunction& psi, double mass, const std::string& path) {
  const MadelungFields mf = to_madelung(psi, mass);
  CsvWriter csv({"x", "rho", "S", "v"});
  for (std::size_t i = 0; i < psi.grid.n; ++i)
    csv.add_row({psi.grid.x(i), mf.rho[i], mf.S[i], mf.v[i]});
  csv.write(path);
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> raw(argv + 1, argv + argc);
  const auto t_start = std::chrono::steady_clock::now();

  CLI::App app{"mockq: spectra, quantum potentials, guided trajectories, Lotka-Volterra\n"
               "flows, stochastic paths, and hydrodynamic diagnostics on 1D grids"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  auto threads = std::make_shared<unsigned>(std::max(1u, std::thread::hardware_concurrency()));
  app.add_option("--threads", *threads, "worker-thread cap")->check(CLI::PositiveNumber);

  auto result = std::make_shared<std::optional<RunResult>>();
  auto out_dir = std::make_shared<std::string>(".");

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out-dir", *out_dir, "output directory (created if missing)");
  };

  // ---- spectrum -----------------------------------------------------------
  {
    CLI::App* cmd = app.add_subcommand("spectrum", "lowest eigenpairs of a discretized model");
    cmd->fallthrough();
    struct Opts {
      ModelOpts mo;
      GridOpts go;
      double hbar = 1.0;
      std::size_t levels = 5;
    };
    auto o = std::make_shared<Opts>();
    add_model_options(cmd, o->mo);
    add_grid_options(cmd, o->go);
    add_common(cmd);
    cmd->add_option("--hbar", o->hbar, "mock Planck constant")->check(CLI::PositiveNumber);
    cmd->add_option("--levels", o->levels, "number of eigenpairs")->check(CLI::PositiveNumber);
    cmd->callback([o, out_dir, result] {
      const Grid1D grid = make_grid(o->go);
      const HamiltonianSpec spec = make_spec(o->mo, grid);
      const Spectrum s = eigensolve(discretize(spec, grid, MockPlanck(o->hbar)), o->levels);
      CsvWriter csv({"n", "re_E", "im_E", "residual"});
      for (std::size_t i = 0; i < s.pairs.size(); ++i)
        csv.add_row({static_cast<double>(i), s.pairs[i].energy.real(), s.pairs[i].energy.imag(),
                     s.pairs[i].residual});
      std::filesystem::create_directories(*out_dir);
      csv.write(join_path(*out_dir, "spectrum.csv"));
      RunResult r;
      r.subcommand = "spectrum";
      echo_model(r.config, o->mo);
      echo_grid(r.config, o->go);
      r.config["hbar"] = o->hbar;
      r.config["levels"] = o->levels;
      r.outputs = {"spectrum.csv"};
      *result = r;
    });
  }

  // ---- evolve -------------------------------------------------------------
  {
    CLI::App* cmd = app.add_subcommand("evolve", "split-step propagation of an eigenstate mix");
    cmd->fallthrough();
    struct Opts {
      ModelOpts mo;
      GridOpts go;
      std::vector<double> mix = {1.0};
      double hbar = 1.0;
      // Small enough for the split-step stability bound on the default grid.
      double dt = 5e-5;
      std::size_t steps = 200;
    };
    auto o = std::make_shared<Opts>();
    add_model_options(cmd, o->mo);
    add_grid_options(cmd, o->go);
    add_common(cmd);
    cmd->add_option("--hbar", o->hbar, "mock Planck constant")->check(CLI::PositiveNumber);
    cmd->add_option("--mix", o->mix, "eigenstate coefficients c0,c1,...")->delimiter(',');
    cmd->add_option("--dt", o->dt, "time step")->check(CLI::PositiveNumber);
    cmd->add_option("--steps", o->steps, "number of steps")->check(CLI::PositiveNumber);
    cmd->callback([o, out_dir, result] {
      const Grid1D grid = make_grid(o->go);
      const HamiltonianSpec spec = make_spec(o->mo, grid);
      const WaveFunction psi0 = mix_state(o->mo, o->mix, MockPlanck(o->hbar), grid);
      const EvolveResult ev = split_step_evolve(psi0, spec, o->dt, o->steps);
      std::filesystem::create_directories(*out_dir);
      write_state_csv(ev.psi, join_path(*out_dir, "state.csv"));
      write_madelung_csv(ev.psi, mass_of(spec), join_path(*out_dir, "madelung.csv"));
      RunResult r;
      r.subcommand = "evolve";
      echo_model(r.config, o->mo);
      echo_grid(r.config, o->go);
      r.config["hbar"] = o->hbar;
      r.config["mix"] = o->mix;
      r.config["dt"] = o->dt;
      r.config["steps"] = o->steps;
      r.outputs = {"state.csv", "madelung.csv"};
      *result = r;
    });
  }

  // ---- bohm ---------------------------------------------------------------
  {
    CLI::App* cmd = app.add_subcommand("bohm", "quantum potential or guided trajectories");
    cmd->fallthrough();
    struct Opts {
      ModelOpts mo;
      GridOpts go;
      std::vector<double> mix = {1.0};
      std::string mode = "vq";
      double hbar = 1.0;
      double dt = 0.01;
      std::size_t walkers = 256;
      std::size_t steps = 200;
      std::size_t stride = 20;
      std::uint64_t seed = 0;
    };
    auto o = std::make_shared<Opts>();
    add_model_options(cmd, o->mo);
    add_grid_options(cmd, o->go);
    add_common(cmd);
    cmd->add_option("--hbar", o->hbar, "mock Planck constant")->check(CLI::PositiveNumber);
    cmd->add_option("--mix", o->mix, "eigenstate coefficients c0,c1,...")->delimiter(',');
    cmd->add_option("--mode", o->mode, "vq or trajectories")
        ->check(CLI::IsMember({"vq", "trajectories"}));
    cmd->add_option("--walkers", o->walkers, "ensemble size")
        ->check(CLI::Range(std::size_t{100}, std::size_t{10000000}));
    cmd->add_option("--dt", o->dt, "time step")->check(CLI::PositiveNumber);
    cmd->add_option("--steps", o->steps, "number of steps")->check(CLI::PositiveNumber);
    cmd->add_option("--stride", o->stride, "steps between trajectory snapshots")
        ->check(CLI::PositiveNumber);
    const CLI::Option* seed_opt = cmd->add_option("--seed", o->seed, "ensemble seed");
    cmd->callback([o, out_dir, result, seed_opt] {
      const Grid1D grid = make_grid(o->go);
      const HamiltonianSpec spec = make_spec(o->mo, grid);
      const MockPlanck hbar(o->hbar);
      const WaveFunction psi0 = mix_state(o->mo, o->mix, hbar, grid);
      std::filesystem::create_directories(*out_dir);
      RunResult r;
      r.subcommand = "bohm";
      echo_model(r.config, o->mo);
      echo_grid(r.config, o->go);
      r.config["hbar"] = o->hbar;
      r.config["mix"] = o->mix;
      r.config["mode"] = o->mode;
      if (o->mode == "vq") {
        const QuantumPotentialField vq = quantum_potential_general(psi0, spec);
        CsvWriter csv({"x", "vq_re", "vq_im", "masked", "resolvable"});
        for (std::size_t i = 0; i < grid.n; ++i)
          csv.add_row({grid.x(i), vq.values[i].real(), vq.values[i].imag(),
                       vq.valid[i] ? 0.0 : 1.0, vq.resolvable[i] ? 1.0 : 0.0});
        csv.write(join_path(*out_dir, "vq.csv"));
        r.outputs = {"vq.csv"};
      } else {
        const std::uint64_t use_seed = resolve_seed(seed_opt, o->seed);
        double mass, omega, offset;
        model_eigensystem(o->mo, mass, omega, offset);
        std::vector<WaveFunction> basis;
        std::vector<double> energies;
        double nrm = 0.0;
        for (double c : o->mix) nrm += c * c;
        nrm = std::sqrt(nrm);
        for (std::size_t j = 0; j < o->mix.size(); ++j) {
          basis.push_back(hermite_eigenstate(static_cast<int>(j), mass, omega, hbar, grid));
          energies.push_back(offset + o->hbar * omega * (static_cast<double>(j) + 0.5));
        }
        auto psi_at = [o, grid, hbar, basis, energies, nrm](double t) {
          std::vector<cdouble> acc(grid.n, 0.0);
          for (std::size_t j = 0; j < o->mix.size(); ++j) {
            if (o->mix[j] == 0.0) continue;
            const cdouble phase = std::exp(cdouble(0.0, -energies[j] * t / hbar));
            for (std::size_t i = 0; i < grid.n; ++i)
              acc[i] += (o->mix[j] / nrm) * phase * basis[j].psi[i];
          }
          return WaveFunction(grid, hbar, std::move(acc));
        };
        TrajectoryEnsemble ens = sample_born_ensemble(psi0, o->walkers, use_seed);
        CsvWriter csv({"t", "walker_id", "Q"});
        auto emit = [&] {
          for (std::size_t w = 0; w < ens.positions.size(); ++w)
            csv.add_row({ens.time, static_cast<double>(w), ens.positions[w]});
        };
        emit();
        std::size_t done = 0;
        while (done < o->steps) {
          const std::size_t block = std::min(o->stride, o->steps - done);
          ens = propagate_trajectories(ens, psi_at, mass, o->dt, block);
          done += block;
          emit();
        }
        csv.write(join_path(*out_dir, "trajectories.csv"));
        r.config["walkers"] = o->walkers;
        r.config["dt"] = o->dt;
        r.config["steps"] = o->steps;
        r.config["stride"] = o->stride;
        r.config["seed"] = use_seed;
        r.seed = use_seed;
        r.outputs = {"trajectories.csv"};
      }
      *result = r;
    });
  }

  // ---- lv -----------------------------------------------------------------
  {
    CLI::App* lv = app.add_subcommand("lv", "Lotka-Volterra flows");
    lv->require_subcommand(1);
    lv->fallthrough();

    {
      CLI::App* cmd = lv->add_subcommand("classical", "population ODE with canonical view");
      cmd->fallthrough();
      struct Opts {
        double a = 1.0, b = 1.0, c = 1.0, d = 1.0;
        double n1 = 1.5, n2 = 1.0;
        double t_end = 20.0, dt = 1e-3;
        std::size_t stride = 10;
      };
      auto o = std::make_shared<Opts>();
      add_common(cmd);
      cmd->add_option("--a", o->a, "prey growth rate")->check(CLI::PositiveNumber);
      cmd->add_option("--b", o->b, "predation rate")->check(CLI::PositiveNumber);
      cmd->add_option("--c", o->c, "predator growth rate")->check(CLI::PositiveNumber);
      cmd->add_option("--d", o->d, "predator death rate")->check(CLI::PositiveNumber);
      cmd->add_option("--n1", o->n1, "initial prey population")->check(CLI::PositiveNumber);
      cmd->add_option("--n2", o->n2, "initial predator population")->check(CLI::PositiveNumber);
      cmd->add_option("--t-end", o->t_end, "integration horizon")->check(CLI::PositiveNumber);
      cmd->add_option("--dt", o->dt, "time step")->check(CLI::PositiveNumber);
      cmd->add_option("--stride", o->stride, "samples between output rows")
          ->check(CLI::PositiveNumber);
      cmd->callback([o, out_dir, result] {
        const LVParams params(o->a, o->b, o->c, o->d);
        const std::vector<LVSample> samples =
            lv_integrate(params, LVState{o->n1, o->n2}, o->t_end, o->dt);
        CsvWriter csv({"t", "N1", "N2", "Q", "P", "H"});
        for (std::size_t i = 0; i < samples.size(); i += o->stride) {
          const LVSample& s = samples[i];
          csv.add_row({s.t, s.N1, s.N2, s.Q, s.P, s.H});
        }
        if ((samples.size() - 1) % o->stride != 0) {
          const LVSample& s = samples.back();
          csv.add_row({s.t, s.N1, s.N2, s.Q, s.P, s.H});
        }
        std::filesystem::create_directories(*out_dir);
        csv.write(join_path(*out_dir, "lv.csv"));
        RunResult r;
        r.subcommand = "lv classical";
        r.config = {{"a", o->a},   {"b", o->b},   {"c", o->c},         {"d", o->d},
                    {"n1", o->n1}, {"n2", o->n2}, {"t-end", o->t_end}, {"dt", o->dt},
                    {"stride", o->stride}};
        r.outputs = {"lv.csv"};
        *result = r;
      });
    }

    {
      CLI::App* cmd =
          lv->add_subcommand("mock", "quadratic mock-quantum flow about the fixed point");
      cmd->fallthrough();
      struct Opts {
        double a = 4.0, d = 1.0, hbar = 1.0;
        double q0 = 0.1, p0 = 0.0;
        double t_end = 20.0, dt = 1e-2;
        std::string mode = "literal";
        std::size_t stride = 1;
      };
      auto o = std::make_shared<Opts>();
      add_common(cmd);
      cmd->add_option("--a", o->a, "prey rate")->check(CLI::PositiveNumber);
      cmd->add_option("--d", o->d, "predator rate")->check(CLI::PositiveNumber);
      cmd->add_option("--hbar", o->hbar, "mock Planck constant")->check(CLI::PositiveNumber);
      cmd->add_option("--q0", o->q0, "initial Q displacement");
      cmd->add_option("--p0", o->p0, "initial P displacement");
      cmd->add_option("--t-end", o->t_end, "integration horizon")->check(CLI::PositiveNumber);
      cmd->add_option("--dt", o->dt, "sample spacing")->check(CLI::PositiveNumber);
      cmd->add_option("--mode", o->mode, "literal or consistent quantum-potential curvature")
          ->check(CLI::IsMember({"literal", "consistent"}));
      cmd->add_option("--stride", o->stride, "samples between output rows")
          ->check(CLI::PositiveNumber);
      cmd->callback([o, out_dir, result] {
        const VqMode vq_mode = o->mode == "literal" ? VqMode::Literal : VqMode::Consistent;
        const std::vector<QuadraticFlowSample> samples = mock_quadratic_flow(
            o->a, o->d, MockPlanck(o->hbar), o->q0, o->p0, o->t_end, o->dt, vq_mode);
        CsvWriter csv({"t", "Q", "P"});
        for (std::size_t i = 0; i < samples.size(); i += o->stride)
          csv.add_row({samples[i].t, samples[i].Q, samples[i].P});
        if ((samples.size() - 1) % o->stride != 0)
          csv.add_row({samples.back().t, samples.back().Q, samples.back().P});
        std::filesystem::create_directories(*out_dir);
        csv.write(join_path(*out_dir, "lv_mock.csv"));
        RunResult r;
        r.subcommand = "lv mock";
        r.config = {{"a", o->a},         {"d", o->d},     {"hbar", o->hbar},
                    {"q0", o->q0},       {"p0", o->p0},   {"t-end", o->t_end},
                    {"dt", o->dt},       {"mode", o->mode}, {"stride", o->stride}};
        r.outputs = {"lv_mock.csv"};
        *result = r;
      });
    }

    {
      CLI::App* cmd = lv->add_subcommand("vacuum", "exponential vacuum family of the full flow");
      cmd->fallthrough();
      struct Opts {
        int n = 0;
        double a = 1.0, hbar = 0.5, phi = 0.0, d = 0.0;
        GridOpts go{-1.0, 1.0, 256};
      };
      auto o = std::make_shared<Opts>();
      add_common(cmd);
      cmd->add_option("--vacuum-n", o->n, "family index");
      cmd->add_option("--a", o->a, "prey rate")->check(CLI::PositiveNumber);
      cmd->add_option("--hbar", o->hbar, "mock Planck constant")->check(CLI::PositiveNumber);
      cmd->add_option("--phi", o->phi, "global phase");
      const CLI::Option* d_opt = cmd->add_option("--d", o->d, "predator rate (must equal -a)");
      add_grid_options(cmd, o->go);
      cmd->callback([o, out_dir, result, d_opt] {
        const std::optional<double> d_in =
            d_opt->count() > 0 ? std::optional<double>(o->d) : std::nullopt;
        const FullLVVacuum vac(o->n, o->a, MockPlanck(o->hbar), o->phi, d_in);
        const Grid1D window = make_grid(o->go);
        CsvWriter state({"x", "re_psi", "im_psi"});
        for (std::size_t i = 0; i < window.n; ++i) {
          const cdouble v = vac.psi(window.x(i));
          state.add_row({window.x(i), v.real(), v.imag()});
        }
        const FullLVVqConstants consts =
            full_lv_vq_constants(o->n, o->a, -o->a, MockPlanck(o->hbar));
        const FullLVVqCheck check = full_lv_vq_constancy(vac, -o->a, window);
        CsvWriter checks({"n", "re_E", "im_E", "quadratic_vq", "quadratic_deviation", "lv_vq_re",
                          "lv_vq_im", "lv_deviation"});
        checks.add_row({static_cast<double>(o->n), vac.E().real(), vac.E().imag(),
                        consts.quadratic, check.quadratic_deviation, consts.lv_exact.real(),
                        consts.lv_exact.imag(), check.lv_deviation});
        std::filesystem::create_directories(*out_dir);
        state.write(join_path(*out_dir, "vacuum_state.csv"));
        checks.write(join_path(*out_dir, "vacuum_checks.csv"));
        RunResult r;
        r.subcommand = "lv vacuum";
        r.config = {{"vacuum-n", o->n}, {"a", o->a}, {"hbar", o->hbar}, {"phi", o->phi}};
        echo_grid(r.config, o->go);
        r.outputs = {"vacuum_state.csv", "vacuum_checks.csv"};
        *result = r;
      });
    }
  }

  // ---- langevin -----------------------------------------------------------
  {
    CLI::App* cmd = app.add_subcommand("langevin", "overdamped path with linear restoring drift");
    cmd->fallthrough();
    struct Opts {
      double lambda = 1.0, k = 1.0, kappa = 1.0, phi0 = 0.0, dt = 1e-3;
      std::size_t steps = 10000, stride = 10;
      std::uint64_t seed = 0;
    };
    auto o = std::make_shared<Opts>();
    add_common(cmd);
    cmd->add_option("--lambda", o->lambda, "mobility")->check(CLI::PositiveNumber);
    cmd->add_option("--k", o->k, "noise strength")->check(CLI::NonNegativeNumber);
    cmd->add_option("--kappa", o->kappa, "restoring rate, drift F = -kappa*phi")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--phi0", o->phi0, "initial field value");
    cmd->add_option("--dt", o->dt, "time step")->check(CLI::PositiveNumber);
    cmd->add_option("--steps", o->steps, "number of steps")->check(CLI::PositiveNumber);
    cmd->add_option("--stride", o->stride, "samples between output rows")
        ->check(CLI::PositiveNumber);
    const CLI::Option* seed_opt = cmd->add_option("--seed", o->seed, "noise seed");
    cmd->callback([o, out_dir, result, seed_opt] {
      const std::uint64_t use_seed = resolve_seed(seed_opt, o->seed);
      const double kap = o->kappa;
      const LangevinSpec spec(
          o->lambda, o->k, [kap](double x) { return -kap * x; }, use_seed);
      const DiscretePath path = langevin_integrate(spec, o->phi0, o->dt, o->steps);
      CsvWriter csv({"t", "phi"});
      for (std::size_t i = 0; i < path.phi.size(); i += o->stride)
        csv.add_row({static_cast<double>(i) * o->dt, path.phi[i]});
      if ((path.phi.size() - 1) % o->stride != 0)
        csv.add_row({static_cast<double>(path.phi.size() - 1) * o->dt, path.phi.back()});
      std::filesystem::create_directories(*out_dir);
      csv.write(join_path(*out_dir, "path.csv"));
      RunResult r;
      r.subcommand = "langevin";
      r.config = {{"lambda", o->lambda}, {"k", o->k},         {"kappa", o->kappa},
                  {"phi0", o->phi0},     {"dt", o->dt},       {"steps", o->steps},
                  {"stride", o->stride}, {"seed", use_seed}};
      r.seed = use_seed;
      r.outputs = {"path.csv"};
      *result = r;
    });
  }

  // ---- msr ----------------------------------------------------------------
  {
    CLI::App* cmd = app.add_subcommand("msr", "response-field action of a tabulated path");
    cmd->fallthrough();
    struct Opts {
      std::string input;
      double lambda = 1.0, k = 1.0, kappa = 1.0;
    };
    auto o = std::make_shared<Opts>();
    add_common(cmd);
    cmd->add_option("--input", o->input, "csv with t,phi,phi_tilde columns")->required();
    cmd->add_option("--lambda", o->lambda, "mobility")->check(CLI::PositiveNumber);
    cmd->add_option("--k", o->k, "noise strength")->check(CLI::NonNegativeNumber);
    cmd->add_option("--kappa", o->kappa, "restoring rate, drift F = -kappa*phi")
        ->check(CLI::NonNegativeNumber);
    cmd->callback([o, out_dir, result] {
      const CsvTable table = read_csv(o->input);
      require(table.header.size() >= 3 && table.header[0] == "t" && table.header[1] == "phi" &&
                  table.header[2] == "phi_tilde",
              "bad_argument", "expected header t,phi,phi_tilde in " + o->input);
      require(table.rows.size() >= 3, "bad_argument", "need at least 3 path samples");
      DiscretePath path;
      path.dt = table.rows[1][0] - table.rows[0][0];
      require(path.dt > 0, "bad_argument", "time column must increase");
      for (std::size_t i = 0; i < table.rows.size(); ++i) {
        if (i >= 2) {
          const double step = table.rows[i][0] - table.rows[i - 1][0];
          require(std::abs(step - path.dt) <= 1e-9 * path.dt, "bad_argument",
                  "time column must be uniform");
        }
        path.phi.push_back(table.rows[i][1]);
        path.phi_tilde.push_back(table.rows[i][2]);
      }
      const double kap = o->kappa;
      const LangevinSpec spec(
          o->lambda, o->k, [kap](double x) { return -kap * x; }, 0);
      const double action = msr_action(path, spec);
      CsvWriter csv({"action"});
      csv.add_row({action});
      std::filesystem::create_directories(*out_dir);
      csv.write(join_path(*out_dir, "action.csv"));
      RunResult r;
      r.subcommand = "msr";
      r.config = {{"input", o->input}, {"lambda", o->lambda}, {"k", o->k}, {"kappa", o->kappa}};
      r.outputs = {"action.csv"};
      *result = r;
    });
  }

  // ---- ergodicity ---------------------------------------------------------
  {
    CLI::App* cmd =
        app.add_subcommand("ergodicity", "osmotic diffusion scored against the Born law");
    cmd->fallthrough();
    struct Opts {
      ModelOpts mo;
      GridOpts go;
      std::vector<double> mix = {1.0};
      double hbar = 1.0, dt = 0.01;
      std::size_t steps = 200000, burn_in = 10000, bins = 64;
      std::uint64_t seed = 0;
    };
    auto o = std::make_shared<Opts>();
    add_model_options(cmd, o->mo);
    add_grid_options(cmd, o->go);
    add_common(cmd);
    cmd->add_option("--hbar", o->hbar, "mock Planck constant")->check(CLI::PositiveNumber);
    cmd->add_option("--mix", o->mix, "eigenstate coefficients c0,c1,...")->delimiter(',');
    cmd->add_option("--dt", o->dt, "time step")->check(CLI::PositiveNumber);
    cmd->add_option("--steps", o->steps, "number of recorded steps")->check(CLI::PositiveNumber);
    cmd->add_option("--burn-in", o->burn_in, "steps discarded before recording");
    cmd->add_option("--bins", o->bins, "histogram bins")
        ->check(CLI::Range(std::size_t{8}, std::size_t{4096}));
    const CLI::Option* seed_opt = cmd->add_option("--seed", o->seed, "walker seed");
    cmd->callback([o, out_dir, result, seed_opt] {
      const std::uint64_t use_seed = resolve_seed(seed_opt, o->seed);
      const Grid1D grid = make_grid(o->go);
      const WaveFunction psi = mix_state(o->mo, o->mix, MockPlanck(o->hbar), grid);
      double mass, omega, offset;
      model_eigensystem(o->mo, mass, omega, offset);
      const ErgodicityReport rep =
          born_ergodicity(psi, mass, o->dt, o->steps, o->burn_in, use_seed, o->bins);
      CsvWriter hist({"bin_left", "bin_right", "count", "born_density"});
      for (std::size_t i = 0; i < rep.count.size(); ++i)
        hist.add_row({rep.bin_left[i], rep.bin_right[i], rep.count[i], rep.born_density[i]});
      CsvWriter summary({"ks", "reflections"});
      summary.add_row({rep.ks, static_cast<double>(rep.reflections)});
      std::filesystem::create_directories(*out_dir);
      hist.write(join_path(*out_dir, "histogram.csv"));
      summary.write(join_path(*out_dir, "ergodicity_summary.csv"));
      RunResult r;
      r.subcommand = "ergodicity";
      echo_model(r.config, o->mo);
      echo_grid(r.config, o->go);
      r.config["hbar"] = o->hbar;
      r.config["mix"] = o->mix;
      r.config["dt"] = o->dt;
      r.config["steps"] = o->steps;
      r.config["burn-in"] = o->burn_in;
      r.config["bins"] = o->bins;
      r.config["seed"] = use_seed;
      r.seed = use_seed;
      r.outputs = {"histogram.csv", "ergodicity_summary.csv"};
      *result = r;
    });
  }

  // ---- hydro --------------------------------------------------------------
  {
    CLI::App* hydro = app.add_subcommand("hydro", "hydrodynamic diagnostics");
    hydro->require_subcommand(1);
    hydro->fallthrough();

    {
      CLI::App* cmd = hydro->add_subcommand("residual", "Euler and continuity residuals of a run");
      cmd->fallthrough();
      struct Opts {
        ModelOpts mo;
        GridOpts go;
        std::vector<double> mix = {1.0, 1.0};
        // Small enough for the split-step stability bound on the default grid.
        double hbar = 1.0, dt = 5e-5;
        std::size_t steps = 100;
      };
      auto o = std::make_shared<Opts>();
      add_model_options(cmd, o->mo);
      add_grid_options(cmd, o->go);
      add_common(cmd);
      cmd->add_option("--hbar", o->hbar, "mock Planck constant")->check(CLI::PositiveNumber);
      cmd->add_option("--mix", o->mix, "eigenstate coefficients c0,c1,...")->delimiter(',');
      cmd->add_option("--dt", o->dt, "time step")->check(CLI::PositiveNumber);
      cmd->add_option("--steps", o->steps, "steps before the measurement window")
          ->check(CLI::PositiveNumber);
      cmd->callback([o, out_dir, result] {
        const Grid1D grid = make_grid(o->go);
        const HamiltonianSpec spec = make_spec(o->mo, grid);
        const double mass = mass_of(spec);
        const WaveFunction psi0 = mix_state(o->mo, o->mix, MockPlanck(o->hbar), grid);
        WaveFunction psi = split_step_evolve(psi0, spec, o->dt, o->steps).psi;
        std::vector<HydroFields> snaps;
        snaps.push_back(hydro_fields(psi, mass, static_cast<double>(o->steps) * o->dt));
        for (std::size_t extra = 1; extra <= 2; ++extra) {
          psi = split_step_evolve(psi, spec, o->dt, 1).psi;
          snaps.push_back(
              hydro_fields(psi, mass, static_cast<double>(o->steps + extra) * o->dt));
        }
        const ResidualReport euler = euler_residual(snaps, potential_values(spec, grid));
        const ResidualReport cont = continuity_residual(snaps);
        CsvWriter csv({"n", "dt", "euler_residual", "euler_scale", "continuity_residual",
                       "continuity_scale"});
        csv.add_row({static_cast<double>(o->go.n), o->dt, euler.norm, euler.scale_norm, cont.norm,
                     cont.scale_norm});
        std::filesystem::create_directories(*out_dir);
        csv.write(join_path(*out_dir, "residual.csv"));
        RunResult r;
        r.subcommand = "hydro residual";
        echo_model(r.config, o->mo);
        echo_grid(r.config, o->go);
        r.config["hbar"] = o->hbar;
        r.config["mix"] = o->mix;
        r.config["dt"] = o->dt;
        r.config["steps"] = o->steps;
        r.outputs = {"residual.csv"};
        *result = r;
      });
    }

    {
      CLI::App* cmd = hydro->add_subcommand("scaling", "structure-function exponent of a field");
      cmd->fallthrough();
      struct Opts {
        std::string input;
        double hurst = 0.0, dx = 1.0, l_min = 2.0, l_max = 256.0;
        std::size_t n = 65536, n_lags = 16;
        std::uint64_t seed = 0;
      };
      auto o = std::make_shared<Opts>();
      add_common(cmd);
      CLI::Option* input_opt =
          cmd->add_option("--input", o->input, "csv whose last column is the field");
      CLI::Option* hurst_opt =
          cmd->add_option("--hurst", o->hurst, "synthesize a fractional field with this exponent")
              ->check(CLI::Range(0.01, 0.99));
      cmd->add_option("--n", o->n, "synthesized field length")->check(PowerOfTwo);
      cmd->add_option("--dx", o->dx, "sample spacing")->check(CLI::PositiveNumber);
      cmd->add_option("--n-lags", o->n_lags, "number of separations")
          ->check(CLI::Range(std::size_t{4}, std::size_t{256}));
      cmd->add_option("--l-min", o->l_min, "smallest separation in cells")
          ->check(CLI::PositiveNumber);
      cmd->add_option("--l-max", o->l_max, "largest separation in cells")
          ->check(CLI::PositiveNumber);
      const CLI::Option* seed_opt = cmd->add_option("--seed", o->seed, "synthesis seed");
      input_opt->excludes(hurst_opt);
      cmd->callback([o, out_dir, result, input_opt, hurst_opt, seed_opt] {
        std::vector<double> field;
        std::uint64_t use_seed = 0;
        if (input_opt->count() > 0) {
          const CsvTable table = read_csv(o->input);
          require(!table.rows.empty(), "bad_argument", "no field rows in " + o->input);
          const std::size_t col = table.header.size() - 1;
          field.reserve(table.rows.size());
          for (const auto& row : table.rows) field.push_back(row[col]);
        } else if (hurst_opt->count() > 0) {
          use_seed = resolve_seed(seed_opt, o->seed);
          field = synthesize_hurst_field(o->n, o->hurst, use_seed);
        } else {
          throw CLI::RequiredError("--input or --hurst");
        }
        const ScalingFit fit = structure_scaling(field, o->dx, o->n_lags, o->l_min, o->l_max);
        CsvWriter csv({"l", "D2", "fit_value"});
        for (std::size_t i = 0; i < fit.l.size(); ++i)
          csv.add_row({fit.l[i], fit.D2[i], fit.fit_value[i]});
        CsvWriter summary({"exponent", "rms_residual"});
        summary.add_row({fit.exponent, fit.residual});
        std::filesystem::create_directories(*out_dir);
        csv.write(join_path(*out_dir, "scaling.csv"));
        summary.write(join_path(*out_dir, "scaling_summary.csv"));
        RunResult r;
        r.subcommand = "hydro scaling";
        if (input_opt->count() > 0) r.config["input"] = o->input;
        if (hurst_opt->count() > 0) {
          r.config["hurst"] = o->hurst;
          r.config["n"] = o->n;
          r.config["seed"] = use_seed;
        }
        r.config["dx"] = o->dx;
        r.config["n-lags"] = o->n_lags;
        r.config["l-min"] = o->l_min;
        r.config["l-max"] = o->l_max;
        r.seed = use_seed;
        r.outputs = {"scaling.csv", "scaling_summary.csv"};
        *result = r;
      });
    }
  }

  // ---- variety ------------------------------------------------------------
  {
    CLI::App* cmd = app.add_subcommand("variety", "distinguishability functionals");
    cmd->fallthrough();
    struct Opts {
      std::string mode = "continuum";
      std::string input;
      double sigma = 1.0, mass = 1.0, hbar = 1.0;
      GridOpts go;
      std::size_t n_samples = 4096;
      std::uint64_t seed = 0;
    };
    auto o = std::make_shared<Opts>();
    add_common(cmd);
    add_grid_options(cmd, o->go);
    cmd->add_option("--mode", o->mode, "continuum, discrete, or views")
        ->check(CLI::IsMember({"continuum", "discrete", "views"}));
    cmd->add_option("--sigma", o->sigma, "gaussian width for continuum/views modes")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--mass", o->mass, "mass in the Fisher identity")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--hbar", o->hbar, "mock Planck constant")->check(CLI::PositiveNumber);
    cmd->add_option("--input", o->input, "views csv (element_id,v1,...) for discrete mode");
    cmd->add_option("--n-samples", o->n_samples, "sampled elements in views mode")
        ->check(CLI::Range(std::size_t{64}, std::size_t{1000000}));
    const CLI::Option* seed_opt = cmd->add_option("--seed", o->seed, "sampling seed");
    cmd->callback([o, out_dir, result, seed_opt] {
      std::filesystem::create_directories(*out_dir);
      RunResult r;
      r.subcommand = "variety";
      r.config["mode"] = o->mode;
      if (o->mode == "discrete") {
        if (o->input.empty()) throw CLI::RequiredError("--input");
        const CsvTable table = read_csv(o->input);
        require(table.header.size() >= 2, "bad_argument",
                "views csv needs element_id plus at least one coordinate");
        RelationalSystem sys;
        for (const auto& row : table.rows) sys.views.emplace_back(row.begin() + 1, row.end());
        CsvWriter csv({"value"});
        csv.add_row({discrete_variety(sys)});
        csv.write(join_path(*out_dir, "variety.csv"));
        r.config["input"] = o->input;
        r.outputs = {"variety.csv"};
      } else {
        const Grid1D grid = make_grid(o->go);
        std::vector<double> rho(grid.n);
        const double norm = 1.0 / (o->sigma * std::sqrt(2.0 * M_PI));
        for (std::size_t i = 0; i < grid.n; ++i) {
          const double x = grid.x(i);
          rho[i] = norm * std::exp(-0.5 * x * x / (o->sigma * o->sigma));
        }
        echo_grid(r.config, o->go);
        r.config["sigma"] = o->sigma;
        if (o->mode == "continuum") {
          const ContinuumVariety cv = continuum_variety(rho, grid);
          const FisherIdentityReport fisher =
              variety_fisher_identity(rho, grid, o->mass, MockPlanck(o->hbar));
          CsvWriter csv({"value", "mask_fraction", "reliable", "fisher_lhs", "fisher_rhs",
                         "fisher_residual", "applicable"});
          csv.add_row({cv.value, cv.mask_fraction, cv.reliable ? 1.0 : 0.0, fisher.lhs,
                       fisher.rhs, fisher.residual, fisher.applicable ? 1.0 : 0.0});
          csv.write(join_path(*out_dir, "variety.csv"));
          r.config["mass"] = o->mass;
          r.config["hbar"] = o->hbar;
          r.outputs = {"variety.csv"};
        } else {
          const std::uint64_t use_seed = resolve_seed(seed_opt, o->seed);
          const RelationalSystem sys = density_contrast_views(rho, grid, o->n_samples, use_seed);
          CsvWriter csv({"element_id", "v1"});
          for (std::size_t i = 0; i < sys.views.size(); ++i)
            csv.add_row({static_cast<double>(i), sys.views[i][0]});
          csv.write(join_path(*out_dir, "views.csv"));
          r.config["n-samples"] = o->n_samples;
          r.config["seed"] = use_seed;
          r.seed = use_seed;
          r.outputs = {"views.csv"};
        }
      }
      *result = r;
    });
  }

  // ---- parse and dispatch -------------------------------------------------
  try {
    std::vector<std::string> tokens = splice_config(std::move(raw));
    std::reverse(tokens.begin(), tokens.end());  // CLI11 consumes from the back
    app.parse(tokens);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage_error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << e.code() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal_error: " << e.what() << "\n";
    return 1;
  }

  if (!result->has_value()) {
    std::cerr << "usage_error: no subcommand selected\n";
    return 2;
  }

  try {
    RunManifest manifest;
    manifest.subcommand = (*result)->subcommand;
    (*result)->config["threads"] = *threads;
    (*result)->config["out-dir"] = *out_dir;
    manifest.config_json = (*result)->config.dump();
    manifest.seed = (*result)->seed;
    manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    for (const std::string& name : (*result)->outputs)
      manifest.output_digests[name] = sha256_file(join_path(*out_dir, name));
    manifest.write_atomic(join_path(*out_dir, "manifest.json"));
  } catch (const Error& e) {
    std::cerr << e.code() << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace mockq
