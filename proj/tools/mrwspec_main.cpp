#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mrwspec/compare.hpp"
#include "mrwspec/density.hpp"
#include "mrwspec/io.hpp"
#include "mrwspec/mrm.hpp"
#include "mrwspec/rng.hpp"
#include "mrwspec/solver.hpp"
#include "mrwspec/spectra.hpp"

namespace fs = std::filesystem;
using namespace mrwspec;

namespace {

struct SimulateArgs {
  double gamma2 = 0.0, tau = 0.25, q = 1.0;
  int n = 0, t_steps = 0, ensemble = 1, bins = 100;
  bool log_bins = false;
  double bin_lo = 0.0, bin_hi = 0.0;
  Seed seed = 1;
  int threads = 1;
  std::string out_dir = "out", preset, config;
};

struct SolveArgs {
  double gamma2 = 0.0, tau = 0.25, q = 1.0;
  int grid = 256, sim_grid = 4096, ensemble = 2000, max_iter = 500;
  double tol = 1e-6, eps_im = 0.01, relax = 1.0;
  bool richardson = false;
  double lambda_min = 1e-2, lambda_max = 20.0;
  int lambda_points = 200;
  Seed seed = 1;
  int threads = 1;
  std::string out_dir = "out", preset, config;
};

struct CompareArgs {
  std::string sim_dir, solve_dir, out_dir = "compare_out";
  double window_lo = 0.0, window_hi = 0.0;
  std::vector<double> tails;
  std::string config;
};

// --- manifest / config loading ---------------------------------------------
// Flat "key = value" lines, '#' starts a comment; the key names mirror the
// long option names without the leading dashes. A manifest written by one run
// replays it; values fill only options the command line left unset.

void parse_config_value(const std::string& key, const std::string& raw,
                        double& out) {
  char* end = nullptr;
  out = std::strtod(raw.c_str(), &end);
  if (end == raw.c_str() || *end != '\0')
    throw std::invalid_argument("config: bad number for '" + key + "': " + raw);
}

void parse_config_value(const std::string& key, const std::string& raw,
                        int& out) {
  char* end = nullptr;
  const long v = std::strtol(raw.c_str(), &end, 10);
  if (end == raw.c_str() || *end != '\0' || v < INT_MIN || v > INT_MAX)
    throw std::invalid_argument("config: bad integer for '" + key + "': " + raw);
  out = static_cast<int>(v);
}

void parse_config_value(const std::string& key, const std::string& raw,
                        Seed& out) {
  char* end = nullptr;
  out = std::strtoull(raw.c_str(), &end, 10);
  if (end == raw.c_str() || *end != '\0')
    throw std::invalid_argument("config: bad seed for '" + key + "': " + raw);
}

void parse_config_value(const std::string& key, const std::string& raw,
                        bool& out) {
  if (raw == "true" || raw == "1")
    out = true;
  else if (raw == "false" || raw == "0")
    out = false;
  else
    throw std::invalid_argument("config: bad flag for '" + key + "': " + raw);
}

void parse_config_value(const std::string&, const std::string& raw,
                        std::string& out) {
  out = raw;
}

void parse_config_value(const std::string& key, const std::string& raw,
                        std::vector<double>& out) {
  out.clear();
  std::string token;
  std::istringstream is(raw);
  while (std::getline(is, token, ',')) {
    double v;
    parse_config_value(key, token, v);
    out.push_back(v);
  }
}

class ConfigValues {
 public:
  ConfigValues() = default;
  ConfigValues(const CLI::App& cmd, const std::string& path) : cmd_(&cmd) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("config: cannot open " + path);
    std::string line;
    while (std::getline(is, line)) {
      if (const auto hash = line.find('#'); hash != std::string::npos)
        line.erase(hash);
      const auto trim = [](const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
      };
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        if (!trim(line).empty())
          throw std::invalid_argument("config: expected key = value, got: " + line);
        continue;
      }
      kv_[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
  }

  template <class T>
  void apply(const std::string& key, T& field) {
    if (cmd_ == nullptr) return;
    known_.insert(key);
    const auto it = kv_.find(key);
    if (it == kv_.end()) return;
    const CLI::Option* opt = cmd_->get_option_no_throw("--" + key);
    if (opt != nullptr && opt->count() > 0) return;  // command line wins
    parse_config_value(key, it->second, field);
    set_.insert(key);
  }

  // did the config (not the command line) decide this key?
  bool set(const std::string& key) const { return set_.count(key) > 0; }

  // every key in the file must belong to the subcommand
  void finish() const {
    for (const auto& [k, v] : kv_)
      if (known_.count(k) == 0)
        throw std::invalid_argument("config: unknown key '" + k + "'");
  }

 private:
  const CLI::App* cmd_ = nullptr;
  std::map<std::string, std::string> kv_;
  std::set<std::string> known_;
  std::set<std::string> set_;
};

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

int cmd_simulate(const SimulateArgs& a) {
  if (a.n < 1)
    throw std::invalid_argument("simulate: --n is required and must be >= 1");
  if (a.ensemble < 1)
    throw std::invalid_argument("simulate: --ensemble must be >= 1");
  ModelParams params;
  params.gamma2 = a.gamma2;
  params.tau = a.tau;
  params.q = a.q;
  params.n = a.n;
  params.t_steps = a.t_steps;
  print_warnings(validate(params));

  std::vector<std::vector<double>> per_sample;
  std::vector<double> pooled;
  double max_clip = 0.0, max_clamp = 0.0;
  for (int s = 0; s < a.ensemble; ++s) {
    const ReturnsMatrix x =
        sample_returns(params, derive_seed(a.seed, static_cast<Seed>(s)),
                       a.threads);
    max_clip = std::max(max_clip, x.max_clipped_ratio);
    SpectrumResult spec = covariance_spectrum(x);
    max_clamp = std::max(max_clamp, spec.clamped_magnitude);
    pooled.insert(pooled.end(), spec.eigenvalues.begin(), spec.eigenvalues.end());
    per_sample.push_back(std::move(spec.eigenvalues));
  }

  BinSpec bins{a.bins, a.bin_lo, a.bin_hi, a.log_bins};
  if (a.log_bins && bins.lo <= 0.0) {
    // log bins need a positive left edge; take the smallest positive value
    double lo = 0.0;
    for (double v : pooled)
      if (v > 0.0 && (lo == 0.0 || v < lo)) lo = v;
    if (lo == 0.0)
      throw std::invalid_argument("simulate: no positive eigenvalues for log bins");
    bins.lo = lo;
    bins.hi = *std::max_element(pooled.begin(), pooled.end());
  }
  const EsdHistogram hist = esd_histogram(pooled, bins);

  const fs::path out(a.out_dir);
  HeaderMeta meta{{"gamma2", format_double(a.gamma2)},
                  {"tau", format_double(a.tau)},
                  {"q", format_double(a.q)},
                  {"n", std::to_string(a.n)},
                  {"t-steps", std::to_string(params.resolved_t_steps())},
                  {"ensemble", std::to_string(a.ensemble)},
                  {"seed", std::to_string(a.seed)},
                  {"max_clipped_ratio", format_double(max_clip)},
                  {"max_clamped_eigenvalue", format_double(max_clamp)}};
  write_eigenvalues_csv(out / "eigenvalues.csv", per_sample, meta);
  HeaderMeta hmeta = meta;
  hmeta.emplace_back("bins", std::to_string(a.bins));
  hmeta.emplace_back("log-bins", a.log_bins ? "true" : "false");
  write_histogram_csv(out / "histogram.csv", hist, hmeta);
  write_manifest(out / "manifest.cfg", "simulate",
                 {{"gamma2", format_double(a.gamma2)},
                  {"tau", format_double(a.tau)},
                  {"q", format_double(a.q)},
                  {"n", std::to_string(a.n)},
                  {"t-steps", std::to_string(params.resolved_t_steps())},
                  {"ensemble", std::to_string(a.ensemble)},
                  {"bins", std::to_string(a.bins)},
                  {"log-bins", a.log_bins ? "true" : "false"},
                  {"bin-lo", format_double(a.bin_lo)},
                  {"bin-hi", format_double(a.bin_hi)},
                  {"seed", std::to_string(a.seed)},
                  {"threads", std::to_string(a.threads)},
                  {"out-dir", a.out_dir}});
  std::cout << "simulate: " << a.ensemble << " matrices of size " << a.n
            << " -> " << (out / "eigenvalues.csv").string() << "\n";
  return 0;
}

// one solver run into `out`; returns converged/total
std::pair<int, int> solve_into(const SolveArgs& a, const fs::path& out) {
  ModelParams model;
  model.gamma2 = a.gamma2;
  model.tau = a.tau;
  model.q = a.q;
  model.n = a.grid;  // only gamma2/tau/q matter for the solver
  print_warnings(validate(model));

  UpsilonJob job;
  job.base.k_grid = Grid(a.grid);
  job.base.sim_grid = a.sim_grid;
  job.base.ensemble_size = a.ensemble;
  job.base.tol = a.tol;
  job.base.max_iter = a.max_iter;
  job.base.master_seed = a.seed;
  job.base.relaxation = a.relax;
  job.model = model;
  job.eps_im = a.eps_im;
  job.richardson = a.richardson;
  job.threads = a.threads;

  if (a.lambda_points < 2 || !(a.lambda_min > 0.0) ||
      !(a.lambda_max > a.lambda_min))
    throw std::invalid_argument("solve: need lambda-points >= 2 and 0 < lambda-min < lambda-max");
  std::vector<double> xs = {0.0, 0.02, 0.04, 0.06, 0.08};
  for (int j = 0; j < a.lambda_points; ++j) {
    const double f = static_cast<double>(j) / (a.lambda_points - 1);
    xs.push_back(std::sqrt(a.lambda_min * std::pow(a.lambda_max / a.lambda_min, f)));
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(),
                       [](double u, double v) { return std::abs(u - v) < 1e-12; }),
           xs.end());

  const UpsilonResult res = solve_upsilon(job, xs);
  const DensityCurve lambda_curve = push_forward_square(res.upsilon);

  HeaderMeta meta{{"gamma2", format_double(a.gamma2)},
                  {"tau", format_double(a.tau)},
                  {"q", format_double(a.q)},
                  {"grid", std::to_string(a.grid)},
                  {"sim-grid", std::to_string(a.sim_grid)},
                  {"ensemble", std::to_string(a.ensemble)},
                  {"tol", format_double(a.tol)},
                  {"max-iter", std::to_string(a.max_iter)},
                  {"eps_im", format_double(a.eps_im)},
                  {"richardson", a.richardson ? "true" : "false"},
                  {"seed", std::to_string(a.seed)},
                  {"converged_points", std::to_string(res.converged_points)},
                  {"total_points", std::to_string(static_cast<int>(xs.size()))},
                  {"max_clipped_ratio", format_double(res.max_clipped_ratio)},
                  {"clamped_mass", format_double(res.upsilon.clamped_mass)}};
  write_curve_csv(out / "upsilon.csv", res.upsilon, "x", meta);
  write_curve_csv(out / "density.csv", lambda_curve, "lambda", meta);
  write_diagnostics_json(out / "diagnostics.json", res.diagnostics, meta);
  write_manifest(out / "manifest.cfg", "solve",
                 {{"gamma2", format_double(a.gamma2)},
                  {"tau", format_double(a.tau)},
                  {"q", format_double(a.q)},
                  {"grid", std::to_string(a.grid)},
                  {"sim-grid", std::to_string(a.sim_grid)},
                  {"ensemble", std::to_string(a.ensemble)},
                  {"tol", format_double(a.tol)},
                  {"max-iter", std::to_string(a.max_iter)},
                  {"eps-im", format_double(a.eps_im)},
                  {"richardson", a.richardson ? "true" : "false"},
                  {"relax", format_double(a.relax)},
                  {"lambda-min", format_double(a.lambda_min)},
                  {"lambda-max", format_double(a.lambda_max)},
                  {"lambda-points", std::to_string(a.lambda_points)},
                  {"seed", std::to_string(a.seed)},
                  {"threads", std::to_string(a.threads)},
                  {"out-dir", out.string()}});
  std::cout << "solve: gamma2 " << a.gamma2 << " tau " << a.tau << " q " << a.q
            << ": " << res.converged_points << "/" << xs.size()
            << " points converged -> " << (out / "density.csv").string() << "\n";
  return {res.converged_points, static_cast<int>(xs.size())};
}

int cmd_solve(const SolveArgs& a) {
  // multi-run presets sweep one parameter into labelled subdirectories
  std::vector<std::pair<std::string, SolveArgs>> runs;
  if (a.preset == "fig3") {
    for (double g2 : {0.0, 0.25, 0.5}) {
      SolveArgs r = a;
      r.gamma2 = g2;
      runs.emplace_back("gamma2_" + format_double(g2), r);
    }
  } else if (a.preset == "fig4") {
    for (double tau : {0.0, 0.25, 1.0, 2.0}) {
      SolveArgs r = a;
      r.tau = tau;
      runs.emplace_back("tau_" + format_double(tau), r);
    }
  } else {
    runs.emplace_back("", a);
  }

  int converged = 0, total = 0;
  for (auto& [label, run] : runs) {
    const fs::path out =
        label.empty() ? fs::path(run.out_dir) : fs::path(run.out_dir) / label;
    const auto [c, t] = solve_into(run, out);
    converged += c;
    total += t;
  }
  if (converged < static_cast<int>(std::ceil(0.95 * total))) {
    std::cerr << "solve: only " << converged << "/" << total
              << " points converged\n";
    return 3;
  }
  return 0;
}

int cmd_compare(const CompareArgs& a) {
  if (a.sim_dir.empty() || a.solve_dir.empty())
    throw std::invalid_argument("compare: --sim-dir and --solve-dir are required");
  const EigenvaluesFile eig =
      read_eigenvalues_csv(fs::path(a.sim_dir) / "eigenvalues.csv");
  const HistogramFile hist =
      read_histogram_csv(fs::path(a.sim_dir) / "histogram.csv");
  const CurveFile ups = read_curve_csv(fs::path(a.solve_dir) / "upsilon.csv");
  const CurveFile dens = read_curve_csv(fs::path(a.solve_dir) / "density.csv");

  const double lo = a.window_hi > a.window_lo
                        ? a.window_lo
                        : std::max(hist.histogram.bin_edges.front(),
                                   dens.curve.x_points.front());
  const double hi = a.window_hi > a.window_lo
                        ? a.window_hi
                        : std::min(hist.histogram.bin_edges.back(),
                                   dens.curve.x_points.back());
  if (!(hi > lo))
    throw std::invalid_argument("compare: histogram and curve windows do not overlap");

  const CompareReport rep =
      compare_sim_theory(eig.eigenvalues, ups.curve, dens.curve, hist.histogram,
                         lo, hi, a.tails);

  const fs::path out(a.out_dir);
  fs::create_directories(out);
  nlohmann::ordered_json j;
  j["sim_dir"] = a.sim_dir;
  j["solve_dir"] = a.solve_dir;
  j["window"] = {{"lo", rep.window_lo}, {"hi", rep.window_hi}};
  j["ks"] = rep.ks;
  j["l1"] = rep.l1;
  j["tails"] = nlohmann::ordered_json::array();
  for (const auto& t : rep.tails)
    j["tails"].push_back({{"threshold", t.threshold},
                          {"sim_mass", t.sim_mass},
                          {"theory_mass", t.theory_mass}});
  {
    std::ofstream os(out / "compare.json");
    os << j.dump(2) << '\n';
  }
  {
    std::ofstream os(out / "compare.txt");
    os << rep.text;
  }
  std::cout << rep.text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multifractal-volatility covariance spectra: simulate empirical "
               "eigenvalue distributions, solve the limiting density, compare"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "draw an ensemble of return matrices and export spectra");
  simulate->add_option("--config", sim.config,
                       "read key = value parameters (command line wins)");
  auto* sim_g2 = simulate->add_option("--gamma2", sim.gamma2,
                                      "intermittency parameter, in [0, 2)");
  auto* sim_tau = simulate->add_option("--tau", sim.tau, "correlation length");
  auto* sim_q = simulate->add_option("--q", sim.q, "aspect ratio n / t, in (0, 1]");
  auto* sim_n = simulate->add_option("--n", sim.n, "matrix dimension");
  simulate->add_option("--t-steps", sim.t_steps,
                       "number of time steps (0: round(n / q))");
  auto* sim_e = simulate->add_option("--ensemble", sim.ensemble,
                                     "number of independent matrices");
  simulate->add_option("--bins", sim.bins, "histogram bin count");
  simulate->add_flag("--log-bins", sim.log_bins, "log-spaced histogram bins");
  simulate->add_option("--bin-lo", sim.bin_lo, "histogram left edge (0: auto)");
  simulate->add_option("--bin-hi", sim.bin_hi, "histogram right edge (0: auto)");
  simulate->add_option("--seed", sim.seed, "master seed");
  simulate->add_option("--threads", sim.threads, "worker thread cap");
  simulate->add_option("--out-dir", sim.out_dir, "output directory");
  simulate->add_option("--preset", sim.preset, "fig2a | fig2b");

  SolveArgs sol;
  CLI::App* solve = app.add_subcommand(
      "solve", "solve the limiting fixed point and export the density");
  solve->add_option("--config", sol.config,
                    "read key = value parameters (command line wins)");
  auto* sol_g2 = solve->add_option("--gamma2", sol.gamma2,
                                   "intermittency parameter, in [0, 2)");
  auto* sol_tau = solve->add_option("--tau", sol.tau, "correlation length");
  auto* sol_q = solve->add_option("--q", sol.q, "aspect ratio, in (0, 1]");
  solve->add_option("--grid", sol.grid, "fixed-point grid size");
  solve->add_option("--sim-grid", sol.sim_grid,
                    "measure resolution before aggregation");
  solve->add_option("--ensemble", sol.ensemble, "Monte-Carlo measure ensemble");
  solve->add_option("--tol", sol.tol, "sup-norm residual target")
      ->check(CLI::PositiveNumber);
  solve->add_option("--max-iter", sol.max_iter, "iteration budget per point");
  solve->add_option("--eps-im", sol.eps_im, "distance below the real axis")
      ->check(CLI::PositiveNumber);
  solve->add_flag("--richardson", sol.richardson,
                  "two-point extrapolation in eps-im");
  solve->add_option("--relax", sol.relax, "iteration relaxation factor");
  solve->add_option("--lambda-min", sol.lambda_min, "density grid lower end");
  solve->add_option("--lambda-max", sol.lambda_max, "density grid upper end");
  solve->add_option("--lambda-points", sol.lambda_points, "density grid size");
  solve->add_option("--seed", sol.seed, "master seed");
  solve->add_option("--threads", sol.threads, "worker thread cap");
  solve->add_option("--out-dir", sol.out_dir, "output directory");
  solve->add_option("--preset", sol.preset, "fig2a | fig2b | fig3 | fig4");

  CompareArgs cmp;
  CLI::App* compare = app.add_subcommand(
      "compare", "compare simulated spectra against a solved density");
  compare->add_option("--config", cmp.config,
                      "read key = value parameters (command line wins)");
  compare->add_option("--sim-dir", cmp.sim_dir, "directory with eigenvalues.csv");
  compare->add_option("--solve-dir", cmp.solve_dir,
                      "directory with upsilon.csv and density.csv");
  compare->add_option("--out-dir", cmp.out_dir, "report directory");
  compare->add_option("--window-lo", cmp.window_lo, "comparison window start");
  compare->add_option("--window-hi", cmp.window_hi, "comparison window end");
  compare->add_option("--tail", cmp.tails, "tail-mass threshold (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (simulate->parsed()) {
      ConfigValues cfg;
      if (!sim.config.empty()) cfg = ConfigValues(*simulate, sim.config);
      cfg.apply("gamma2", sim.gamma2);
      cfg.apply("tau", sim.tau);
      cfg.apply("q", sim.q);
      cfg.apply("n", sim.n);
      cfg.apply("t-steps", sim.t_steps);
      cfg.apply("ensemble", sim.ensemble);
      cfg.apply("bins", sim.bins);
      cfg.apply("log-bins", sim.log_bins);
      cfg.apply("bin-lo", sim.bin_lo);
      cfg.apply("bin-hi", sim.bin_hi);
      cfg.apply("seed", sim.seed);
      cfg.apply("threads", sim.threads);
      cfg.apply("out-dir", sim.out_dir);
      cfg.apply("preset", sim.preset);
      cfg.finish();
      if (!sim.preset.empty()) {
        double g2;
        if (sim.preset == "fig2a")
          g2 = 0.25;
        else if (sim.preset == "fig2b")
          g2 = 0.5;
        else
          throw std::invalid_argument("simulate: unknown preset " + sim.preset);
        if (sim_g2->count() == 0 && !cfg.set("gamma2")) sim.gamma2 = g2;
        if (sim_tau->count() == 0 && !cfg.set("tau")) sim.tau = 0.25;
        if (sim_q->count() == 0 && !cfg.set("q")) sim.q = 1.0;
        if (sim_n->count() == 0 && !cfg.set("n")) sim.n = 1024;
        if (sim_e->count() == 0 && !cfg.set("ensemble")) sim.ensemble = 8;
      }
      return cmd_simulate(sim);
    }
    if (solve->parsed()) {
      ConfigValues cfg;
      if (!sol.config.empty()) cfg = ConfigValues(*solve, sol.config);
      cfg.apply("gamma2", sol.gamma2);
      cfg.apply("tau", sol.tau);
      cfg.apply("q", sol.q);
      cfg.apply("grid", sol.grid);
      cfg.apply("sim-grid", sol.sim_grid);
      cfg.apply("ensemble", sol.ensemble);
      cfg.apply("tol", sol.tol);
      cfg.apply("max-iter", sol.max_iter);
      cfg.apply("eps-im", sol.eps_im);
      cfg.apply("richardson", sol.richardson);
      cfg.apply("relax", sol.relax);
      cfg.apply("lambda-min", sol.lambda_min);
      cfg.apply("lambda-max", sol.lambda_max);
      cfg.apply("lambda-points", sol.lambda_points);
      cfg.apply("seed", sol.seed);
      cfg.apply("threads", sol.threads);
      cfg.apply("out-dir", sol.out_dir);
      cfg.apply("preset", sol.preset);
      cfg.finish();
      if (!(sol.tol > 0.0))
        throw std::invalid_argument("solve: tol must be > 0");
      if (!(sol.eps_im > 0.0))
        throw std::invalid_argument("solve: eps-im must be > 0");
      if (sol.preset == "fig2a" || sol.preset == "fig2b") {
        if (sol_g2->count() == 0 && !cfg.set("gamma2"))
          sol.gamma2 = sol.preset == "fig2a" ? 0.25 : 0.5;
        if (sol_tau->count() == 0 && !cfg.set("tau")) sol.tau = 0.25;
        if (sol_q->count() == 0 && !cfg.set("q")) sol.q = 1.0;
        sol.preset.clear();
      } else if (!sol.preset.empty() && sol.preset != "fig3" &&
                 sol.preset != "fig4") {
        throw std::invalid_argument("solve: unknown preset " + sol.preset);
      }
      return cmd_solve(sol);
    }
    {
      ConfigValues cfg;
      if (!cmp.config.empty()) cfg = ConfigValues(*compare, cmp.config);
      cfg.apply("sim-dir", cmp.sim_dir);
      cfg.apply("solve-dir", cmp.solve_dir);
      cfg.apply("out-dir", cmp.out_dir);
      cfg.apply("window-lo", cmp.window_lo);
      cfg.apply("window-hi", cmp.window_hi);
      cfg.apply("tail", cmp.tails);
      cfg.finish();
    }
    return cmd_compare(cmp);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
