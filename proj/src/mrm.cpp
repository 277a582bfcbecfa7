#include "mrwspec/mrm.hpp"

#include <cmath>
#include <optional>

#include "mrwspec/parallel.hpp"
#include "mrwspec/rng.hpp"

namespace mrwspec {

double zeta(double p, double gamma2) {
  return (1.0 + gamma2 / 2.0) * p - (gamma2 / 2.0) * p * p;
}

std::vector<std::string> validate(const ModelParams& p) {
  if (p.gamma2 < 0.0) throw std::invalid_argument("gamma2 must be >= 0");
  if (p.gamma2 >= 2.0)
    throw std::invalid_argument("gamma2 must be < 2 (measure degenerates)");
  if (p.tau < 0.0) throw std::invalid_argument("tau must be >= 0");
  if (!(p.q > 0.0) || p.q > 1.0) throw std::invalid_argument("q must be in (0, 1]");
  if (p.n < 1) throw std::invalid_argument("n must be >= 1");
  if (p.resolved_t_steps() < 1) throw std::invalid_argument("t_steps must be >= 1");
  std::vector<std::string> warnings;
  if (p.gamma2 >= 1.0 / 3.0)
    warnings.push_back(
        "gamma2 >= 1/3: outside the range with convergence guarantees; "
        "results are conjectural");
  if (p.tau == 0.0)
    warnings.push_back("tau = 0: volatility correlations vanish, white-noise case");
  return warnings;
}

std::vector<std::string> validate(const LognormalParams& lp) {
  if (!lp.kernel) throw std::invalid_argument("lognormal kernel must be callable");
  const double k0 = lp.kernel(0.0);
  if (std::abs(lp.mean_shift + k0) > 1e-9 * std::max(1.0, std::abs(k0)))
    throw std::invalid_argument("mean_shift must equal -kernel(0)");
  if (!(lp.beta > 0.0) || lp.beta > 2.0)
    throw std::invalid_argument("beta must be in (0, 2]");
  // smoothness near 0 and evenness, probed on a lag grid
  double worst = 0.0;
  for (double lag = 1e-6; lag <= 0.5; lag *= 4.0) {
    if (std::abs(lp.kernel(lag) - lp.kernel(-lag)) > 1e-12)
      throw std::invalid_argument("kernel must be even in the lag");
    worst = std::max(worst,
                     std::abs(lp.kernel(lag) - k0) / std::pow(lag, lp.beta));
  }
  if (!(worst < 1e8))
    throw std::invalid_argument(
        "kernel is rougher at 0 than the declared Holder exponent");
  return {};
}

MrmSample sample_mrm_with(const CirculantSampler& sampler, double gamma2,
                          double tau, Seed seed) {
  const Grid& grid = sampler.grid();
  MrmSample s;
  s.grid = grid;
  s.clipped_ratio = sampler.clipped_ratio();
  const int n = grid.n_points();
  const double dx = grid.spacing();
  s.masses.resize(n);
  const double var = log_field_covariance(0.0, gamma2, tau, dx);
  if (var == 0.0) {
    s.masses.assign(n, dx);
    return s;
  }
  const std::vector<double> w = sampler.draw(seed);
  for (int i = 0; i < n; ++i) s.masses[i] = dx * std::exp(w[i] - 0.5 * var);
  return s;
}

MrmSample sample_mrm(const Grid& grid, double gamma2, double tau, Seed seed) {
  if (gamma2 < 0.0 || gamma2 >= 2.0)
    throw std::invalid_argument("sample_mrm: gamma2 must be in [0, 2)");
  if (tau < 0.0) throw std::invalid_argument("sample_mrm: tau must be >= 0");
  const double eta = grid.spacing();
  if (log_field_covariance(0.0, gamma2, tau, eta) == 0.0) {
    MrmSample s;
    s.grid = grid;
    s.masses.assign(grid.n_points(), eta);
    return s;
  }
  CirculantSampler sampler(grid, [&](double lag) {
    return log_field_covariance(lag, gamma2, tau, eta);
  });
  return sample_mrm_with(sampler, gamma2, tau, seed);
}

namespace {

// Rows share the measure sampler; row i is fully determined by
// derive_seed(master, i), independent of how rows are scheduled.
ReturnsMatrix build_rows(const ModelParams& params, Seed master_seed, int threads,
                         const std::function<std::vector<double>(Seed)>& row_vars) {
  const int n = params.n;
  const int t = params.resolved_t_steps();
  ReturnsMatrix r;
  r.params = params;
  r.entries.resize(n, t);
  r.conditional_variances.resize(n, t);
  parallel_for(0, n, threads, [&](int i) {
    const Seed row_seed = derive_seed(master_seed, static_cast<std::uint64_t>(i));
    const std::vector<double> vars = row_vars(derive_seed(row_seed, 0));
    auto engine = make_engine(derive_seed(row_seed, 1));
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int j = 0; j < t; ++j) {
      r.conditional_variances(i, j) = vars[j];
      r.entries(i, j) = std::sqrt(vars[j]) * normal(engine);
    }
  });
  return r;
}

}  // namespace

ReturnsMatrix sample_returns(const ModelParams& params, Seed master_seed,
                             int threads) {
  validate(params);
  if (params.resolved_t_steps() < 2)
    throw std::invalid_argument("sample_returns: needs t_steps >= 2");
  const Grid grid(params.resolved_t_steps());
  const double eta = grid.spacing();
  const bool degenerate =
      log_field_covariance(0.0, params.gamma2, params.tau, eta) == 0.0;
  std::optional<CirculantSampler> sampler;
  if (!degenerate)
    sampler.emplace(grid, [&](double lag) {
      return log_field_covariance(lag, params.gamma2, params.tau, eta);
    });
  ReturnsMatrix r = build_rows(params, master_seed, threads, [&](Seed s) {
    if (degenerate) return std::vector<double>(grid.n_points(), eta);
    return sample_mrm_with(*sampler, params.gamma2, params.tau, s).masses;
  });
  r.max_clipped_ratio = sampler ? sampler->clipped_ratio() : 0.0;
  return r;
}

ReturnsMatrix sample_returns_lognormal(const ModelParams& params,
                                       const LognormalParams& lp,
                                       Seed master_seed, int threads) {
  validate(params);
  validate(lp);
  if (params.resolved_t_steps() < 2)
    throw std::invalid_argument("sample_returns_lognormal: needs t_steps >= 2");
  const Grid grid(params.resolved_t_steps());
  CirculantSampler sampler(grid, lp.kernel);
  if (sampler.clipped_ratio() > 1e-6)
    throw std::invalid_argument(
        "lognormal kernel: circulant embedding clipped " +
        std::to_string(sampler.clipped_ratio()) +
        " of its spectrum; the sampled law would be wrong");
  const double inv_t = grid.spacing();
  ReturnsMatrix r = build_rows(params, master_seed, threads, [&](Seed s) {
    std::vector<double> w = sampler.draw(s);
    for (double& v : w) v = inv_t * std::exp(2.0 * (lp.mean_shift + v));
    return w;  // conditional variances e^{2W}/T
  });
  r.max_clipped_ratio = sampler.clipped_ratio();
  return r;
}

}  // namespace mrwspec
