#include "mrwspec/solver.hpp"

#include <algorithm>
#include <cmath>

#include "fft_cache.hpp"
#include "mrwspec/field.hpp"
#include "mrwspec/mrm.hpp"
#include "mrwspec/parallel.hpp"
#include "mrwspec/rng.hpp"
#include "picard_operator.hpp"

namespace mrwspec {

namespace {

void check_config(const SolverConfig& c) {
  if (c.z.imag() == 0.0)
    throw std::invalid_argument("solver: z must have nonzero imaginary part");
  if (!(c.tol > 0.0)) throw std::invalid_argument("solver: tol must be > 0");
  if (c.max_iter < 1) throw std::invalid_argument("solver: max_iter must be >= 1");
  if (c.ensemble_size < 1)
    throw std::invalid_argument("solver: ensemble_size must be >= 1");
  if (c.eta_k < 0.0) throw std::invalid_argument("solver: eta_k must be >= 0");
  if (!(c.relaxation > 0.0) || c.relaxation > 2.0)
    throw std::invalid_argument("solver: relaxation must be in (0, 2]");
}

void check_measure_params(double gamma2, double tau, double q) {
  if (gamma2 < 0.0 || gamma2 >= 2.0)
    throw std::invalid_argument("solver: gamma2 must be in [0, 2)");
  if (tau < 0.0) throw std::invalid_argument("solver: tau must be >= 0");
  if (!(q > 0.0) || q > 1.0) throw std::invalid_argument("solver: q must be in (0, 1]");
}

SolverEnsemble uniform_ensemble(const Grid& k_grid) {
  SolverEnsemble e;
  e.k_grid = k_grid;
  e.masses.resize(1, k_grid.n_points());
  e.masses.setConstant(k_grid.spacing());
  e.degenerate = true;
  return e;
}

}  // namespace

SolverEnsemble build_mrm_ensemble(const SolverConfig& config, double gamma2,
                                  double tau, int threads) {
  check_config(config);
  check_measure_params(gamma2, tau, 1.0);
  const int n = config.k_grid.n_points();
  const Grid sim_grid(config.sim_grid);
  if (config.sim_grid % n != 0)
    throw std::invalid_argument(
        "solver: sim_grid must be a multiple of the k_grid size");
  const double eta = sim_grid.spacing();
  if (log_field_covariance(0.0, gamma2, tau, eta) == 0.0)
    return uniform_ensemble(config.k_grid);

  const int factor = config.sim_grid / n;
  CirculantSampler sampler(sim_grid, [&](double lag) {
    return log_field_covariance(lag, gamma2, tau, eta);
  });
  SolverEnsemble e;
  e.k_grid = config.k_grid;
  e.masses.resize(config.ensemble_size, n);
  e.max_clipped_ratio = sampler.clipped_ratio();
  parallel_for(0, config.ensemble_size, threads, [&](int member) {
    const MrmSample s = sample_mrm_with(
        sampler, gamma2, tau,
        derive_seed(config.master_seed, static_cast<std::uint64_t>(member)));
    for (int cell = 0; cell < n; ++cell) {
      double acc = 0.0;
      for (int j = 0; j < factor; ++j) acc += s.masses[cell * factor + j];
      e.masses(member, cell) = acc;
    }
  });
  return e;
}

SolverEnsemble build_lognormal_ensemble(const SolverConfig& config,
                                        const LognormalParams& lp, int threads) {
  check_config(config);
  validate(lp);
  const Grid& grid = config.k_grid;
  if (lp.kernel(0.0) == 0.0) return uniform_ensemble(grid);
  CirculantSampler sampler(grid, lp.kernel);
  if (sampler.clipped_ratio() > 1e-6)
    throw std::invalid_argument(
        "lognormal kernel: circulant embedding clipped " +
        std::to_string(sampler.clipped_ratio()) +
        " of its spectrum; the sampled law would be wrong");
  SolverEnsemble e;
  e.k_grid = grid;
  e.masses.resize(config.ensemble_size, grid.n_points());
  e.max_clipped_ratio = sampler.clipped_ratio();
  const double dx = grid.spacing();
  parallel_for(0, config.ensemble_size, threads, [&](int member) {
    const std::vector<double> w = sampler.draw(
        derive_seed(config.master_seed, static_cast<std::uint64_t>(member)));
    for (int cell = 0; cell < grid.n_points(); ++cell)
      e.masses(member, cell) = dx * std::exp(2.0 * (lp.mean_shift + w[cell]));
  });
  return e;
}

namespace detail {

PicardOperator::PicardOperator(const SolverEnsemble& ensemble, double q,
                               double eta_k,
                               const std::function<double(double)>& kernel,
                               int threads)
    : ens_(ensemble),
      q_(q),
      n_(ensemble.k_grid.n_points()),
      len_(2 * ensemble.k_grid.n_points()),
      members_(static_cast<int>(ensemble.masses.rows())),
      threads_(threads) {
  (void)eta_k;  // already folded into the kernel by the caller
  const double dx = ens_.k_grid.spacing();
  std::vector<Complex> row(len_), spec(len_);
  for (int j = 0; j < len_; ++j) row[j] = kernel(std::min(j, len_ - j) * dx);
  FftCache::instance().transform(len_, FFTW_FORWARD, row.data(), spec.data());
  khat_.resize(len_);
  for (int j = 0; j < len_; ++j) khat_[j] = spec[j] / static_cast<double>(len_);

  buf_.resize(static_cast<std::size_t>(members_) * len_);
  fwd_ = FftCache::instance().make_many_plan(len_, members_, buf_.data(),
                                             FFTW_FORWARD);
  bwd_ = FftCache::instance().make_many_plan(len_, members_, buf_.data(),
                                             FFTW_BACKWARD);
}

PicardOperator::~PicardOperator() {
  if (fwd_) FftCache::instance().destroy_plan(fwd_);
  if (bwd_) FftCache::instance().destroy_plan(bwd_);
}

std::vector<Complex> PicardOperator::apply(std::span<const Complex> g, Complex z) {
  if (static_cast<int>(g.size()) != n_)
    throw std::invalid_argument("picard_step: g must live on the k_grid");

  // member rows of (masses * g), zero-padded to the doubled length
  parallel_for(0, members_, threads_, [&](int e) {
    Complex* row = buf_.data() + static_cast<std::size_t>(e) * len_;
    const double* m = ens_.masses.data() + static_cast<std::size_t>(e) * n_;
    for (int t = 0; t < n_; ++t) row[t] = m[t] * g[t];
    std::fill(row + n_, row + len_, Complex(0.0, 0.0));
  });

  fftw_execute(fwd_);
  parallel_for(0, members_, threads_, [&](int e) {
    Complex* row = buf_.data() + static_cast<std::size_t>(e) * len_;
    for (int j = 0; j < len_; ++j) row[j] *= khat_[j];
  });
  fftw_execute(bwd_);

  // E[(z - inner)^{-1}] per grid point, fixed 64-member blocks
  constexpr int kBlock = 64;
  const int blocks = (members_ + kBlock - 1) / kBlock;
  block_sums_.assign(static_cast<std::size_t>(blocks) * n_, Complex(0.0, 0.0));
  parallel_for(0, blocks, threads_, [&](int b) {
    Complex* acc = block_sums_.data() + static_cast<std::size_t>(b) * n_;
    const int last = std::min(members_, (b + 1) * kBlock);
    for (int e = b * kBlock; e < last; ++e) {
      const Complex* row = buf_.data() + static_cast<std::size_t>(e) * len_;
      for (int x = 0; x < n_; ++x) acc[x] += 1.0 / (z - row[x]);
    }
  });
  std::vector<Complex> out(n_);
  for (int x = 0; x < n_; ++x) {
    Complex mean(0.0, 0.0);
    for (int b = 0; b < blocks; ++b)
      mean += block_sums_[static_cast<std::size_t>(b) * n_ + x];
    mean /= static_cast<double>(members_);
    out[x] = 1.0 / (z - q_ * mean);
  }
  return out;
}

namespace {

// The map sends admissible functions to admissible ones; in floating point
// the sign constraint is exact and the magnitude bound can exceed only by
// rounding in the final division, hence the relative slack.
void check_iterate(std::span<const Complex> k, Complex z, int iteration) {
  const double bound = (1.0 + 1e-12) / std::abs(z.imag());
  for (const Complex& v : k) {
    if (!(std::abs(v) <= bound) || z.imag() * v.imag() > 0.0)
      throw NumericalFailure(
          "solver: iterate " + std::to_string(iteration) +
          " escaped the resolvent bounds (|K| <= 1/|Im z|, opposite Im sign)");
  }
}

}  // namespace

KFunction solve_with_operator(PicardOperator& op, const SolverConfig& config,
                              double q, const std::vector<Complex>* initial) {
  const Complex z = config.z;
  const int n = op.n_points();
  std::vector<Complex> g =
      initial ? *initial : std::vector<Complex>(n, 1.0 / z);
  if (initial && static_cast<int>(initial->size()) != n)
    throw std::invalid_argument("solve_k: initial guess has the wrong length");

  KFunction out;
  out.config = config;
  out.max_clipped_ratio = op.ensemble().max_clipped_ratio;
  double residual = 0.0;
  for (int iter = 1; iter <= config.max_iter; ++iter) {
    std::vector<Complex> tg = op.apply(g, z);
    check_iterate(tg, z, iter);
    residual = 0.0;
    for (int i = 0; i < n; ++i)
      residual = std::max(residual, std::abs(tg[i] - g[i]));
    out.residual_history.push_back(residual);
    if (config.relaxation == 1.0) {
      g.swap(tg);
    } else {
      for (int i = 0; i < n; ++i)
        g[i] = (1.0 - config.relaxation) * g[i] + config.relaxation * tg[i];
    }
    if (residual < config.tol) {
      out.values = std::move(g);
      out.iterations = iter;
      out.residual = residual;
      Complex mean(0.0, 0.0);
      for (const Complex& v : out.values) mean += v;
      mean /= static_cast<double>(n);
      out.mu2 = (mean - (1.0 - q) / z) / q;
      return out;
    }
  }
  throw NonConvergence(residual, config.max_iter);
}

}  // namespace detail

std::vector<Complex> picard_step(std::span<const Complex> g,
                                 const SolverEnsemble& ensemble,
                                 const SolverConfig& config,
                                 const ModelParams& model) {
  check_config(config);
  check_measure_params(model.gamma2, model.tau, model.q);
  const double eta = config.effective_eta_k();
  detail::PicardOperator op(
      ensemble, model.q, eta,
      [&](double lag) { return ln_plus_kernel(lag, model.gamma2, model.tau, eta); },
      config.threads);
  return op.apply(g, config.z);
}

KFunction solve_k(const SolverConfig& config, const ModelParams& model,
                  const SolverEnsemble& ensemble,
                  const std::vector<Complex>* initial) {
  check_config(config);
  check_measure_params(model.gamma2, model.tau, model.q);
  const double eta = config.effective_eta_k();
  detail::PicardOperator op(
      ensemble, model.q, eta,
      [&](double lag) { return ln_plus_kernel(lag, model.gamma2, model.tau, eta); },
      config.threads);
  return detail::solve_with_operator(op, config, model.q, initial);
}

KFunction solve_k(const SolverConfig& config, const ModelParams& model) {
  check_config(config);
  check_measure_params(model.gamma2, model.tau, model.q);
  const SolverEnsemble ensemble =
      build_mrm_ensemble(config, model.gamma2, model.tau, config.threads);
  return solve_k(config, model, ensemble, nullptr);
}

Complex mu2_from_k(const KFunction& k, double q) {
  if (!(q > 0.0) || q > 1.0)
    throw std::invalid_argument("mu2_from_k: q must be in (0, 1]");
  Complex mean(0.0, 0.0);
  for (const Complex& v : k.values) mean += v;
  mean /= static_cast<double>(k.values.size());
  return (mean - (1.0 - q) / k.config.z) / q;
}

Mu2Estimate mu2_direct(const KFunction& k, const SolverEnsemble& fresh) {
  if (fresh.k_grid.n_points() != static_cast<int>(k.values.size()))
    throw std::invalid_argument("mu2_direct: grid mismatch");
  const Complex z = k.config.z;
  const int members = static_cast<int>(fresh.masses.rows());
  const int n = fresh.k_grid.n_points();
  std::vector<Complex> vals(members);
  for (int e = 0; e < members; ++e) {
    Complex inner(0.0, 0.0);
    const double* m = fresh.masses.data() + static_cast<std::size_t>(e) * n;
    for (int t = 0; t < n; ++t) inner += m[t] * k.values[t];
    vals[e] = 1.0 / (z - inner);
  }
  Complex mean(0.0, 0.0);
  for (const Complex& v : vals) mean += v;
  mean /= static_cast<double>(members);
  double var = 0.0;
  for (const Complex& v : vals) var += std::norm(v - mean);
  var /= std::max(1, members - 1);
  return {mean, std::sqrt(var / members)};
}

KFunction solve_k_lognormal(const SolverConfig& config, double q,
                            const LognormalParams& lp) {
  check_config(config);
  if (!(q > 0.0) || q > 1.0)
    throw std::invalid_argument("solver: q must be in (0, 1]");
  const SolverEnsemble ensemble =
      build_lognormal_ensemble(config, lp, config.threads);
  detail::PicardOperator op(
      ensemble, q, 0.0, [&](double lag) { return std::exp(4.0 * lp.kernel(lag)); },
      config.threads);
  return detail::solve_with_operator(op, config, q, nullptr);
}

}  // namespace mrwspec
