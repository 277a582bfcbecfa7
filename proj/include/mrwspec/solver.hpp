#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "mrwspec/types.hpp"

namespace mrwspec {

struct SolverConfig {
  Complex z{0.0, 1.0};  // spectral parameter, Im z != 0
  Grid k_grid{256};
  int ensemble_size = 2000;
  double eta_k = 0.0;  // kernel truncation lag; 0 means one k_grid spacing
  double tol = 1e-6;   // sup-norm residual target
  int max_iter = 500;
  Seed master_seed = 1;
  int sim_grid = 4096;     // measure resolution before aggregation onto k_grid
  double relaxation = 1.0; // 1 = plain iteration; (0,1) damps, (1,2) extrapolates
  int threads = 1;

  double effective_eta_k() const { return eta_k > 0.0 ? eta_k : k_grid.spacing(); }
};

struct KFunction {
  SolverConfig config;
  std::vector<Complex> values;  // K at the k_grid centers
  Complex mu2{0.0, 0.0};
  int iterations = 0;
  double residual = 0.0;                 // final sup-norm of T(g) - g
  std::vector<double> residual_history;  // one entry per iteration
  double max_clipped_ratio = 0.0;
};

// Fixed Monte-Carlo ensemble of cell masses on the k-grid. Drawn once and
// reused across all iterations so the fixed-point operator is deterministic.
struct SolverEnsemble {
  Grid k_grid{2};
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> masses;
  double max_clipped_ratio = 0.0;
  // gamma2 == 0 or tau == 0: a single uniform member carries the exact law
  bool degenerate = false;
};

// Multifractal measure ensemble: ensemble_size realizations on a sim_grid-cell
// grid, cell masses summed onto the k_grid. sim_grid must be a multiple of
// the k_grid size. Member e is seeded by derive_seed(master_seed, e).
SolverEnsemble build_mrm_ensemble(const SolverConfig& config, double gamma2,
                                  double tau, int threads = 1);

// Lognormal-volatility ensemble: masses spacing * exp(2 W) with W stationary
// Gaussian on the k_grid (mean lp.mean_shift, covariance lp.kernel). Rejects
// kernels whose embedding needs visible clipping.
SolverEnsemble build_lognormal_ensemble(const SolverConfig& config,
                                        const LognormalParams& lp,
                                        int threads = 1);

// One application of the fixed-point map
//   (Tg)(x) = 1 / (z - q E[ (z - sum_t w(|t-x|) g(t) m(t))^{-1} ])
// with w the power-law kernel truncated at eta_k and m the member masses.
// The expectation runs over the fixed ensemble in blocks of 64 members, so
// the result is independent of threading.
std::vector<Complex> picard_step(std::span<const Complex> g,
                                 const SolverEnsemble& ensemble,
                                 const SolverConfig& config,
                                 const ModelParams& model);

// Iterates picard_step from K0 = 1/z until the residual drops below tol.
// Throws NonConvergence past max_iter and NumericalFailure if an iterate
// escapes the resolvent bounds |K| <= 1/|Im z|, Im z * Im K <= 0.
KFunction solve_k(const SolverConfig& config, const ModelParams& model);

// Same, with a caller-provided ensemble and optional initial guess (for warm
// starts along a z-sweep).
KFunction solve_k(const SolverConfig& config, const ModelParams& model,
                  const SolverEnsemble& ensemble,
                  const std::vector<Complex>* initial = nullptr);

// Grid mean of K equals q mu2 + (1-q)/z; recovers mu2.
Complex mu2_from_k(const KFunction& k, double q);

struct Mu2Estimate {
  Complex value{0.0, 0.0};
  double std_error = 0.0;  // sqrt((var Re + var Im) / members)
};

// Direct estimate mu2 = E[(z - int K dM)^{-1}] on an independent ensemble;
// cross-check for the relation above.
Mu2Estimate mu2_direct(const KFunction& k, const SolverEnsemble& fresh);

// Lognormal-volatility variant: weight e^{4 k(t-x)} in place of the power-law
// kernel and measure e^{2W(t)} dt in place of the multifractal one.
KFunction solve_k_lognormal(const SolverConfig& config, double q,
                            const LognormalParams& lp);

}  // namespace mrwspec
