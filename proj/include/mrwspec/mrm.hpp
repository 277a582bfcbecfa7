#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mrwspec/field.hpp"
#include "mrwspec/types.hpp"

namespace mrwspec {

// Moment scaling exponent of the measure: E[M[0,l]^p] ~ l^{zeta(p)} inside
// the correlation length. zeta(1) = 1, zeta(2) = 2 - gamma2.
double zeta(double p, double gamma2);

struct MrmSample {
  Grid grid{2};
  std::vector<double> masses;  // cell masses, all >= 0, ensemble mean sums to 1
  double clipped_ratio = 0.0;
};

// Lognormal multifractal cell masses: spacing * exp(w - var(w)/2) with w the
// log field at eta = spacing. gamma2 == 0 or tau == 0 gives the uniform
// deterministic measure.
MrmSample sample_mrm(const Grid& grid, double gamma2, double tau, Seed seed);

// Same law, drawing through a prepared sampler (for large ensembles).
MrmSample sample_mrm_with(const CirculantSampler& sampler, double gamma2,
                          double tau, Seed seed);

struct ReturnsMatrix {
  ModelParams params;
  Eigen::MatrixXd entries;                // n x t_steps
  Eigen::MatrixXd conditional_variances;  // n x t_steps, row i holds row i's cell masses
  double max_clipped_ratio = 0.0;
};

// Row i: an independent measure sample on the t_steps-cell grid, then
// entries(i, j) = sqrt(mass_j) * Z_ij with Z i.i.d. standard normal.
// Row i depends only on derive_seed(master_seed, i).
ReturnsMatrix sample_returns(const ModelParams& params, Seed master_seed,
                             int threads = 1);

// Lognormal-volatility variant: entries(i, j) = exp(W_i(j/T)) * Z_ij / sqrt(T)
// with W_i stationary Gaussian (mean lp.mean_shift, covariance lp.kernel).
// Rejects kernels whose circulant embedding needs visible clipping.
ReturnsMatrix sample_returns_lognormal(const ModelParams& params,
                                       const LognormalParams& lp,
                                       Seed master_seed, int threads = 1);

}  // namespace mrwspec
