#pragma once

#include <functional>
#include <vector>

#include "mrwspec/types.hpp"

namespace mrwspec {

// Multiplicative power-law kernel max(tau/|lag|, 1)^gamma2. Lags below
// min_lag are clamped to min_lag; with min_lag == 0 the lag-0 value is +inf
// for gamma2 > 0 (solver callers always clamp at their truncation scale).
// gamma2 == 0 or tau == 0 gives exactly 1 for every lag.
double ln_plus_kernel(double lag, double gamma2, double tau, double min_lag = 0.0);

// Covariance of the regularized log field: gamma2 * max(ln(tau/(|lag|+eta)), 0).
double log_field_covariance(double lag, double gamma2, double tau, double eta);

// Piecewise mollification of ln_+(tau/|lag|):
//   ln(tau/eps) + 1 - |lag|/eps   for |lag| <= eps
//   ln(tau/|lag|)                 for eps <= |lag| <= tau
//   0                             for |lag| > tau
// Requires 0 < eps <= tau.
double rho_eps(double lag, double eps, double tau);

struct FieldSample {
  Grid grid{2};
  double eta = 0.0;
  double gamma2 = 0.0;
  double tau = 0.0;
  std::vector<double> values;
  // |most negative circulant eigenvalue| / largest one; 0 when the embedding
  // was nonnegative definite and the sample law is exact.
  double clipped_ratio = 0.0;
};

// Stationary centered Gaussian field at the cell centers with covariance
// log_field_covariance(lag, gamma2, tau, eta). Deterministic per seed.
FieldSample sample_field(const Grid& grid, double gamma2, double tau, double eta,
                         Seed seed);

// Circulant-embedding sampler for an arbitrary stationary covariance on the
// grid. Builds the embedding spectrum once; draw() is cheap and thread-safe.
class CirculantSampler {
 public:
  CirculantSampler(const Grid& grid, const std::function<double(double)>& cov);

  const Grid& grid() const { return grid_; }
  double clipped_ratio() const { return clipped_ratio_; }
  // Centered field sample; exactly zero when the covariance vanishes.
  std::vector<double> draw(Seed seed) const;

 private:
  Grid grid_;
  double clipped_ratio_ = 0.0;
  bool zero_ = false;
  std::vector<double> scale_;  // sqrt(max(eigs,0)/m), length 2*n
};

}  // namespace mrwspec
