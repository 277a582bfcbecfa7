#include "mrwspec/field.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "fft_cache.hpp"
#include "mrwspec/rng.hpp"

namespace mrwspec {

double ln_plus_kernel(double lag, double gamma2, double tau, double min_lag) {
  if (tau < 0.0) throw std::invalid_argument("ln_plus_kernel: tau must be >= 0");
  if (gamma2 < 0.0) throw std::invalid_argument("ln_plus_kernel: gamma2 must be >= 0");
  if (gamma2 == 0.0 || tau == 0.0) return 1.0;
  const double l = std::max(std::abs(lag), min_lag);
  return std::pow(std::max(tau / l, 1.0), gamma2);
}

double log_field_covariance(double lag, double gamma2, double tau, double eta) {
  if (eta <= 0.0) throw std::invalid_argument("log_field_covariance: eta must be > 0");
  if (gamma2 == 0.0 || tau <= 0.0) return 0.0;
  return gamma2 * std::max(std::log(tau / (std::abs(lag) + eta)), 0.0);
}

double rho_eps(double lag, double eps, double tau) {
  if (!(eps > 0.0) || eps > tau)
    throw std::invalid_argument("rho_eps: needs 0 < eps <= tau");
  const double l = std::abs(lag);
  if (l <= eps) return std::log(tau / eps) + 1.0 - l / eps;
  if (l <= tau) return std::log(tau / l);
  return 0.0;
}

CirculantSampler::CirculantSampler(const Grid& grid,
                                   const std::function<double(double)>& cov)
    : grid_(grid) {
  const int n = grid.n_points();
  const int m = 2 * n;
  const double dx = grid.spacing();
  // first row of the circulant extension: distance on the 2n-cycle
  std::vector<std::complex<double>> c(m), spec(m);
  for (int j = 0; j < m; ++j) c[j] = cov(std::min(j, m - j) * dx);
  detail::FftCache::instance().transform(m, FFTW_FORWARD, c.data(), spec.data());

  double min_eig = 0.0, max_eig = 0.0;
  scale_.resize(m);
  for (int j = 0; j < m; ++j) {
    const double lambda = spec[j].real();  // symmetric row: spectrum is real
    min_eig = std::min(min_eig, lambda);
    max_eig = std::max(max_eig, lambda);
    scale_[j] = std::sqrt(std::max(lambda, 0.0) / m);
  }
  clipped_ratio_ = max_eig > 0.0 ? std::max(0.0, -min_eig) / max_eig : 0.0;
  zero_ = max_eig <= 0.0;
}

std::vector<double> CirculantSampler::draw(Seed seed) const {
  const int n = grid_.n_points();
  if (zero_) return std::vector<double>(n, 0.0);
  const int m = 2 * n;
  auto engine = make_engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::complex<double>> v(m), e(m);
  for (int j = 0; j < m; ++j) {
    const double a = normal(engine);
    const double b = normal(engine);
    v[j] = std::complex<double>(a * scale_[j], b * scale_[j]);
  }
  detail::FftCache::instance().transform(m, FFTW_FORWARD, v.data(), e.data());
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) out[k] = e[k].real();
  return out;
}

FieldSample sample_field(const Grid& grid, double gamma2, double tau, double eta,
                         Seed seed) {
  if (eta <= 0.0) throw std::invalid_argument("sample_field: eta must be > 0");
  if (gamma2 < 0.0) throw std::invalid_argument("sample_field: gamma2 must be >= 0");
  if (tau < 0.0) throw std::invalid_argument("sample_field: tau must be >= 0");
  FieldSample s;
  s.grid = grid;
  s.eta = eta;
  s.gamma2 = gamma2;
  s.tau = tau;
  if (gamma2 == 0.0 || log_field_covariance(0.0, gamma2, tau, eta) == 0.0) {
    s.values.assign(grid.n_points(), 0.0);
    return s;
  }
  CirculantSampler sampler(
      grid, [&](double lag) { return log_field_covariance(lag, gamma2, tau, eta); });
  s.values = sampler.draw(seed);
  s.clipped_ratio = sampler.clipped_ratio();
  return s;
}

}  // namespace mrwspec
