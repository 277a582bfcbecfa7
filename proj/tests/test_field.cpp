#include <doctest.h>

#include <cmath>
#include <numeric>

#include "mrwspec/field.hpp"
#include "mrwspec/rng.hpp"

using namespace mrwspec;

TEST_CASE("ln_plus_kernel piecewise values") {
  CHECK(ln_plus_kernel(0.5, 0.0, 0.25) == 1.0);
  CHECK(ln_plus_kernel(0.5, 0.3, 0.0) == 1.0);
  // beyond tau the kernel is flat 1
  CHECK(ln_plus_kernel(0.30, 0.5, 0.25) == 1.0);
  CHECK(ln_plus_kernel(0.25, 0.5, 0.25) == doctest::Approx(1.0));
  // inside: (tau/lag)^gamma2, even in lag
  CHECK(ln_plus_kernel(0.125, 0.5, 0.25) == doctest::Approx(std::pow(2.0, 0.5)));
  CHECK(ln_plus_kernel(-0.125, 0.5, 0.25) == ln_plus_kernel(0.125, 0.5, 0.25));
  // min_lag clamps the divergence at 0
  CHECK(ln_plus_kernel(0.0, 0.5, 0.25, 0.01) ==
        doctest::Approx(std::pow(25.0, 0.5)));
  CHECK(ln_plus_kernel(0.005, 0.5, 0.25, 0.01) ==
        ln_plus_kernel(0.0, 0.5, 0.25, 0.01));
  CHECK(std::isinf(ln_plus_kernel(0.0, 0.5, 0.25)));
  CHECK_THROWS_AS(ln_plus_kernel(0.1, -0.1, 0.25), std::invalid_argument);
  CHECK_THROWS_AS(ln_plus_kernel(0.1, 0.1, -0.25), std::invalid_argument);
}

TEST_CASE("rho_eps mollification is continuous") {
  const double eps = 0.05, tau = 0.5;
  CHECK(rho_eps(0.0, eps, tau) == doctest::Approx(std::log(tau / eps) + 1.0));
  // joins at |lag| = eps and |lag| = tau
  CHECK(rho_eps(eps - 1e-12, eps, tau) ==
        doctest::Approx(rho_eps(eps + 1e-12, eps, tau)).epsilon(1e-9));
  CHECK(rho_eps(tau - 1e-12, eps, tau) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(rho_eps(tau + 0.01, eps, tau) == 0.0);
  CHECK(rho_eps(-0.2, eps, tau) == rho_eps(0.2, eps, tau));
  CHECK_THROWS_AS(rho_eps(0.1, 0.0, tau), std::invalid_argument);
  CHECK_THROWS_AS(rho_eps(0.1, tau + 0.1, tau), std::invalid_argument);
}

TEST_CASE("log_field_covariance truncation") {
  const double g2 = 0.3, tau = 0.5, eta = 1.0 / 64;
  CHECK(log_field_covariance(0.0, g2, tau, eta) ==
        doctest::Approx(g2 * std::log(tau / eta)));
  CHECK(log_field_covariance(tau, g2, tau, eta) == 0.0);
  CHECK(log_field_covariance(10.0, g2, tau, eta) == 0.0);
  CHECK(log_field_covariance(0.1, 0.0, tau, eta) == 0.0);
  CHECK(log_field_covariance(0.1, g2, 0.0, eta) == 0.0);
  CHECK_THROWS_AS(log_field_covariance(0.1, g2, tau, 0.0), std::invalid_argument);
}

TEST_CASE("circulant sampler reproduces the target covariance") {
  const Grid grid(16);
  const double g2 = 0.3, tau = 0.5, eta = grid.spacing();
  auto cov = [&](double lag) { return log_field_covariance(lag, g2, tau, eta); };
  const CirculantSampler sampler(grid, cov);
  // this covariance embeds cleanly at this size
  CHECK(sampler.clipped_ratio() < 1e-12);

  const int n_draws = 20000;
  const int n = grid.n_points();
  std::vector<double> acc(n, 0.0), mean(n, 0.0);
  for (int d = 0; d < n_draws; ++d) {
    const std::vector<double> w = sampler.draw(derive_seed(42, d));
    for (int k = 0; k < n; ++k) {
      acc[k] += w[0] * w[k];
      mean[k] += w[k];
    }
  }
  for (int k = 0; k < n; ++k) {
    const double m = mean[k] / n_draws;
    CHECK(std::abs(m) < 0.03);  // centered field
    const double c_hat = acc[k] / n_draws;
    CHECK(std::abs(c_hat - cov(k * grid.spacing())) < 0.035);
  }
}

TEST_CASE("circulant sampler is deterministic per seed") {
  const Grid grid(32);
  auto cov = [&](double lag) {
    return log_field_covariance(lag, 0.25, 0.25, grid.spacing());
  };
  const CirculantSampler s1(grid, cov), s2(grid, cov);
  const auto a = s1.draw(7), b = s2.draw(7), c = s1.draw(8);
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("sample_field degenerate cases are exactly zero") {
  const Grid grid(8);
  const FieldSample zero_g2 = sample_field(grid, 0.0, 0.25, grid.spacing(), 3);
  for (double v : zero_g2.values) CHECK(v == 0.0);
  CHECK(zero_g2.clipped_ratio == 0.0);
  // tau below eta: the truncated log has nothing left
  const FieldSample tiny_tau = sample_field(grid, 0.5, 0.05, 0.125, 3);
  for (double v : tiny_tau.values) CHECK(v == 0.0);
  CHECK_THROWS_AS(sample_field(grid, 0.5, 0.25, 0.0, 3), std::invalid_argument);
}

TEST_CASE("sample_field variance matches the covariance at lag 0") {
  const Grid grid(64);
  const double g2 = 0.25, tau = 0.25, eta = grid.spacing();
  const double c0 = log_field_covariance(0.0, g2, tau, eta);
  double acc = 0.0;
  const int n_draws = 600;
  for (int d = 0; d < n_draws; ++d) {
    const FieldSample s = sample_field(grid, g2, tau, eta, derive_seed(9, d));
    for (double v : s.values) acc += v * v;
  }
  acc /= static_cast<double>(n_draws) * grid.n_points();
  CHECK(acc == doctest::Approx(c0).epsilon(0.05));
}
