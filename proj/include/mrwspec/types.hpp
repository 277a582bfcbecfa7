#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mrwspec {

using Seed = std::uint64_t;
using Complex = std::complex<double>;

// Uniform partition of [0,1] into n cells. Fields and measures are evaluated
// at cell centers (i + 0.5) * spacing.
class Grid {
 public:
  explicit Grid(int n_points) : n_(n_points) {
    if (n_points < 2) throw std::invalid_argument("Grid: n_points must be >= 2");
  }
  int n_points() const { return n_; }
  double spacing() const { return 1.0 / n_; }
  double center(int i) const { return (i + 0.5) / n_; }
  bool operator==(const Grid&) const = default;

 private:
  int n_;
};

// gamma2 is the variance coefficient of the log-volatility field; 0 recovers
// i.i.d. Gaussian rows. tau is the correlation length of that field; tau == 0
// degenerates to the gamma2 == 0 case. q = n / t_steps is the aspect ratio.
struct ModelParams {
  double gamma2 = 0.0;
  double tau = 0.25;
  double q = 1.0;
  int n = 0;
  int t_steps = 0;  // 0 means: derive as round(n / q)

  int resolved_t_steps() const {
    if (t_steps > 0) return t_steps;
    return static_cast<int>(std::lround(n / q));
  }
};

// Throws std::invalid_argument for out-of-range parameters; returns
// human-readable warnings for legal but delicate settings.
std::vector<std::string> validate(const ModelParams& p);

// Stationary lognormal volatility model: rows scale entries by e^{W(j/T)}
// where W is Gaussian with mean mean_shift and covariance kernel(lag).
// mean_shift must be -kernel(0) so that E[e^{2W}] = 1.
struct LognormalParams {
  double mean_shift = 0.0;
  std::function<double(double)> kernel;
  double beta = 1.0;  // Holder exponent of kernel near 0
};

std::vector<std::string> validate(const LognormalParams& lp);

// Fixed-point iteration ran out of its iteration budget.
struct NonConvergence : std::runtime_error {
  NonConvergence(double residual_, int iterations_)
      : std::runtime_error("fixed point not reached: residual " +
                           std::to_string(residual_) + " after " +
                           std::to_string(iterations_) + " iterations"),
        residual(residual_),
        iterations(iterations_) {}
  double residual;
  int iterations;
};

// A structural invariant that must hold in exact arithmetic was violated;
// indicates a bug or corrupted input, not a tuning problem.
struct NumericalFailure : std::runtime_error {
  explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mrwspec
