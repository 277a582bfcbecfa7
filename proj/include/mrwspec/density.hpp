#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mrwspec/solver.hpp"
#include "mrwspec/spectra.hpp"
#include "mrwspec/types.hpp"

namespace mrwspec {

struct DensityCurve {
  std::vector<double> x_points;
  std::vector<double> values;   // >= 0; NaN where the solve failed
  std::vector<char> converged;  // per point
  double eps_im = 0.0;
  double clamped_mass = 0.0;  // integral of negative parts clamped to 0
  double mass = 0.0;          // trapezoid mass over converged stretches
};

// Density from the boundary values of a Stieltjes transform:
// values[j] = (1/pi) Im mu2(x_j - i eps_im), negatives clamped to 0 with the
// removed mass recorded. A NonConvergence from mu2_at marks the point missing
// (NaN) instead of interpolating.
DensityCurve invert_stieltjes(const std::function<Complex(Complex)>& mu2_at,
                              std::span<const double> x_points, double eps_im);

// Change of variables lambda = x^2 for a symmetric density sampled at x >= 0:
// f(lambda) = ups(sqrt(lambda)) / sqrt(lambda). x == 0 is dropped.
DensityCurve push_forward_square(const DensityCurve& ups);

// (1/N) sum 1/(z - lambda_i).
Complex stieltjes_of_spectrum(const SpectrumResult& s, Complex z);

// Full inversion sweep backed by the fixed-point solver. One measure ensemble
// is built up front and shared by every point. Points are processed in chunks
// of fixed length: inside a chunk each solve warm-starts from its neighbour,
// chunk heads descend an Im-offset ladder from cold, so the output is
// identical for any thread count.
struct UpsilonJob {
  SolverConfig base;  // base.z is ignored; per point z = x - i eps_im
  ModelParams model;  // n, t_steps unused
  double eps_im = 0.01;
  // two-point extrapolation 2 u(eps) - u(2 eps), cancels the O(eps) smoothing
  bool richardson = false;
  int threads = 1;
};

struct PointDiag {
  Complex z{0.0, 0.0};
  int iterations = 0;
  double residual = 0.0;
  Complex mu2{0.0, 0.0};
  double clipped_embedding_mass = 0.0;
  bool converged = false;
  bool richardson_stage = false;  // true for the auxiliary 2*eps solve
};

struct UpsilonResult {
  DensityCurve upsilon;
  std::vector<PointDiag> diagnostics;
  double max_clipped_ratio = 0.0;
  int converged_points = 0;
};

UpsilonResult solve_upsilon(const UpsilonJob& job, std::span<const double> x_points);

// Trapezoid cumulative of a curve from its first point; NaN stretches are
// skipped. Used for tail masses and KS comparisons.
double curve_mass(const DensityCurve& c, double from, double to);

}  // namespace mrwspec
