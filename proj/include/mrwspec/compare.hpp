#pragma once

#include <span>
#include <string>
#include <vector>

#include "mrwspec/density.hpp"
#include "mrwspec/spectra.hpp"

namespace mrwspec {

struct TailRow {
  double threshold = 0.0;
  double sim_mass = 0.0;
  double theory_mass = 0.0;
};

struct CompareReport {
  double ks = 0.0;          // sup CDF gap over the window
  double l1 = 0.0;          // integrated |histogram density - curve|
  double window_lo = 0.0;
  double window_hi = 0.0;
  std::vector<TailRow> tails;
  std::string text;  // human-readable summary
};

// Theory CDF of the eigenvalue law from the symmetric density sampled at
// x >= 0: F(lambda) = 2 * int_0^sqrt(lambda) ups. Piecewise-linear in x.
class UpsilonCdf {
 public:
  explicit UpsilonCdf(const DensityCurve& ups);
  double operator()(double lam) const;
  double total_mass() const { return cum_.empty() ? 0.0 : 2.0 * cum_.back(); }

 private:
  std::vector<double> x_, v_, cum_;
};

// Kolmogorov-Smirnov distance between a sorted sample and a CDF, restricted
// to sample points inside [lo, hi].
double ks_distance(std::span<const double> sorted_sample,
                   const std::function<double(double)>& cdf, double lo, double hi);

// eigenvalues: pooled, need not be sorted. upsilon: solved density on x >= 0
// (CDF source). density: pushed-forward curve on the lambda grid (L1 source).
// window_lo/hi <= 0 requests the shared overlap of histogram and curve.
CompareReport compare_sim_theory(std::span<const double> eigenvalues,
                                 const DensityCurve& upsilon,
                                 const DensityCurve& density,
                                 const EsdHistogram& hist,
                                 double window_lo = 0.0, double window_hi = 0.0,
                                 std::span<const double> tail_thresholds = {});

}  // namespace mrwspec
