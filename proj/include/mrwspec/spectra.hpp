#pragma once

#include <span>
#include <vector>

#include "mrwspec/mrm.hpp"
#include "mrwspec/types.hpp"

namespace mrwspec {

struct SpectrumResult {
  int n = 0;
  int t_steps = 0;
  std::vector<double> eigenvalues;  // ascending, all >= 0 after clamping
  double clamped_magnitude = 0.0;   // largest negative eigenvalue set to 0
};

// Eigenvalues of X X^t. Tiny negative numerical eigenvalues (above
// -1e-10 * ||X||^2) are clamped to 0; anything below that magnitude throws.
SpectrumResult covariance_spectrum(const ReturnsMatrix& x);

struct BnCheckResult {
  bool pass = false;
  double max_deviation = 0.0;
};

// Checks that the (T+N) x (T+N) block matrix [[0, X], [X^t, 0]] has spectrum
// {+-sqrt(lambda_i)} plus T-N zeros, against the spectrum of X X^t.
BnCheckResult bn_spectrum_check(const ReturnsMatrix& x, double tol = 1e-8);

// Limiting eigenvalue density of white-noise covariance matrices with aspect
// ratio q in (0,1]: sqrt((hi-x)(x-lo)) / (2 pi q x) on (lo,hi), else 0,
// with lo,hi = (1 -+ sqrt(q))^2.
double mp_density(double x, double q);

struct MpSupport {
  double lower = 0.0;
  double upper = 0.0;
};
MpSupport mp_support(double q);

struct BinSpec {
  int count = 100;
  double lo = 0.0;
  double hi = 0.0;  // hi <= lo requests the automatic range [0, max value]
  bool log_spaced = false;
};

struct EsdHistogram {
  std::vector<double> bin_edges;      // count + 1, strictly increasing
  std::vector<double> probabilities;  // sums to 1 over in-range values
  long out_of_range = 0;
};

// Normalized histogram of eigenvalues (pool several spectra by concatenating
// before the call; every eigenvalue carries equal weight).
EsdHistogram esd_histogram(std::span<const double> eigenvalues, const BinSpec& bins);
EsdHistogram esd_histogram(const SpectrumResult& s, const BinSpec& bins);

}  // namespace mrwspec
