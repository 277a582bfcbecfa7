#include "mrwspec/spectra.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace mrwspec {

SpectrumResult covariance_spectrum(const ReturnsMatrix& x) {
  if (!x.entries.allFinite())
    throw std::invalid_argument("covariance_spectrum: non-finite entries");
  const Eigen::MatrixXd& m = x.entries;
  Eigen::MatrixXd gram = m * m.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram,
                                                        Eigen::EigenvaluesOnly);
  SpectrumResult r;
  r.n = static_cast<int>(m.rows());
  r.t_steps = static_cast<int>(m.cols());
  r.eigenvalues.assign(solver.eigenvalues().data(),
                       solver.eigenvalues().data() + m.rows());
  // X X^t is psd by construction; only roundoff-sized negatives are tolerable
  const double scale = m.squaredNorm();
  const double floor = -1e-10 * std::max(scale, 1e-300);
  for (double& v : r.eigenvalues) {
    if (v < 0.0) {
      if (v < floor)
        throw NumericalFailure("covariance_spectrum: eigenvalue " +
                               std::to_string(v) + " below the psd roundoff floor");
      r.clamped_magnitude = std::max(r.clamped_magnitude, -v);
      v = 0.0;
    }
  }
  std::sort(r.eigenvalues.begin(), r.eigenvalues.end());
  return r;
}

BnCheckResult bn_spectrum_check(const ReturnsMatrix& x, double tol) {
  const Eigen::MatrixXd& m = x.entries;
  const int n = static_cast<int>(m.rows());
  const int t = static_cast<int>(m.cols());
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n + t, n + t);
  b.topRightCorner(n, t) = m;
  b.bottomLeftCorner(t, n) = m.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> bsolve(b, Eigen::EigenvaluesOnly);

  const SpectrumResult gram = covariance_spectrum(x);
  std::vector<double> expected;
  expected.reserve(n + t);
  for (double lam : gram.eigenvalues) expected.push_back(-std::sqrt(lam));
  for (int i = 0; i < t - n; ++i) expected.push_back(0.0);
  for (double lam : gram.eigenvalues) expected.push_back(std::sqrt(lam));
  std::sort(expected.begin(), expected.end());

  BnCheckResult res;
  for (int i = 0; i < n + t; ++i)
    res.max_deviation =
        std::max(res.max_deviation, std::abs(bsolve.eigenvalues()[i] - expected[i]));
  res.pass = res.max_deviation <= tol;
  return res;
}

MpSupport mp_support(double q) {
  if (!(q > 0.0) || q > 1.0) throw std::invalid_argument("mp_support: q in (0, 1]");
  const double s = std::sqrt(q);
  return {(1.0 - s) * (1.0 - s), (1.0 + s) * (1.0 + s)};
}

double mp_density(double x, double q) {
  const MpSupport sup = mp_support(q);
  if (x <= sup.lower || x >= sup.upper) return 0.0;
  return std::sqrt((sup.upper - x) * (x - sup.lower)) /
         (2.0 * std::numbers::pi * q * x);
}

EsdHistogram esd_histogram(std::span<const double> eigenvalues,
                           const BinSpec& bins) {
  if (eigenvalues.empty())
    throw std::invalid_argument("esd_histogram: empty input");
  if (bins.count < 1) throw std::invalid_argument("esd_histogram: count >= 1");
  double lo = bins.lo, hi = bins.hi;
  if (hi <= lo) {
    lo = 0.0;
    hi = *std::max_element(eigenvalues.begin(), eigenvalues.end());
    if (hi <= lo) hi = lo + 1.0;  // all-zero spectrum still gets a bin
  }
  if (bins.log_spaced && lo <= 0.0)
    throw std::invalid_argument("esd_histogram: log bins need lo > 0");

  EsdHistogram h;
  h.bin_edges.resize(bins.count + 1);
  for (int i = 0; i <= bins.count; ++i) {
    const double f = static_cast<double>(i) / bins.count;
    h.bin_edges[i] = bins.log_spaced ? lo * std::pow(hi / lo, f)
                                     : lo + (hi - lo) * f;
  }
  std::vector<long> counts(bins.count, 0);
  long in_range = 0;
  for (double v : eigenvalues) {
    if (v < lo || v > hi) {
      ++h.out_of_range;
      continue;
    }
    int idx;
    if (bins.log_spaced)
      idx = static_cast<int>(std::floor(std::log(v / lo) / std::log(hi / lo) *
                                        bins.count));
    else
      idx = static_cast<int>(std::floor((v - lo) / (hi - lo) * bins.count));
    idx = std::clamp(idx, 0, bins.count - 1);  // right edge joins the last bin
    ++counts[idx];
    ++in_range;
  }
  h.probabilities.resize(bins.count);
  for (int i = 0; i < bins.count; ++i)
    h.probabilities[i] =
        in_range > 0 ? static_cast<double>(counts[i]) / in_range : 0.0;
  return h;
}

EsdHistogram esd_histogram(const SpectrumResult& s, const BinSpec& bins) {
  return esd_histogram(std::span<const double>(s.eigenvalues), bins);
}

}  // namespace mrwspec
