#include "mrwspec/compare.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mrwspec {

UpsilonCdf::UpsilonCdf(const DensityCurve& ups) {
  // keep converged points only; a dropped point bridges its neighbours
  for (std::size_t j = 0; j < ups.x_points.size(); ++j) {
    const bool ok = ups.converged.empty() || ups.converged[j];
    if (!ok || !std::isfinite(ups.values[j])) continue;
    x_.push_back(ups.x_points[j]);
    v_.push_back(ups.values[j]);
  }
  cum_.assign(x_.size(), 0.0);
  for (std::size_t j = 1; j < x_.size(); ++j)
    cum_[j] = cum_[j - 1] + 0.5 * (v_[j] + v_[j - 1]) * (x_[j] - x_[j - 1]);
}

double UpsilonCdf::operator()(double lam) const {
  if (x_.empty() || lam <= 0.0) return 0.0;
  const double s = std::sqrt(lam);
  if (s <= x_.front()) return 0.0;
  if (s >= x_.back()) return 2.0 * cum_.back();
  const auto it = std::upper_bound(x_.begin(), x_.end(), s);
  const std::size_t j = static_cast<std::size_t>(it - x_.begin()) - 1;
  const double t = (s - x_[j]) / (x_[j + 1] - x_[j]);
  const double vs = v_[j] + t * (v_[j + 1] - v_[j]);
  return 2.0 * (cum_[j] + 0.5 * (v_[j] + vs) * (s - x_[j]));
}

double ks_distance(std::span<const double> sorted_sample,
                   const std::function<double(double)>& cdf, double lo,
                   double hi) {
  const double n = static_cast<double>(sorted_sample.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < sorted_sample.size(); ++i) {
    const double lam = sorted_sample[i];
    if (lam < lo || lam > hi) continue;
    const double f = cdf(lam);
    // empirical CDF jumps at lam: compare against both sides of the step
    sup = std::max(sup, std::abs(f - static_cast<double>(i + 1) / n));
    sup = std::max(sup, std::abs(f - static_cast<double>(i) / n));
  }
  return sup;
}

CompareReport compare_sim_theory(std::span<const double> eigenvalues,
                                 const DensityCurve& upsilon,
                                 const DensityCurve& density,
                                 const EsdHistogram& hist, double window_lo,
                                 double window_hi,
                                 std::span<const double> tail_thresholds) {
  CompareReport rep;
  std::vector<double> sorted(eigenvalues.begin(), eigenvalues.end());
  std::sort(sorted.begin(), sorted.end());

  if (window_hi > window_lo) {
    rep.window_lo = window_lo;
    rep.window_hi = window_hi;
  } else {
    rep.window_lo = std::max(hist.bin_edges.front(), density.x_points.front());
    rep.window_hi = std::min(hist.bin_edges.back(), density.x_points.back());
  }

  const UpsilonCdf cdf(upsilon);
  rep.ks = ks_distance(sorted, cdf, rep.window_lo, rep.window_hi);

  for (std::size_t b = 0; b + 1 < hist.bin_edges.size(); ++b) {
    const double a = hist.bin_edges[b], c = hist.bin_edges[b + 1];
    const double lo = std::max(a, rep.window_lo), hi = std::min(c, rep.window_hi);
    if (hi <= lo) continue;
    const double sim_d = hist.probabilities[b] / (c - a);
    const double thy_d = curve_mass(density, lo, hi) / (hi - lo);
    rep.l1 += std::abs(sim_d - thy_d) * (hi - lo);
  }

  const double default_thr[] = {4.0};
  std::span<const double> thrs =
      tail_thresholds.empty() ? std::span<const double>(default_thr)
                              : tail_thresholds;
  const double total = static_cast<double>(sorted.size());
  for (double thr : thrs) {
    TailRow row;
    row.threshold = thr;
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), thr);
    row.sim_mass = static_cast<double>(sorted.end() - it) / std::max(total, 1.0);
    row.theory_mass = std::max(0.0, cdf.total_mass() - cdf(thr));
    rep.tails.push_back(row);
  }

  std::ostringstream os;
  os << "window [" << rep.window_lo << ", " << rep.window_hi << "]\n"
     << "ks " << rep.ks << "\n"
     << "l1 " << rep.l1 << "\n";
  for (const auto& t : rep.tails)
    os << "tail>" << t.threshold << " sim " << t.sim_mass << " theory "
       << t.theory_mass << "\n";
  rep.text = os.str();
  return rep;
}

}  // namespace mrwspec
