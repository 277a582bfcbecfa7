#include "mrwspec/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mrwspec/field.hpp"
#include "mrwspec/parallel.hpp"
#include "picard_operator.hpp"

namespace mrwspec {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Shared tail of the inversion paths: clamp negatives, integrate mass over
// converged stretches, record what the clamp removed.
DensityCurve assemble_curve(std::span<const double> x_points,
                           std::span<const Complex> mu2,
                           std::span<const char> ok, double eps_im) {
  DensityCurve c;
  c.eps_im = eps_im;
  c.x_points.assign(x_points.begin(), x_points.end());
  c.converged.assign(ok.begin(), ok.end());
  const std::size_t n = x_points.size();
  std::vector<double> raw(n, kNan);
  c.values.assign(n, kNan);
  for (std::size_t j = 0; j < n; ++j) {
    if (!ok[j]) continue;
    raw[j] = mu2[j].imag() / std::numbers::pi;
    c.values[j] = std::max(raw[j], 0.0);
  }
  for (std::size_t j = 0; j + 1 < n; ++j) {
    if (!ok[j] || !ok[j + 1]) continue;
    const double dx = x_points[j + 1] - x_points[j];
    c.mass += 0.5 * (c.values[j] + c.values[j + 1]) * dx;
    c.clamped_mass += 0.5 * (std::max(0.0, -raw[j]) + std::max(0.0, -raw[j + 1])) * dx;
  }
  return c;
}

}  // namespace

DensityCurve invert_stieltjes(const std::function<Complex(Complex)>& mu2_at,
                              std::span<const double> x_points, double eps_im) {
  if (!(eps_im > 0.0))
    throw std::invalid_argument("invert_stieltjes: eps_im must be > 0");
  const std::size_t n = x_points.size();
  std::vector<Complex> mu2(n);
  std::vector<char> ok(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    try {
      mu2[j] = mu2_at(Complex(x_points[j], -eps_im));
      ok[j] = 1;
    } catch (const NonConvergence&) {
      // point stays missing; callers see the hole instead of an interpolation
    }
  }
  return assemble_curve(x_points, mu2, ok, eps_im);
}

DensityCurve push_forward_square(const DensityCurve& ups) {
  DensityCurve out;
  out.eps_im = ups.eps_im;
  for (std::size_t j = 0; j < ups.x_points.size(); ++j) {
    const double x = ups.x_points[j];
    if (x <= 0.0) continue;  // lambda = 0 is outside the pushed-forward grid
    out.x_points.push_back(x * x);
    out.values.push_back(ups.values[j] / x);
    out.converged.push_back(ups.converged[j]);
  }
  for (std::size_t j = 0; j + 1 < out.x_points.size(); ++j) {
    if (!out.converged[j] || !out.converged[j + 1]) continue;
    out.mass += 0.5 * (out.values[j] + out.values[j + 1]) *
                (out.x_points[j + 1] - out.x_points[j]);
  }
  return out;
}

Complex stieltjes_of_spectrum(const SpectrumResult& s, Complex z) {
  if (z.imag() == 0.0)
    throw std::invalid_argument("stieltjes_of_spectrum: Im z must be nonzero");
  Complex acc(0.0, 0.0);
  for (double lam : s.eigenvalues) acc += 1.0 / (z - lam);
  return acc / static_cast<double>(s.eigenvalues.size());
}

double curve_mass(const DensityCurve& c, double from, double to) {
  double acc = 0.0;
  for (std::size_t j = 0; j + 1 < c.x_points.size(); ++j) {
    if (!c.converged.empty() && (!c.converged[j] || !c.converged[j + 1])) continue;
    double a = c.x_points[j], b = c.x_points[j + 1];
    if (b <= from || a >= to) continue;
    const double va = c.values[j], vb = c.values[j + 1];
    const double lo = std::max(a, from), hi = std::min(b, to);
    // linear interpolation of the curve on the clipped piece
    auto at = [&](double x) { return va + (vb - va) * (x - a) / (b - a); };
    acc += 0.5 * (at(lo) + at(hi)) * (hi - lo);
  }
  return acc;
}

UpsilonResult solve_upsilon(const UpsilonJob& job,
                            std::span<const double> x_points) {
  if (!(job.eps_im > 0.0))
    throw std::invalid_argument("solve_upsilon: eps_im must be > 0");
  const double eps = job.eps_im;
  const double q = job.model.q;
  const SolverEnsemble ensemble = build_mrm_ensemble(
      job.base, job.model.gamma2, job.model.tau, job.threads);
  const double eta = job.base.effective_eta_k();

  const int points = static_cast<int>(x_points.size());
  std::vector<Complex> mu_eff(points);
  std::vector<char> ok(points, 0);
  // In-offset ladder for cold starts, neighbour warm starts inside a chunk.
  // Chunks are independent, so scheduling them across threads cannot change
  // any value; 16 balances ladder overhead against warm-start quality.
  constexpr int kChunk = 16;
  const int chunks = (points + kChunk - 1) / kChunk;
  std::vector<std::vector<PointDiag>> chunk_diags(chunks);
  std::vector<int> chunk_converged(chunks, 0);

  parallel_for(0, chunks, job.threads, [&](int c) {
    detail::PicardOperator op(
        ensemble, q, eta,
        [&](double lag) {
          return ln_plus_kernel(lag, job.model.gamma2, job.model.tau, eta);
        },
        1);
    auto& diags = chunk_diags[c];
    std::vector<Complex> warm_2eps;
    bool have_warm = false;
    const int begin = c * kChunk, end = std::min(points, begin + kChunk);
    for (int i = begin; i < end; ++i) {
      const double x = x_points[i];
      // stage = multiple of eps to solve at; 1 is the point itself. Every
      // point passes through 2 eps so the final stage starts close enough to
      // finish within the iteration budget.
      const std::vector<int> stages = have_warm
                                          ? std::vector<int>{2, 1}
                                          : std::vector<int>{16, 8, 4, 2, 1};
      std::vector<Complex> ladder;  // values of the previous mult > 2 stage
      bool failed = false;
      Complex mu_eps{}, mu_2eps{};
      for (std::size_t s = 0; s < stages.size() && !failed; ++s) {
        const int mult = stages[s];
        SolverConfig cfg = job.base;
        cfg.z = Complex(x, -mult * eps);
        cfg.threads = 1;
        const std::vector<Complex>* init = nullptr;
        if (mult == 1)
          init = warm_2eps.empty() ? nullptr : &warm_2eps;
        else if (mult == 2)
          init = s > 0 ? &ladder : (have_warm ? &warm_2eps : nullptr);
        else
          init = s > 0 ? &ladder : nullptr;
        const bool record_always =
            mult == 1 || (mult == 2 && job.richardson);
        try {
          KFunction k = detail::solve_with_operator(op, cfg, q, init);
          if (record_always)
            diags.push_back({cfg.z, k.iterations, k.residual, k.mu2,
                             ensemble.max_clipped_ratio, true, mult == 2});
          if (mult == 1) {
            mu_eps = k.mu2;
          } else if (mult == 2) {
            mu_2eps = k.mu2;
            warm_2eps = std::move(k.values);
          } else {
            ladder = std::move(k.values);
          }
        } catch (const NonConvergence& e) {
          diags.push_back({cfg.z, e.iterations, e.residual, Complex(0.0, 0.0),
                           ensemble.max_clipped_ratio, false, mult == 2});
          failed = true;
        }
      }
      if (failed) {
        have_warm = false;  // restart the ladder at the next point
        continue;
      }
      have_warm = true;
      mu_eff[i] = job.richardson ? 2.0 * mu_eps - mu_2eps : mu_eps;
      ok[i] = 1;
      ++chunk_converged[c];
    }
  });

  UpsilonResult res;
  res.upsilon = assemble_curve(x_points, mu_eff, ok, eps);
  res.max_clipped_ratio = ensemble.max_clipped_ratio;
  for (int c = 0; c < chunks; ++c) {
    res.converged_points += chunk_converged[c];
    res.diagnostics.insert(res.diagnostics.end(), chunk_diags[c].begin(),
                           chunk_diags[c].end());
  }
  return res;
}

}  // namespace mrwspec
