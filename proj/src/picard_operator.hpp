#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include <fftw3.h>

#include "mrwspec/solver.hpp"

namespace mrwspec::detail {

// One application of the fixed-point map for a fixed measure ensemble.
//
// The inner integrals sum_t w(|t-x|) g(t) m_e(t) over all grid points x are a
// Toeplitz matvec per member; they are evaluated exactly as a circular
// convolution on the doubled grid, batched over the ensemble in one FFT pass.
// The ensemble average is accumulated in fixed blocks of 64 members summed in
// block order, so results never depend on the thread count.
class PicardOperator {
 public:
  PicardOperator(const SolverEnsemble& ensemble, double q, double eta_k,
                 const std::function<double(double)>& kernel, int threads = 1);
  ~PicardOperator();
  PicardOperator(const PicardOperator&) = delete;
  PicardOperator& operator=(const PicardOperator&) = delete;

  int n_points() const { return n_; }
  const SolverEnsemble& ensemble() const { return ens_; }

  std::vector<Complex> apply(std::span<const Complex> g, Complex z);

 private:
  const SolverEnsemble& ens_;
  double q_;
  int n_, len_, members_;
  int threads_;
  std::vector<Complex> khat_;  // FFT of the circulant kernel row, scaled 1/len
  std::vector<Complex> buf_;   // members x len, in-place transforms
  std::vector<Complex> block_sums_;
  fftw_plan fwd_ = nullptr, bwd_ = nullptr;
};

// solve_k body that reuses a prepared operator (and so its FFT workspace)
// across many z; used by the inversion sweep.
KFunction solve_with_operator(PicardOperator& op, const SolverConfig& config,
                              double q, const std::vector<Complex>* initial);

}  // namespace mrwspec::detail
