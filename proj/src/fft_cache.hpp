#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace mrwspec::detail {

// Plan creation is the only non-thread-safe part of FFTW; every plan in the
// library is made under this lock. Plans use FFTW_UNALIGNED so they can run
// on any caller buffer via the new-array execute interface.
class FftCache {
 public:
  static FftCache& instance() {
    static FftCache cache;
    return cache;
  }

  // out-of-place c2c on caller buffers of length n
  void transform(int n, int sign, std::complex<double>* in,
                 std::complex<double>* out) {
    fftw_plan plan;
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto key = std::make_pair(n, sign);
      auto it = plans_.find(key);
      if (it == plans_.end()) {
        std::vector<std::complex<double>> a(n), b(n);
        plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(a.data()),
                                reinterpret_cast<fftw_complex*>(b.data()), sign,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, plan);
      } else {
        plan = it->second;
      }
    }
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in),
                     reinterpret_cast<fftw_complex*>(out));
  }

  // in-place batched c2c plan bound to buf (howmany rows of length n). The
  // caller owns the plan; destroy through destroy_plan below.
  fftw_plan make_many_plan(int n, int howmany, std::complex<double>* buf,
                           int sign) {
    std::lock_guard<std::mutex> lock(mu_);
    auto* b = reinterpret_cast<fftw_complex*>(buf);
    return fftw_plan_many_dft(1, &n, howmany, b, nullptr, 1, n, b, nullptr, 1, n,
                              sign, FFTW_ESTIMATE);
  }

  void destroy_plan(fftw_plan plan) {
    std::lock_guard<std::mutex> lock(mu_);
    fftw_destroy_plan(plan);
  }

 private:
  FftCache() = default;
  std::mutex mu_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

}  // namespace mrwspec::detail
