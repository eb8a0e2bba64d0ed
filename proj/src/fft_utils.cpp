#include "fft_utils.hpp"

#include <fftw3.h>

namespace sdd::fft {

void transform_1d(std::complex<double>* data, int n, bool inverse) {
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_plan plan = fftw_plan_dft_1d(n, buf, buf,
                                    inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                                    FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  if (inverse) {
    const double scale = 1.0 / n;
    for (int i = 0; i < n; ++i) data[i] *= scale;
  }
}

void transform_2d(std::complex<double>* data, int n1, int n2, bool inverse) {
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  // Column-major n1 x n2 equals row-major n2 x n1; FFTW takes the slow
  // dimension first.
  fftw_plan plan = fftw_plan_dft_2d(n2, n1, buf, buf,
                                    inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                                    FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  if (inverse) {
    const double scale = 1.0 / (static_cast<double>(n1) * n2);
    const long total = static_cast<long>(n1) * n2;
    for (long i = 0; i < total; ++i) data[i] *= scale;
  }
}

}  // namespace sdd::fft
