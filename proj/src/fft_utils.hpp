#pragma once

#include <complex>

namespace sdd::fft {

/// In-place complex DFT of length n. Unnormalized forward; the inverse
/// divides by n so that inverse(forward(x)) == x.
void transform_1d(std::complex<double>* data, int n, bool inverse);

/// In-place complex 2-D DFT of a column-major n1 x n2 array (index i + n1*j).
void transform_2d(std::complex<double>* data, int n1, int n2, bool inverse);

}  // namespace sdd::fft
