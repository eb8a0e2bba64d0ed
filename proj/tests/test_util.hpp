#pragma once

#include "sdd/cube.hpp"

#include <complex>
#include <numbers>
#include <random>

namespace sdd::testutil {

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

inline Cube random_cube(std::mt19937_64& rng, int n1, int n2, int n3,
                        double lo = -1.0, double hi = 1.0) {
  Cube c(n1, n2, n3);
  auto f = c.flat();
  for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = uniform(rng, lo, hi);
  return c;
}

inline Mat random_mat(std::mt19937_64& rng, int rows, int cols,
                      double lo = -1.0, double hi = 1.0) {
  Mat m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = uniform(rng, lo, hi);
  return m;
}

/// Explicit periodic forward-difference matrix: (Dv)_i = v_{i+1 mod n} - v_i.
inline Mat dense_diff_matrix(int n) {
  Mat d = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    d(i, i) = -1.0;
    d(i, (i + 1) % n) = 1.0;
  }
  return d;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Unnormalized O(n^2) DFT, independent of the FFT used by the library.
inline std::vector<std::complex<double>> slow_dft(const std::vector<double>& v) {
  const int n = static_cast<int>(v.size());
  std::vector<std::complex<double>> out(n);
  for (int k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (int t = 0; t < n; ++t)
      acc += v[t] * std::exp(std::complex<double>(
                        0.0, -2.0 * std::numbers::pi * k * t / n));
    out[k] = acc;
  }
  return out;
}

}  // namespace sdd::testutil
