#include "sdd/diff_ops.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sdd {

namespace {

void check_mode3(int mode, const char* where) {
  if (mode < 1 || mode > 3)
    throw std::invalid_argument(std::string(where) + ": mode must be 1, 2 or 3");
}

}  // namespace

Cube apply_diff(const Cube& x, int mode) {
  check_mode3(mode, "apply_diff");
  const int n1 = x.n1(), n2 = x.n2(), n3 = x.n3();
  Cube out(n1, n2, n3);
  for (int k = 0; k < n3; ++k)
    for (int j = 0; j < n2; ++j)
      for (int i = 0; i < n1; ++i) {
        double next;
        switch (mode) {
          case 1: next = x((i + 1) % n1, j, k); break;
          case 2: next = x(i, (j + 1) % n2, k); break;
          default: next = x(i, j, (k + 1) % n3); break;
        }
        out(i, j, k) = next - x(i, j, k);
      }
  return out;
}

Cube apply_diff_adjoint(const Cube& x, int mode) {
  check_mode3(mode, "apply_diff_adjoint");
  const int n1 = x.n1(), n2 = x.n2(), n3 = x.n3();
  Cube out(n1, n2, n3);
  for (int k = 0; k < n3; ++k)
    for (int j = 0; j < n2; ++j)
      for (int i = 0; i < n1; ++i) {
        double prev;
        switch (mode) {
          case 1: prev = x((i + n1 - 1) % n1, j, k); break;
          case 2: prev = x(i, (j + n2 - 1) % n2, k); break;
          default: prev = x(i, j, (k + n3 - 1) % n3); break;
        }
        out(i, j, k) = prev - x(i, j, k);
      }
  return out;
}

Mat apply_diff(const Mat& x, int mode) {
  if (mode != 1 && mode != 2)
    throw std::invalid_argument("apply_diff(Mat): mode must be 1 or 2");
  Mat out(x.rows(), x.cols());
  const Eigen::Index n = (mode == 1) ? x.rows() : x.cols();
  for (Eigen::Index c = 0; c < x.cols(); ++c)
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      double next = (mode == 1) ? x((r + 1) % n, c) : x(r, (c + 1) % n);
      out(r, c) = next - x(r, c);
    }
  return out;
}

Mat apply_diff_adjoint(const Mat& x, int mode) {
  if (mode != 1 && mode != 2)
    throw std::invalid_argument("apply_diff_adjoint(Mat): mode must be 1 or 2");
  Mat out(x.rows(), x.cols());
  const Eigen::Index n = (mode == 1) ? x.rows() : x.cols();
  for (Eigen::Index c = 0; c < x.cols(); ++c)
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      double prev = (mode == 1) ? x((r + n - 1) % n, c) : x(r, (c + n - 1) % n);
      out(r, c) = prev - x(r, c);
    }
  return out;
}

DiffSpectrum diff_gram_spectrum(int n) {
  if (n < 1) throw std::invalid_argument("diff_gram_spectrum: n must be >= 1");
  DiffSpectrum s;
  s.values.resize(n);
  for (int k = 0; k < n; ++k)
    s.values[k] = 2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * k / n);
  s.values[0] = 0.0;
  return s;
}

}  // namespace sdd
