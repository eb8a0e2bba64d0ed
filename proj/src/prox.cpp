#include "sdd/prox.hpp"

#include <cmath>
#include <stdexcept>

namespace sdd {

Cube soft_threshold(const Cube& x, double theta) {
  if (theta < 0.0)
    throw std::invalid_argument("soft_threshold: theta must be >= 0");
  Cube out = x;
  auto f = out.flat();
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    double v = f[i];
    double m = std::abs(v) - theta;
    f[i] = m > 0.0 ? (v < 0.0 ? -m : m) : 0.0;
  }
  return out;
}

Cube soft_threshold(const Cube& x, const Cube& theta) {
  check_same_dims(x, theta, "soft_threshold");
  Cube out = x;
  auto f = out.flat();
  auto t = theta.flat();
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    if (t[i] < 0.0)
      throw std::invalid_argument("soft_threshold: theta entries must be >= 0");
    double v = f[i];
    double m = std::abs(v) - t[i];
    f[i] = m > 0.0 ? (v < 0.0 ? -m : m) : 0.0;
  }
  return out;
}

Cube group_shrink_fibers(const Cube& z, const Mat& xi) {
  if (xi.rows() != z.n1() || xi.cols() != z.n2())
    throw std::invalid_argument("group_shrink_fibers: xi must be n1 x n2");
  const int n1 = z.n1(), n2 = z.n2(), n3 = z.n3();
  Cube out(n1, n2, n3);
  for (int j = 0; j < n2; ++j)
    for (int i = 0; i < n1; ++i) {
      if (xi(i, j) < 0.0)
        throw std::invalid_argument("group_shrink_fibers: xi entries must be >= 0");
      double nrm = 0.0;
      for (int k = 0; k < n3; ++k) nrm += z(i, j, k) * z(i, j, k);
      nrm = std::sqrt(nrm);
      if (xi(i, j) < nrm) {
        double scale = (nrm - xi(i, j)) / nrm;
        for (int k = 0; k < n3; ++k) out(i, j, k) = scale * z(i, j, k);
      }
      // else the fiber stays zero
    }
  return out;
}

Mat reweight_group(const Cube& z_hat, double epsilon) {
  if (epsilon <= 0.0)
    throw std::invalid_argument("reweight_group: epsilon must be > 0");
  const int n1 = z_hat.n1(), n2 = z_hat.n2(), n3 = z_hat.n3();
  Mat w(n1, n2);
  for (int j = 0; j < n2; ++j)
    for (int i = 0; i < n1; ++i) {
      double nrm = 0.0;
      for (int k = 0; k < n3; ++k) nrm += z_hat(i, j, k) * z_hat(i, j, k);
      w(i, j) = 1.0 / (std::sqrt(nrm) + epsilon);
    }
  return w;
}

Cube reweight_abs(const Cube& z_hat, double epsilon) {
  if (epsilon <= 0.0)
    throw std::invalid_argument("reweight_abs: epsilon must be > 0");
  Cube out = z_hat;
  auto f = out.flat();
  for (Eigen::Index i = 0; i < f.size(); ++i)
    f[i] = 1.0 / (std::abs(f[i]) + epsilon);
  return out;
}

}  // namespace sdd
