#include "sdd/tensor_ops.hpp"

#include <stdexcept>

namespace sdd {

Mat unfold(const Cube& x, int mode) {
  const int n1 = x.n1(), n2 = x.n2(), n3 = x.n3();
  switch (mode) {
    case 1: {
      Mat m(n1, static_cast<Eigen::Index>(n2) * n3);
      for (int k = 0; k < n3; ++k)
        for (int j = 0; j < n2; ++j)
          for (int i = 0; i < n1; ++i)
            m(i, j + static_cast<Eigen::Index>(n2) * k) = x(i, j, k);
      return m;
    }
    case 2: {
      Mat m(n2, static_cast<Eigen::Index>(n3) * n1);
      for (int k = 0; k < n3; ++k)
        for (int j = 0; j < n2; ++j)
          for (int i = 0; i < n1; ++i)
            m(j, k + static_cast<Eigen::Index>(n3) * i) = x(i, j, k);
      return m;
    }
    case 3:
      // rows are frontal slices flattened column-major: exactly the
      // transpose of the pixel-major view.
      return x.pixel_major().transpose();
    default:
      throw std::invalid_argument("unfold: mode must be 1, 2 or 3");
  }
}

Cube fold(const Mat& m, int mode, std::array<int, 3> dims) {
  const int n1 = dims[0], n2 = dims[1], n3 = dims[2];
  auto bad_shape = [&]() {
    throw std::invalid_argument("fold: matrix shape inconsistent with dims/mode");
  };
  Cube x(n1, n2, n3);
  switch (mode) {
    case 1:
      if (m.rows() != n1 || m.cols() != static_cast<Eigen::Index>(n2) * n3)
        bad_shape();
      for (int k = 0; k < n3; ++k)
        for (int j = 0; j < n2; ++j)
          for (int i = 0; i < n1; ++i)
            x(i, j, k) = m(i, j + static_cast<Eigen::Index>(n2) * k);
      return x;
    case 2:
      if (m.rows() != n2 || m.cols() != static_cast<Eigen::Index>(n3) * n1)
        bad_shape();
      for (int k = 0; k < n3; ++k)
        for (int j = 0; j < n2; ++j)
          for (int i = 0; i < n1; ++i)
            x(i, j, k) = m(j, k + static_cast<Eigen::Index>(n3) * i);
      return x;
    case 3:
      if (m.rows() != n3 || m.cols() != static_cast<Eigen::Index>(n1) * n2)
        bad_shape();
      x.pixel_major() = m.transpose();
      return x;
    default:
      throw std::invalid_argument("fold: mode must be 1, 2 or 3");
  }
}

Cube mode_product(const Cube& x, const Mat& u, int mode) {
  if (mode < 1 || mode > 3)
    throw std::invalid_argument("mode_product: mode must be 1, 2 or 3");
  if (u.cols() != x.dim(mode))
    throw std::invalid_argument("mode_product: u.cols() must equal dims[mode]");
  std::array<int, 3> dims = x.dims();
  dims[mode - 1] = static_cast<int>(u.rows());
  if (mode == 3) {
    // One GEMM on the pixel-major view.
    Cube out(dims[0], dims[1], dims[2]);
    out.pixel_major() = x.pixel_major() * u.transpose();
    return out;
  }
  return fold(u * unfold(x, mode), mode, dims);
}

double norm(const Cube& x, NormKind kind) {
  switch (kind) {
    case NormKind::fro: return x.flat().norm();
    case NormKind::l1: return x.flat().cwiseAbs().sum();
  }
  throw std::invalid_argument("norm: unknown kind");
}

double inner(const Cube& x, const Cube& y) {
  check_same_dims(x, y, "inner");
  return x.flat().dot(y.flat());
}

}  // namespace sdd
