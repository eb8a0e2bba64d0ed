#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace sdd {

using Mat = Eigen::MatrixXd;

/// Dense 3-way array of 64-bit reals.
///
/// Storage order: (i, j, k) -> i + n1*(j + n2*k), so each frontal slice k is a
/// contiguous column-major n1 x n2 block and the whole buffer doubles as the
/// (n1*n2) x n3 pixel-major matrix used by the mode-3 fast paths.
class Cube {
 public:
  Cube() = default;

  Cube(int n1, int n2, int n3, double fill = 0.0)
      : n1_(n1), n2_(n2), n3_(n3) {
    if (n1 < 1 || n2 < 1 || n3 < 1)
      throw std::invalid_argument("Cube: dims must be >= 1");
    data_.assign(static_cast<std::size_t>(n1) * n2 * n3, fill);
  }

  int n1() const { return n1_; }
  int n2() const { return n2_; }
  int n3() const { return n3_; }
  std::array<int, 3> dims() const { return {n1_, n2_, n3_}; }
  int dim(int mode) const {
    switch (mode) {
      case 1: return n1_;
      case 2: return n2_;
      case 3: return n3_;
      default: throw std::invalid_argument("Cube::dim: mode must be 1, 2 or 3");
    }
  }
  std::size_t size() const { return data_.size(); }

  double operator()(int i, int j, int k) const { return data_[index(i, j, k)]; }
  double& operator()(int i, int j, int k) { return data_[index(i, j, k)]; }

  const double* data() const { return data_.data(); }
  double* data() { return data_.data(); }

  Eigen::Map<const Mat> slice(int k) const {
    return Eigen::Map<const Mat>(data_.data() + slice_offset(k), n1_, n2_);
  }
  Eigen::Map<Mat> slice(int k) {
    return Eigen::Map<Mat>(data_.data() + slice_offset(k), n1_, n2_);
  }

  /// (n1*n2) x n3 view; column k is frontal slice k flattened column-major.
  Eigen::Map<const Mat> pixel_major() const {
    return Eigen::Map<const Mat>(data_.data(),
                                 static_cast<Eigen::Index>(n1_) * n2_, n3_);
  }
  Eigen::Map<Mat> pixel_major() {
    return Eigen::Map<Mat>(data_.data(),
                           static_cast<Eigen::Index>(n1_) * n2_, n3_);
  }

  Eigen::Map<const Eigen::VectorXd> flat() const {
    return Eigen::Map<const Eigen::VectorXd>(data_.data(), data_.size());
  }
  Eigen::Map<Eigen::VectorXd> flat() {
    return Eigen::Map<Eigen::VectorXd>(data_.data(), data_.size());
  }

  bool same_dims(const Cube& o) const {
    return n1_ == o.n1_ && n2_ == o.n2_ && n3_ == o.n3_;
  }

  bool all_finite() const {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

 private:
  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(n1_) *
               (static_cast<std::size_t>(j) +
                static_cast<std::size_t>(n2_) * static_cast<std::size_t>(k));
  }
  std::size_t slice_offset(int k) const {
    return static_cast<std::size_t>(n1_) * n2_ * k;
  }

  int n1_ = 0, n2_ = 0, n3_ = 0;
  std::vector<double> data_;
};

inline void check_same_dims(const Cube& a, const Cube& b, const char* where) {
  if (!a.same_dims(b))
    throw std::invalid_argument(std::string(where) + ": dimension mismatch");
}

inline Cube operator+(const Cube& a, const Cube& b) {
  check_same_dims(a, b, "Cube operator+");
  Cube out = a;
  out.flat() += b.flat();
  return out;
}

inline Cube operator-(const Cube& a, const Cube& b) {
  check_same_dims(a, b, "Cube operator-");
  Cube out = a;
  out.flat() -= b.flat();
  return out;
}

inline Cube operator*(double s, const Cube& a) {
  Cube out = a;
  out.flat() *= s;
  return out;
}

inline Cube hadamard(const Cube& a, const Cube& b) {
  check_same_dims(a, b, "hadamard");
  Cube out = a;
  out.flat() = out.flat().cwiseProduct(b.flat());
  return out;
}

}  // namespace sdd
