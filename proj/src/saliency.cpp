#include "sdd/saliency.hpp"

#include "sdd/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace sdd {

void AsceParams::validate() const {
  if (sigma <= 0.0) throw std::invalid_argument("AsceParams: sigma must be > 0");
  for (double a : alpha)
    if (a < 0.0) throw std::invalid_argument("AsceParams: alpha must be >= 0");
  if (delta <= 0.0) throw std::invalid_argument("AsceParams: delta must be > 0");
}

void gradient(const Mat& frame, Mat& ix, Mat& iy) {
  const Eigen::Index rows = frame.rows(), cols = frame.cols();
  if (rows < 2 || cols < 2)
    throw std::invalid_argument("gradient: frame must be at least 2x2");
  ix.resize(rows, cols);
  iy.resize(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (c == 0)
        ix(r, c) = frame(r, 1) - frame(r, 0);
      else if (c == cols - 1)
        ix(r, c) = frame(r, cols - 1) - frame(r, cols - 2);
      else
        ix(r, c) = 0.5 * (frame(r, c + 1) - frame(r, c - 1));

      if (r == 0)
        iy(r, c) = frame(1, c) - frame(0, c);
      else if (r == rows - 1)
        iy(r, c) = frame(rows - 1, c) - frame(rows - 2, c);
      else
        iy(r, c) = 0.5 * (frame(r + 1, c) - frame(r - 1, c));
    }
}

Mat gaussian_smooth(const Mat& image, double sigma) {
  if (sigma <= 0.0)
    throw std::invalid_argument("gaussian_smooth: sigma must be > 0");
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int t = -radius; t <= radius; ++t) {
    kernel[t + radius] = std::exp(-0.5 * t * t / (sigma * sigma));
    sum += kernel[t + radius];
  }
  for (double& v : kernel) v /= sum;

  const Eigen::Index rows = image.rows(), cols = image.cols();
  auto clampi = [](Eigen::Index v, Eigen::Index n) {
    return v < 0 ? 0 : (v >= n ? n - 1 : v);
  };

  Mat tmp(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (int t = -radius; t <= radius; ++t)
        acc += kernel[t + radius] * image(clampi(r + t, rows), c);
      tmp(r, c) = acc;
    }
  Mat out(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (int t = -radius; t <= radius; ++t)
        acc += kernel[t + radius] * tmp(r, clampi(c + t, cols));
      out(r, c) = acc;
    }
  return out;
}

StructureField structure_tensor(const Mat& frame, double sigma) {
  if (sigma <= 0.0)
    throw std::invalid_argument("structure_tensor: sigma must be > 0");
  Mat ix, iy;
  gradient(frame, ix, iy);
  StructureField f;
  f.sigma = sigma;
  f.jxx = gaussian_smooth(ix.cwiseProduct(ix), sigma);
  f.jxy = gaussian_smooth(ix.cwiseProduct(iy), sigma);
  f.jyy = gaussian_smooth(iy.cwiseProduct(iy), sigma);
  return f;
}

void eigen_pairs(const StructureField& field, Mat& e_plus, Mat& e_minus) {
  const Eigen::Index rows = field.jxx.rows(), cols = field.jxx.cols();
  e_plus.resize(rows, cols);
  e_minus.resize(rows, cols);
  const double scale =
      std::max({field.jxx.cwiseAbs().maxCoeff(), field.jyy.cwiseAbs().maxCoeff(),
                field.jxy.cwiseAbs().maxCoeff(), 1e-300});
  const double tol = 1e-9 * scale;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      const double a = field.jxx(r, c), b = field.jxy(r, c), d = field.jyy(r, c);
      const double tr = a + d;
      const double disc = std::sqrt(std::max((a - d) * (a - d) + 4.0 * b * b, 0.0));
      double ep = 0.5 * (tr + disc);
      double em = 0.5 * (tr - disc);
      if (em < -tol)
        throw NumericError("eigen_pairs: structure field not PSD within tolerance");
      e_plus(r, c) = std::max(ep, 0.0);
      e_minus(r, c) = std::max(em, 0.0);
    }
}

Mat asce(const Mat& frame, const AsceParams& params) {
  params.validate();
  StructureField field = structure_tensor(frame, params.sigma);
  Mat ep, em;
  eigen_pairs(field, ep, em);
  const double d = params.delta;
  Mat out(frame.rows(), frame.cols());
  for (Eigen::Index r = 0; r < frame.rows(); ++r)
    for (Eigen::Index c = 0; c < frame.cols(); ++c) {
      const double p = ep(r, c), m = em(r, c);
      const double c1 = std::sqrt(std::abs(p * m));
      const double c2 = std::abs((p + m) / std::sqrt(p - m + d));
      const double c3 = p * m / (p + m + d);
      out(r, c) = 1.0 - std::exp(-(params.alpha[0] * c1 + params.alpha[1] * c2 +
                                   params.alpha[2] * c3));
    }
  return out;
}

Cube enhancement_factor(const Cube& asce_stack) {
  const int n1 = asce_stack.n1(), n2 = asce_stack.n2(), n3 = asce_stack.n3();
  Cube out = asce_stack;
  const double count = static_cast<double>(n1) * n2;
  for (int k = 0; k < n3; ++k) {
    auto s = out.slice(k);
    const double mean = s.mean();
    const double var = (s.array() - mean).square().sum() / count;
    const double ts = mean + 5.0 * var;
    for (int j = 0; j < n2; ++j)
      for (int i = 0; i < n1; ++i)
        if (s(i, j) >= ts) s(i, j) += 1.0;
  }
  return out;
}

}  // namespace sdd
