#pragma once

#include "sdd/cube.hpp"

#include <array>

namespace sdd {

/// Gaussian-smoothed outer-product gradient entries of one frame.
struct StructureField {
  Mat jxx, jxy, jyy;
  double sigma = 0.0;
};

struct AsceParams {
  double sigma = 1.5;
  std::array<double, 3> alpha{1.0, 1.0, 1.0};
  double delta = 1e-3;

  void validate() const;
};

/// Image gradient: central differences in the interior, one-sided at borders.
/// ix differentiates across columns, iy down rows.
void gradient(const Mat& frame, Mat& ix, Mat& iy);

/// Separable Gaussian smoothing, kernel truncated at radius ceil(3*sigma),
/// renormalized to unit sum, replicate boundary.
Mat gaussian_smooth(const Mat& image, double sigma);

StructureField structure_tensor(const Mat& frame, double sigma);

/// Closed-form eigenvalues of the per-pixel symmetric 2x2 matrices,
/// e_plus >= e_minus, clamped to >= 0 after a small-tolerance PSD check.
void eigen_pairs(const StructureField& field, Mat& e_plus, Mat& e_minus);

/// Saliency coherence map in [0,1): 1 - exp(-sum_i alpha_i * C_i).
Mat asce(const Mat& frame, const AsceParams& params);

/// Per-frame threshold T_s = mean + 5*var; entries >= T_s mapped to 1+value.
Cube enhancement_factor(const Cube& asce_stack);

}  // namespace sdd
