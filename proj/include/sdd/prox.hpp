#pragma once

#include "sdd/cube.hpp"

namespace sdd {

/// Elementwise soft threshold: sign(x) * max(|x| - theta, 0).
Cube soft_threshold(const Cube& x, double theta);

/// Elementwise soft threshold with a per-entry threshold tensor.
Cube soft_threshold(const Cube& x, const Cube& theta);

/// Group shrinkage of mode-3 fibers z(i,j,:) with per-fiber threshold
/// xi(i,j): scales the fiber by (||f||_2 - xi)/||f||_2 when xi < ||f||_2,
/// zeroes it otherwise.
Cube group_shrink_fibers(const Cube& z, const Mat& xi);

/// Group reweighting: out(i,j) = 1 / (||z_hat(i,j,:)||_2 + epsilon).
Mat reweight_group(const Cube& z_hat, double epsilon);

/// Elementwise/target reweighting: out = 1 / (|z_hat| + epsilon).
Cube reweight_abs(const Cube& z_hat, double epsilon);

}  // namespace sdd
