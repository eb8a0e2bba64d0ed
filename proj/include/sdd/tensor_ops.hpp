#pragma once

#include "sdd/cube.hpp"

namespace sdd {

/// Mode-n unfolding with the cyclic column convention:
///   mode 1: column index j + n2*k
///   mode 2: column index k + n3*i
///   mode 3: column index i + n1*j
/// chosen so that mode_product(x, U, n) <=> U * unfold(x, n) and the mode-3
/// unfolding rows are frontal slices flattened column-major.
Mat unfold(const Cube& x, int mode);

/// Exact inverse of unfold for the given mode and target dims.
Cube fold(const Mat& m, int mode, std::array<int, 3> dims);

/// x times_n u: replaces dims[mode] by u.rows(); u.cols() must equal dims[mode].
Cube mode_product(const Cube& x, const Mat& u, int mode);

enum class NormKind { fro, l1 };

double norm(const Cube& x, NormKind kind);

double inner(const Cube& x, const Cube& y);

}  // namespace sdd
