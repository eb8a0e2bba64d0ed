#pragma once

#include "sdd/cube.hpp"

#include <vector>

namespace sdd {

/// Periodic first-order forward difference along the chosen mode:
/// out(i) = x(i+1 mod n) - x(i).
Cube apply_diff(const Cube& x, int mode);

/// Adjoint of apply_diff: out(i) = x(i-1 mod n) - x(i).
Cube apply_diff_adjoint(const Cube& x, int mode);

/// Matrix overloads; mode 1 differences down the rows (realizes D*A for the
/// temporal factor), mode 2 across the columns.
Mat apply_diff(const Mat& x, int mode);
Mat apply_diff_adjoint(const Mat& x, int mode);

/// Eigenvalues of the periodic D^T D under the DFT basis,
/// values[k] = 2 - 2*cos(2*pi*k/n).
struct DiffSpectrum {
  std::vector<double> values;
};

DiffSpectrum diff_gram_spectrum(int n);

}  // namespace sdd
