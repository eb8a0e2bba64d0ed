#include "sdd/saliency.hpp"

#include "test_util.hpp"

#include <doctest.h>
#include <Eigen/Eigenvalues>

using namespace sdd;
using namespace sdd::testutil;

TEST_CASE("gradient of a linear ramp is constant") {
  Mat frame(6, 8);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 8; ++j) frame(i, j) = 2.0 * j - 3.0 * i;
  Mat ix, iy;
  gradient(frame, ix, iy);
  CHECK((ix.array() - 2.0).abs().maxCoeff() <= 1e-12);
  CHECK((iy.array() + 3.0).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("gradient uses one-sided differences at the borders") {
  Mat frame(2, 3);
  frame << 0, 1, 4,
           0, 1, 4;
  Mat ix, iy;
  gradient(frame, ix, iy);
  CHECK(ix(0, 0) == 1.0);   // forward: 1-0
  CHECK(ix(0, 1) == 2.0);   // central: (4-0)/2
  CHECK(ix(0, 2) == 3.0);   // backward: 4-1
  CHECK(iy.cwiseAbs().maxCoeff() == 0.0);
  Mat tiny(1, 3);
  tiny << 0, 1, 4;
  CHECK_THROWS_AS(gradient(tiny, ix, iy), std::invalid_argument);
}

TEST_CASE("gaussian smoothing preserves constants and the mean") {
  Mat flat = Mat::Constant(9, 11, 4.0);
  Mat s = gaussian_smooth(flat, 1.5);
  CHECK((s.array() - 4.0).abs().maxCoeff() <= 1e-12);

  // A unit impulse must keep total mass 1 when the kernel stays inside the
  // image (replicate boundary only redistributes at edges).
  Mat impulse = Mat::Zero(21, 21);
  impulse(10, 10) = 1.0;
  Mat b = gaussian_smooth(impulse, 1.0);
  CHECK(b.sum() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(b(10, 10) == b.maxCoeff());
  CHECK(b.minCoeff() >= 0.0);
  // Truncation radius ceil(3*sigma) = 3: nothing beyond it.
  CHECK(b(10, 14) == 0.0);
  CHECK(b(14, 10) == 0.0);
  CHECK(b(10, 13) > 0.0);
}

TEST_CASE("gaussian smoothing is separable and symmetric") {
  std::mt19937_64 rng(41);
  Mat img = random_mat(rng, 12, 12, 0.0, 1.0);
  Mat s = gaussian_smooth(img, 2.0);
  Mat st = gaussian_smooth(Mat(img.transpose()), 2.0);
  CHECK((s.transpose() - st).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK_THROWS_AS(gaussian_smooth(img, 0.0), std::invalid_argument);
}

TEST_CASE("structure tensor is pointwise positive semidefinite") {
  std::mt19937_64 rng(42);
  Mat frame = random_mat(rng, 16, 16, 0.0, 1.0);
  StructureField f = structure_tensor(frame, 1.5);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      CHECK(f.jxx(i, j) >= -1e-12);
      CHECK(f.jyy(i, j) >= -1e-12);
      double det = f.jxx(i, j) * f.jyy(i, j) - f.jxy(i, j) * f.jxy(i, j);
      CHECK(det >= -1e-9);
    }
}

TEST_CASE("closed-form eigenvalues match the dense 2x2 eigensolver") {
  std::mt19937_64 rng(43);
  Mat frame = random_mat(rng, 10, 10, 0.0, 1.0);
  StructureField f = structure_tensor(frame, 1.0);
  Mat ep, em;
  eigen_pairs(f, ep, em);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      Eigen::Matrix2d m;
      m << f.jxx(i, j), f.jxy(i, j), f.jxy(i, j), f.jyy(i, j);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
      CHECK(std::abs(ep(i, j) - es.eigenvalues()[1]) <= 1e-10);
      CHECK(std::abs(em(i, j) - std::max(0.0, es.eigenvalues()[0])) <= 1e-10);
      CHECK(ep(i, j) >= em(i, j));
      CHECK(em(i, j) >= 0.0);
    }
}

TEST_CASE("ASCE lives in [0,1) and is near zero on flat images") {
  AsceParams p;
  Mat flat = Mat::Constant(20, 20, 0.3);
  Mat a = asce(flat, p);
  CHECK(a.cwiseAbs().maxCoeff() <= 1e-9);

  std::mt19937_64 rng(44);
  Mat busy = random_mat(rng, 20, 20, 0.0, 1.0);
  Mat b = asce(busy, p);
  CHECK(b.minCoeff() >= 0.0);
  CHECK(b.maxCoeff() < 1.0);
}

TEST_CASE("ASCE responds more to an isolated blob than to a smooth ramp") {
  AsceParams p;
  Mat blob = Mat::Constant(21, 21, 0.1);
  for (int i = 9; i <= 11; ++i)
    for (int j = 9; j <= 11; ++j) blob(i, j) = 0.9;
  Mat ramp(21, 21);
  for (int i = 0; i < 21; ++i)
    for (int j = 0; j < 21; ++j) ramp(i, j) = 0.1 + 0.02 * j;
  double blob_peak = asce(blob, p).maxCoeff();
  double ramp_peak = asce(ramp, p).maxCoeff();
  CHECK(blob_peak > 4.0 * ramp_peak);
}

TEST_CASE("ASCE parameter validation") {
  AsceParams p;
  p.sigma = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = AsceParams{};
  p.delta = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = AsceParams{};
  p.alpha = {1.0, -0.5, 1.0};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("enhancement factor applies the per-frame mean+5*variance gate") {
  // Frame values: fifteen 0.1 entries and one 0.9.
  // mean = (15*0.1 + 0.9)/16 = 0.15
  // population var = (15*(0.05)^2 + (0.75)^2)/16 = 0.0375
  // T_s = 0.15 + 5*0.0375 = 0.3375; only the 0.9 entry passes.
  Cube stack(4, 4, 1, 0.1);
  stack(2, 2, 0) = 0.9;
  Cube w = enhancement_factor(stack);
  CHECK(w(2, 2, 0) == doctest::Approx(1.9));
  CHECK(w(0, 0, 0) == doctest::Approx(0.1));
  CHECK(w.flat().minCoeff() >= 0.0);
  CHECK(w.flat().maxCoeff() < 2.0);
}

TEST_CASE("enhancement factor treats frames independently") {
  Cube stack(4, 4, 2, 0.1);
  stack(2, 2, 0) = 0.9;
  // Second frame is flat: T_s = 0.1, every entry passes.
  Cube w = enhancement_factor(stack);
  CHECK(w(0, 0, 1) == doctest::Approx(1.1));
  CHECK(w(2, 2, 1) == doctest::Approx(1.1));
  CHECK(w(0, 0, 0) == doctest::Approx(0.1));
}
