#include "sdd/tensor_ops.hpp"

#include "test_util.hpp"

#include <doctest.h>

using namespace sdd;
using namespace sdd::testutil;

TEST_CASE("unfold of a 1x1x1 cube is a 1x1 matrix") {
  Cube x(1, 1, 1);
  x(0, 0, 0) = 3.25;
  for (int mode = 1; mode <= 3; ++mode) {
    Mat m = unfold(x, mode);
    REQUIRE(m.rows() == 1);
    REQUIRE(m.cols() == 1);
    CHECK(m(0, 0) == 3.25);
  }
}

TEST_CASE("mode-3 unfolding of the 2x2x2 digit cube matches the enumerated fibers") {
  // x(i,j,k) = 100(i+1) + 10(j+1) + (k+1); mode-3 fibers enumerated by hand
  // with the cyclic column order (i fastest, then j).
  Cube x(2, 2, 2);
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 2; ++i)
        x(i, j, k) = 100.0 * (i + 1) + 10.0 * (j + 1) + (k + 1);
  Mat m = unfold(x, 3);
  REQUIRE(m.rows() == 2);
  REQUIRE(m.cols() == 4);
  Mat expected(2, 4);
  expected << 111, 211, 121, 221,
              112, 212, 122, 222;
  CHECK(m == expected);
  CHECK(fold(m, 3, {2, 2, 2}).flat() == x.flat());
}

TEST_CASE("fold is the exact inverse of unfold for all modes") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n1 = 1 + static_cast<int>(rng() % 5);
    const int n2 = 1 + static_cast<int>(rng() % 5);
    const int n3 = 1 + static_cast<int>(rng() % 5);
    Cube x = random_cube(rng, n1, n2, n3);
    for (int mode = 1; mode <= 3; ++mode) {
      Cube back = fold(unfold(x, mode), mode, x.dims());
      CHECK(back.flat() == x.flat());
    }
  }
}

TEST_CASE("fold of a 1x1 matrix gives a 1x1x1 cube") {
  Mat m(1, 1);
  m(0, 0) = -2.0;
  Cube x = fold(m, 2, {1, 1, 1});
  CHECK(x(0, 0, 0) == -2.0);
}

TEST_CASE("unfold rejects invalid modes; fold rejects shape mismatch") {
  Cube x(2, 3, 4);
  CHECK_THROWS_AS(unfold(x, 0), std::invalid_argument);
  CHECK_THROWS_AS(unfold(x, 4), std::invalid_argument);
  Mat m(2, 5);
  CHECK_THROWS_AS(fold(m, 1, {2, 3, 4}), std::invalid_argument);
}

TEST_CASE("mode product with identity leaves the cube unchanged") {
  std::mt19937_64 rng(12);
  Cube x = random_cube(rng, 3, 4, 5);
  for (int mode = 1; mode <= 3; ++mode) {
    Mat eye = Mat::Identity(x.dim(mode), x.dim(mode));
    CHECK(mode_product(x, eye, mode).flat() == x.flat());
  }
}

TEST_CASE("mode product satisfies the unfolding identity") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const int n1 = 2 + static_cast<int>(rng() % 3);
    const int n2 = 2 + static_cast<int>(rng() % 3);
    const int n3 = 2 + static_cast<int>(rng() % 3);
    const int mode = 1 + static_cast<int>(rng() % 3);
    Cube x = random_cube(rng, n1, n2, n3);
    const int rows = 1 + static_cast<int>(rng() % 4);
    Mat u = random_mat(rng, rows, x.dim(mode));
    Cube y = mode_product(x, u, mode);
    Mat lhs = unfold(y, mode);
    Mat rhs = u * unfold(x, mode);
    CHECK((lhs - rhs).norm() <= 1e-12 * std::max(1.0, rhs.norm()));
  }
}

TEST_CASE("mode-3 product with a row of ones sums the frontal slices") {
  Cube x(2, 2, 2);
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 2; ++i) x(i, j, k) = i + 10 * j + 100 * k;
  Mat ones(1, 2);
  ones << 1, 1;
  Cube y = mode_product(x, ones, 3);
  REQUIRE(y.n3() == 1);
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i)
      CHECK(y(i, j, 0) == x(i, j, 0) + x(i, j, 1));
}

TEST_CASE("mode product rejects dimension mismatch") {
  Cube x(2, 3, 4);
  Mat u(2, 5);
  CHECK_THROWS_AS(mode_product(x, u, 1), std::invalid_argument);
}

TEST_CASE("mode products on distinct modes commute") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    Cube x = random_cube(rng, 3, 4, 5);
    Mat u = random_mat(rng, 2, 3);
    Mat v = random_mat(rng, 6, 5);
    Cube a = mode_product(mode_product(x, u, 1), v, 3);
    Cube b = mode_product(mode_product(x, v, 3), u, 1);
    CHECK((a.flat() - b.flat()).norm() <= 1e-12 * std::max(1.0, b.flat().norm()));
  }
}

TEST_CASE("norms on closed-form cubes") {
  Cube zero(2, 3, 4);
  CHECK(norm(zero, NormKind::fro) == 0.0);
  CHECK(norm(zero, NormKind::l1) == 0.0);

  Cube ones(2, 3, 4, 1.0);
  CHECK(norm(ones, NormKind::fro) == doctest::Approx(std::sqrt(24.0)));
  CHECK(norm(ones, NormKind::l1) == doctest::Approx(24.0));

  std::mt19937_64 rng(15);
  Cube x = random_cube(rng, 3, 3, 3);
  CHECK(norm(-1.0 * x, NormKind::fro) == doctest::Approx(norm(x, NormKind::fro)));
}

TEST_CASE("inner products") {
  std::mt19937_64 rng(16);
  Cube x = random_cube(rng, 2, 3, 4);
  Cube zero(2, 3, 4);
  CHECK(inner(x, zero) == 0.0);
  CHECK(inner(x, x) ==
        doctest::Approx(norm(x, NormKind::fro) * norm(x, NormKind::fro)));

  Cube a(2, 1, 1), b(2, 1, 1);
  a(0, 0, 0) = 1; a(1, 0, 0) = 2;
  b(0, 0, 0) = 3; b(1, 0, 0) = 4;
  CHECK(inner(a, b) == 11.0);

  Cube wrong(3, 1, 1);
  CHECK_THROWS_AS(inner(a, wrong), std::invalid_argument);
}
