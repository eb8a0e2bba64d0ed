#include "sdd/metrics.hpp"

#include "sdd/errors.hpp"
#include "test_util.hpp"

#include <doctest.h>

using namespace sdd;
using namespace sdd::testutil;

namespace {

// Independent brute-force ring statistics used as the oracle.
struct BruteRing {
  double mean, stddev, tmax;
};

BruteRing brute_ring(const Mat& img, const TargetAnnotation& ann) {
  std::vector<double> ring;
  double tmax = -1e300;
  for (int r = 0; r < img.rows(); ++r)
    for (int c = 0; c < img.cols(); ++c) {
      bool in_box = r >= ann.r0 && r <= ann.r1 && c >= ann.c0 && c <= ann.c1;
      bool in_big = r >= ann.r0 - ann.d && r <= ann.r1 + ann.d &&
                    c >= ann.c0 - ann.d && c <= ann.c1 + ann.d;
      if (in_box) tmax = std::max(tmax, img(r, c));
      if (in_big && !in_box) ring.push_back(img(r, c));
    }
  double mean = 0.0;
  for (double x : ring) mean += x;
  mean /= static_cast<double>(ring.size());
  double var = 0.0;
  for (double x : ring) var += (x - mean) * (x - mean);
  var /= static_cast<double>(ring.size());
  return {mean, std::sqrt(var), tmax};
}

}  // namespace

TEST_CASE("SCR on a flat ring reduces to |M_t - mu|/omega") {
  Mat img = Mat::Constant(9, 9, 10.0);
  img(4, 4) = 50.0;
  TargetAnnotation ann{0, 4, 4, 4, 4, 2};
  CHECK(scr(img, ann) == doctest::Approx((50.0 - 10.0) / 0.01));
}

TEST_CASE("SCR matches the brute-force ring oracle on random images") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    Mat img = random_mat(rng, 40, 40, 0.0, 255.0);
    TargetAnnotation ann{0, 17, 18, 20, 22, 6};
    BruteRing o = brute_ring(img, ann);
    CHECK(scr(img, ann) ==
          doctest::Approx(std::abs(o.tmax - o.mean) / (o.stddev + 0.01)));
  }
}

TEST_CASE("SCR ring is clipped at image borders") {
  std::mt19937_64 rng(62);
  Mat img = random_mat(rng, 12, 12, 0.0, 1.0);
  TargetAnnotation ann{0, 0, 0, 1, 1, 30};  // ring covers the whole image
  BruteRing o = brute_ring(img, ann);
  CHECK(scr(img, ann) ==
        doctest::Approx(std::abs(o.tmax - o.mean) / (o.stddev + 0.01)));
}

TEST_CASE("SCR rejects invalid annotations and omega") {
  Mat img = Mat::Zero(8, 8);
  CHECK_THROWS_AS(scr(img, TargetAnnotation{0, 3, 3, 2, 3, 2}),
                  std::invalid_argument);
  CHECK_THROWS_AS(scr(img, TargetAnnotation{0, 3, 3, 9, 3, 2}),
                  std::invalid_argument);
  CHECK_THROWS_AS(scr(img, TargetAnnotation{0, 3, 3, 3, 3, 2}, 0.0),
                  std::invalid_argument);
}

TEST_CASE("BSF is the ratio of ring standard deviations") {
  std::mt19937_64 rng(63);
  Mat in = random_mat(rng, 30, 30, 0.0, 200.0);
  Mat out = random_mat(rng, 30, 30, 0.0, 5.0);
  TargetAnnotation ann{0, 14, 14, 15, 15, 8};
  BruteRing oi = brute_ring(in, ann);
  BruteRing oo = brute_ring(out, ann);
  CHECK(bsf(in, out, ann) == doctest::Approx(oi.stddev / (oo.stddev + 0.01)));

  // Perfect suppression: flat output ring.
  Mat flat = Mat::Zero(30, 30);
  CHECK(bsf(in, flat, ann) == doctest::Approx(oi.stddev / 0.01));
  CHECK_THROWS_AS(bsf(in, Mat::Zero(4, 4), ann), std::invalid_argument);
}

TEST_CASE("G_SCR and CG on hand-built images") {
  Mat in = Mat::Constant(9, 9, 10.0);
  in(4, 4) = 20.0;
  Mat out = Mat::Zero(9, 9);
  out(4, 4) = 50.0;
  TargetAnnotation ann{0, 4, 4, 4, 4, 2};
  // in: SCR = 10/0.01 = 1000; out: SCR = 50/0.01 = 5000.
  CHECK(gscr(in, out, ann) == doctest::Approx(5.0));
  // CON_in = 10, CON_out = 50.
  CHECK(cg(in, out, ann) == doctest::Approx(5.0));

  Mat flat = Mat::Constant(9, 9, 10.0);
  CHECK_THROWS_AS(gscr(flat, out, ann), UndefinedMetricError);
  CHECK_THROWS_AS(cg(flat, out, ann), UndefinedMetricError);
}

TEST_CASE("ROC on a clean scenario: perfect targets, one false blob") {
  std::vector<Mat> maps(2, Mat::Zero(16, 16));
  maps[0](4, 4) = 1.0;
  maps[1](4, 4) = 1.0;
  maps[0](12, 12) = 0.5;  // false detection far from the target window
  std::vector<TargetAnnotation> gt{{0, 4, 4, 4, 4, 30}, {1, 4, 4, 4, 4, 30}};

  RocCurve curve = roc(maps, gt);
  REQUIRE(!curve.points.empty());
  // Every ground truth carries the global max, so pd = 1 at every real
  // threshold; only the above-max anchor point sits at pd = 0.
  double max_fa = 0.0, pd_at_zero = 0.0;
  for (const auto& [fa, pd] : curve.points) {
    CHECK(fa >= 0.0);
    if (fa > 0.0) CHECK(pd == 1.0);
    if (fa == 0.0) pd_at_zero = std::max(pd_at_zero, pd);
    max_fa = std::max(max_fa, fa);
  }
  CHECK(pd_at_zero == 1.0);
  // One false component over two images at low thresholds.
  CHECK(max_fa == doctest::Approx(0.5));
  CHECK(curve.auc_normalized == doctest::Approx(1.0));
  CHECK(curve.auc_raw == doctest::Approx(0.5));
}

TEST_CASE("ROC: missed target lowers pd at low false-alarm rates") {
  std::vector<Mat> maps(2, Mat::Zero(16, 16));
  maps[0](4, 4) = 1.0;
  maps[1](12, 12) = 0.8;  // no response near the frame-1 target
  std::vector<TargetAnnotation> gt{{0, 4, 4, 4, 4, 30}, {1, 4, 4, 4, 4, 30}};

  RocCurve curve = roc(maps, gt);
  double pd_at_zero = 0.0;
  for (const auto& [fa, pd] : curve.points)
    if (fa == 0.0) pd_at_zero = std::max(pd_at_zero, pd);
  CHECK(pd_at_zero == doctest::Approx(0.5));
  // Sorted-by-fa with a running max keeps the curve monotone.
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    CHECK(curve.points[i].first >= curve.points[i - 1].first);
    CHECK(curve.points[i].second >= curve.points[i - 1].second);
  }
}

TEST_CASE("ROC window: a hit within the 5x5 box counts, outside does not") {
  std::vector<Mat> near(1, Mat::Zero(16, 16));
  near[0](6, 6) = 1.0;  // 2 pixels from the gt center, inside the window
  std::vector<Mat> far(1, Mat::Zero(16, 16));
  far[0](7, 7) = 1.0;  // 3 pixels away, outside
  std::vector<TargetAnnotation> gt{{0, 4, 4, 4, 4, 30}};

  RocCurve cn = roc(near, gt);
  double pd0 = 0.0;
  for (const auto& [fa, pd] : cn.points)
    if (fa == 0.0) pd0 = std::max(pd0, pd);
  CHECK(pd0 == 1.0);

  RocCurve cf = roc(far, gt);
  bool has_fa0_pd1 = false;
  for (const auto& [fa, pd] : cf.points)
    if (fa == 0.0 && pd == 1.0) has_fa0_pd1 = true;
  CHECK(!has_fa0_pd1);
}

TEST_CASE("ROC input validation") {
  std::vector<Mat> maps(1, Mat::Zero(8, 8));
  CHECK_THROWS_AS(roc(maps, {}), std::invalid_argument);
  std::vector<TargetAnnotation> gt{{0, 1, 1, 1, 1, 30}};
  CHECK_THROWS_AS(roc({}, gt), std::invalid_argument);
}

TEST_CASE("directional variance on constructed patterns") {
  // Constant image: all differences zero.
  Mat flat = Mat::Constant(8, 8, 3.0);
  DirectionalVariance v = directional_variance(flat, 0, 0, 7, 7);
  CHECK(v.max() == 0.0);

  // Vertical stripes alternating 0/a: horizontal diffs alternate +-a
  // (variance a^2), vertical diffs are all zero.
  Mat stripes(6, 6);
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) stripes(r, c) = (c % 2 == 0) ? 0.0 : 4.0;
  // Per row: diffs +4,-4,+4,-4,+4 -> mean 0.8, population variance 15.36.
  DirectionalVariance sv = directional_variance(stripes, 0, 0, 5, 5);
  CHECK(sv.vh == doctest::Approx(15.36));
  CHECK(sv.vv == doctest::Approx(0.0));
  CHECK(sv.vd1 == doctest::Approx(15.36));
  CHECK(sv.vd2 == doctest::Approx(15.36));

  // Linear ramp: all directional differences constant, so variance zero.
  Mat ramp(6, 6);
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) ramp(r, c) = 3.0 * r + 2.0 * c;
  CHECK(directional_variance(ramp, 0, 0, 5, 5).max() <= 1e-12);

  CHECK_THROWS_AS(directional_variance(flat, 0, 0, 0, 5),
                  std::invalid_argument);
  CHECK_THROWS_AS(directional_variance(flat, 0, 0, 9, 9),
                  std::invalid_argument);
}

TEST_CASE("directional variance sub-region selection") {
  std::mt19937_64 rng(64);
  Mat img = random_mat(rng, 10, 10, 0.0, 255.0);
  Mat sub = img.block(2, 3, 5, 4);
  DirectionalVariance a = directional_variance(img, 2, 3, 6, 6);
  DirectionalVariance b = directional_variance(sub, 0, 0, 4, 3);
  CHECK(a.vh == doctest::Approx(b.vh));
  CHECK(a.vv == doctest::Approx(b.vv));
  CHECK(a.vd1 == doctest::Approx(b.vd1));
  CHECK(a.vd2 == doctest::Approx(b.vd2));
}

TEST_CASE("directional band membership with overlapping edges") {
  DirectionalBands b0 = directional_bands(0.0);
  CHECK(b0.homogeneous);
  CHECK(!b0.target);
  CHECK(!b0.clutter);

  DirectionalBands b7 = directional_bands(7.0);
  CHECK(b7.homogeneous);
  CHECK(b7.target);
  CHECK(!b7.clutter);

  DirectionalBands b15 = directional_bands(15.0);
  CHECK(!b15.homogeneous);
  CHECK(b15.target);
  CHECK(!b15.clutter);

  DirectionalBands b20 = directional_bands(20.0);
  CHECK(b20.target);
  CHECK(b20.clutter);

  DirectionalBands b99 = directional_bands(99.0);
  CHECK(!b99.target);
  CHECK(b99.clutter);
}
