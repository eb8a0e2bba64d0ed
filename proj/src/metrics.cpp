#include "sdd/metrics.hpp"

#include "sdd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

namespace sdd {

namespace {

struct RingStats {
  double mean = 0.0;
  double stddev = 0.0;
  double target_max = 0.0;
};

void check_ann(const Mat& image, const TargetAnnotation& ann) {
  if (ann.r0 > ann.r1 || ann.c0 > ann.c1)
    throw std::invalid_argument("TargetAnnotation: empty bbox");
  if (ann.r0 < 0 || ann.c0 < 0 || ann.r1 >= image.rows() ||
      ann.c1 >= image.cols())
    throw std::invalid_argument("TargetAnnotation: bbox outside image");
}

// Population stats of the ring (bbox grown by d, minus the bbox), clipped
// to image bounds; also the bbox max.
RingStats ring_stats(const Mat& image, const TargetAnnotation& ann) {
  check_ann(image, ann);
  const int rows = static_cast<int>(image.rows());
  const int cols = static_cast<int>(image.cols());
  const int rr0 = std::max(0, ann.r0 - ann.d);
  const int cc0 = std::max(0, ann.c0 - ann.d);
  const int rr1 = std::min(rows - 1, ann.r1 + ann.d);
  const int cc1 = std::min(cols - 1, ann.c1 + ann.d);

  double sum = 0.0, sum2 = 0.0;
  long count = 0;
  double tmax = -std::numeric_limits<double>::infinity();
  for (int r = rr0; r <= rr1; ++r)
    for (int c = cc0; c <= cc1; ++c) {
      const bool in_bbox =
          r >= ann.r0 && r <= ann.r1 && c >= ann.c0 && c <= ann.c1;
      if (in_bbox) {
        tmax = std::max(tmax, image(r, c));
      } else {
        sum += image(r, c);
        sum2 += image(r, c) * image(r, c);
        ++count;
      }
    }
  RingStats s;
  s.target_max = tmax;
  if (count > 0) {
    s.mean = sum / count;
    s.stddev = std::sqrt(std::max(sum2 / count - s.mean * s.mean, 0.0));
  }
  return s;
}

}  // namespace

double scr(const Mat& image, const TargetAnnotation& ann, double omega) {
  if (omega <= 0.0) throw std::invalid_argument("scr: omega must be > 0");
  RingStats s = ring_stats(image, ann);
  return std::abs(s.target_max - s.mean) / (s.stddev + omega);
}

double bsf(const Mat& original, const Mat& suppressed,
           const TargetAnnotation& ann, double omega) {
  if (original.rows() != suppressed.rows() ||
      original.cols() != suppressed.cols())
    throw std::invalid_argument("bsf: shape mismatch");
  if (omega <= 0.0) throw std::invalid_argument("bsf: omega must be > 0");
  RingStats in = ring_stats(original, ann);
  RingStats out = ring_stats(suppressed, ann);
  return in.stddev / (out.stddev + omega);
}

double gscr(const Mat& original, const Mat& target_img,
            const TargetAnnotation& ann, double omega) {
  const double in_scr = scr(original, ann, omega);
  if (in_scr == 0.0) throw UndefinedMetricError("gscr: in_SCR is zero");
  return scr(target_img, ann, omega) / in_scr;
}

double cg(const Mat& original, const Mat& target_img,
          const TargetAnnotation& ann) {
  RingStats in = ring_stats(original, ann);
  RingStats out = ring_stats(target_img, ann);
  const double con_in = std::abs(in.target_max - in.mean);
  if (con_in == 0.0) throw UndefinedMetricError("cg: CON_in is zero");
  return std::abs(out.target_max - out.mean) / con_in;
}

RocCurve roc(const std::vector<Mat>& score_maps,
             const std::vector<TargetAnnotation>& ground_truth, int window) {
  if (ground_truth.empty())
    throw std::invalid_argument("roc: ground truth required");
  if (score_maps.empty())
    throw std::invalid_argument("roc: score maps required");
  const int half = window / 2;

  std::map<int, std::vector<const TargetAnnotation*>> gt_by_frame;
  for (const auto& g : ground_truth) gt_by_frame[g.frame].push_back(&g);

  double smin = std::numeric_limits<double>::infinity();
  double smax = -smin;
  for (const auto& m : score_maps) {
    smin = std::min(smin, m.minCoeff());
    smax = std::max(smax, m.maxCoeff());
  }

  // Deterministic threshold ladder over the score range, plus an anchor
  // above the maximum. The global minimum itself is excluded: a threshold
  // every pixel passes merges the frame into one blob that always touches
  // the ground truth and would distort the low-threshold end of the curve.
  const int levels = 128;
  std::vector<double> thresholds;
  thresholds.push_back(std::nextafter(smax, std::numeric_limits<double>::max()));
  for (int i = 0; i < levels; ++i)
    thresholds.push_back(smax - (smax - smin) * i / levels);

  const long total_targets = static_cast<long>(ground_truth.size());
  const long num_images = static_cast<long>(score_maps.size());

  RocCurve curve;
  for (double th : thresholds) {
    long detected = 0;
    long false_dets = 0;
    for (std::size_t f = 0; f < score_maps.size(); ++f) {
      const Mat& m = score_maps[f];
      const int rows = static_cast<int>(m.rows());
      const int cols = static_cast<int>(m.cols());
      auto it = gt_by_frame.find(static_cast<int>(f));
      const std::vector<const TargetAnnotation*>* gts =
          it == gt_by_frame.end() ? nullptr : &it->second;

      // Detected targets: any above-threshold pixel inside the window.
      if (gts) {
        for (const auto* g : *gts) {
          const int cr = (g->r0 + g->r1) / 2;
          const int cc = (g->c0 + g->c1) / 2;
          bool hit = false;
          for (int r = std::max(0, cr - half); !hit && r <= std::min(rows - 1, cr + half); ++r)
            for (int c = std::max(0, cc - half); c <= std::min(cols - 1, cc + half); ++c)
              if (m(r, c) >= th) { hit = true; break; }
          if (hit) ++detected;
        }
      }

      // False detections: connected components with no ground-truth window.
      std::vector<char> visited(static_cast<std::size_t>(rows) * cols, 0);
      auto idx = [cols](int r, int c) { return static_cast<std::size_t>(r) * cols + c; };
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
          if (m(r, c) < th || visited[idx(r, c)]) continue;
          bool matches_gt = false;
          std::queue<std::pair<int, int>> q;
          q.push({r, c});
          visited[idx(r, c)] = 1;
          while (!q.empty()) {
            auto [pr, pc] = q.front();
            q.pop();
            if (gts && !matches_gt) {
              for (const auto* g : *gts) {
                const int cr = (g->r0 + g->r1) / 2;
                const int cc = (g->c0 + g->c1) / 2;
                if (std::abs(pr - cr) <= half && std::abs(pc - cc) <= half) {
                  matches_gt = true;
                  break;
                }
              }
            }
            for (int dr = -1; dr <= 1; ++dr)
              for (int dc = -1; dc <= 1; ++dc) {
                const int nr = pr + dr, nc = pc + dc;
                if (nr < 0 || nc < 0 || nr >= rows || nc >= cols) continue;
                if (m(nr, nc) < th || visited[idx(nr, nc)]) continue;
                visited[idx(nr, nc)] = 1;
                q.push({nr, nc});
              }
          }
          if (!matches_gt) ++false_dets;
        }
    }
    const double pd = static_cast<double>(detected) / total_targets;
    const double fa = static_cast<double>(false_dets) / num_images;
    curve.points.emplace_back(fa, pd);
  }

  std::sort(curve.points.begin(), curve.points.end());
  // Keep the best pd at each fa so the curve is nondecreasing.
  for (std::size_t i = 1; i < curve.points.size(); ++i)
    curve.points[i].second =
        std::max(curve.points[i].second, curve.points[i - 1].second);

  double auc = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& [fa0, pd0] = curve.points[i - 1];
    const auto& [fa1, pd1] = curve.points[i];
    auc += 0.5 * (pd0 + pd1) * (fa1 - fa0);
  }
  curve.auc_raw = auc;
  const double max_fa = curve.points.back().first;
  if (max_fa > 0.0) {
    curve.auc_normalized = auc / max_fa;
  } else {
    double pd_at_zero = 0.0;
    for (const auto& [fa, pd] : curve.points)
      if (fa == 0.0) pd_at_zero = std::max(pd_at_zero, pd);
    curve.auc_normalized = pd_at_zero;
  }
  return curve;
}

double DirectionalVariance::max() const {
  return std::max({vh, vv, vd1, vd2});
}

DirectionalVariance directional_variance(const Mat& image, int r0, int c0,
                                         int r1, int c1) {
  if (r1 - r0 < 1 || c1 - c0 < 1)
    throw std::invalid_argument("directional_variance: region must be >= 2x2");
  if (r0 < 0 || c0 < 0 || r1 >= image.rows() || c1 >= image.cols())
    throw std::invalid_argument("directional_variance: region outside image");

  auto variance = [](const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return acc / static_cast<double>(v.size());
  };

  std::vector<double> h, v, d1, d2;
  for (int r = r0; r <= r1; ++r)
    for (int c = c0; c <= c1; ++c) {
      if (c + 1 <= c1) h.push_back(image(r, c + 1) - image(r, c));
      if (r + 1 <= r1) v.push_back(image(r + 1, c) - image(r, c));
      if (r + 1 <= r1 && c + 1 <= c1)
        d1.push_back(image(r + 1, c + 1) - image(r, c));
      if (r + 1 <= r1 && c - 1 >= c0)
        d2.push_back(image(r + 1, c - 1) - image(r, c));
    }

  DirectionalVariance out;
  out.vh = variance(h);
  out.vv = variance(v);
  out.vd1 = variance(d1);
  out.vd2 = variance(d2);
  return out;
}

DirectionalBands directional_bands(double variance) {
  DirectionalBands b;
  b.homogeneous = variance >= 0.0 && variance <= 10.0;
  b.target = variance >= 5.0 && variance <= 20.0;
  b.clutter = variance >= 20.0;
  return b;
}

}  // namespace sdd
