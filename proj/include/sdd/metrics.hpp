#pragma once

#include "sdd/cube.hpp"

#include <utility>
#include <vector>

namespace sdd {

/// Target extent plus the half-width of the surrounding neighborhood ring.
struct TargetAnnotation {
  int frame = 0;
  int r0 = 0, c0 = 0, r1 = 0, c1 = 0;  // inclusive bbox
  int d = 30;                          // neighborhood half-width
};

/// SCR = |M_t - mu_b| / (sigma_b + omega); M_t is the bbox max, mu_b/sigma_b
/// are population stats of the (a+2d) x (b+2d) ring excluding the bbox,
/// clipped to image bounds.
double scr(const Mat& image, const TargetAnnotation& ann, double omega = 0.01);

/// BSF = sigma_in / (sigma_out + omega) over the neighborhood ring.
double bsf(const Mat& original, const Mat& suppressed,
           const TargetAnnotation& ann, double omega = 0.01);

/// G_SCR = out_SCR / in_SCR.
double gscr(const Mat& original, const Mat& target_img,
            const TargetAnnotation& ann, double omega = 0.01);

/// CG = CON_out / CON_in with CON = |M_t - mu_b|.
double cg(const Mat& original, const Mat& target_img,
          const TargetAnnotation& ann);

struct RocCurve {
  std::vector<std::pair<double, double>> points;  // (fa, pd) sorted by fa
  double auc_raw = 0.0;
  double auc_normalized = 0.0;
};

/// Threshold sweep over per-frame score maps. A ground-truth target counts
/// detected when any above-threshold pixel falls in the window x window box
/// centered on its bbox center; components matching no ground truth are
/// false detections, counted per image.
RocCurve roc(const std::vector<Mat>& score_maps,
             const std::vector<TargetAnnotation>& ground_truth,
             int window = 5);

struct DirectionalVariance {
  double vh = 0.0, vv = 0.0, vd1 = 0.0, vd2 = 0.0;
  double max() const;
};

/// Population variance of adjacent-pixel differences along the horizontal,
/// vertical and two diagonal directions within the inclusive region.
DirectionalVariance directional_variance(const Mat& image, int r0, int c0,
                                         int r1, int c1);

/// Band membership for a directional-variance score on the 8-bit scale:
/// homogeneous [0,10], target [5,20], clutter >= 20. Bands overlap.
struct DirectionalBands {
  bool homogeneous = false;
  bool target = false;
  bool clutter = false;
};

DirectionalBands directional_bands(double variance);

}  // namespace sdd
