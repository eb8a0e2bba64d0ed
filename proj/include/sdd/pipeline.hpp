#pragma once

#include "sdd/cube.hpp"
#include "sdd/saliency.hpp"
#include "sdd/solver.hpp"

#include <utility>
#include <vector>

namespace sdd {

/// One connected component extracted from a target slice.
struct Detection {
  int frame = 0;          // global frame index
  double row = 0.0, col = 0.0;  // intensity-weighted centroid
  int r0 = 0, c0 = 0, r1 = 0, c1 = 0;
  double score = 0.0;     // max |target| intensity in the component
  int area = 0;
};

struct PipelineConfig {
  int cube_len = 30;
  int stride = 0;         // 0 -> cube_len (non-overlapping)
  double c_min = 0.1;     // threshold floor on normalized target images
  double d_thresh = 5.0;  // mu + d*sigma multiplier
  SolverConfig solver;
  AsceParams asce;

  int effective_stride() const { return stride == 0 ? cube_len : stride; }
  void validate() const;
};

struct ClippedCube {
  Cube cube;
  int start_frame = 0;  // global index of slice 0
  int valid_len = 0;    // slices beyond this are padding
};

/// Fixed-length windows at the given stride; a short final window is padded
/// by repeating the last frame, with the padded slices excluded from
/// valid_len.
std::vector<ClippedCube> clip_cubes(const std::vector<Mat>& frames,
                                    int cube_len, int stride);

/// Threshold max(c_min, mean + d_thresh*std) over the slice; mask is
/// |t_slice| >= threshold; detections are 8-connected components.
std::pair<Mat, std::vector<Detection>> segment_targets(const Mat& t_slice,
                                                       double c_min,
                                                       double d_thresh);

struct DetectResult {
  std::vector<Detection> detections;
  std::vector<Mat> target_frames;
  std::vector<Mat> background_frames;
  std::vector<Mat> masks;  // 0/1 segmentation masks, one per emitted frame
  std::vector<SolveTrace> traces;  // one per cube
};

/// Full detection chain: per-frame ASCE maps stacked into the enhancement
/// factor, decomposition, per-slice segmentation. Frames are expected in
/// [0,1]. `threads` caps the number of cubes processed concurrently
/// (0 = hardware default); results are merged in frame order.
DetectResult detect_sequence(const std::vector<Mat>& frames,
                             const PipelineConfig& cfg, int threads = 1);

}  // namespace sdd
