#pragma once

#include "sdd/cube.hpp"

#include <cstdint>
#include <vector>

namespace sdd {

struct TargetSpec {
  double row = 0.0, col = 0.0;   // start position
  double v_row = 0.0, v_col = 0.0;  // px/frame
  double sigma = 1.0;            // blob scale, px
  double scr_in = 8.0;           // requested SCR on the clean scene
};

struct SceneSpec {
  int n1 = 64, n2 = 64, n_frames = 30;

  // Background: fixed plane gradient plus smooth bumps whose amplitudes
  // modulate over time; bump centers drift at drift_velocity px/frame.
  double plane_amplitude = 20.0;  // 8-bit units across the image
  int bump_count = 3;
  double bump_scale = 30.0;       // bump amplitude, 8-bit units
  double drift_velocity = 0.0;    // px/frame

  // Clutter: parallel oriented step edges.
  int edge_count = 0;
  double edge_amplitude = 40.0;   // 8-bit units
  double edge_orientation_deg = 90.0;

  std::vector<TargetSpec> targets;
  double noise_std = 0.0;         // 8-bit units
  std::uint64_t seed = 0;

  void validate() const;
};

struct FrameTruth {
  std::vector<std::pair<double, double>> centroids;  // (row, col) per target
  Mat mask;  // 1 where the target layer is >= 1% of its peak
};

struct GroundTruth {
  std::vector<FrameTruth> frames;
  std::vector<double> amplitudes;  // per target, 8-bit units
};

struct Scene {
  std::vector<Mat> frames;  // 8-bit quantized values stored as doubles
  GroundTruth gt;
};

/// Deterministic synthetic infrared sequence: low-rank drifting background,
/// oriented step clutter, Gaussian-blob targets with amplitudes solved so the
/// measured SCR matches the request, additive Gaussian noise, clamped to
/// [0,255] and quantized.
Scene generate(const SceneSpec& spec);

}  // namespace sdd
