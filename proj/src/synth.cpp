#include "sdd/synth.hpp"

#include "sdd/errors.hpp"
#include "sdd/metrics.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace sdd {

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller from the raw stream; avoids std::normal_distribution so the
// byte-identical determinism guarantee does not depend on the stdlib.
double gauss(std::mt19937_64& rng) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

struct Bump {
  double row, col;       // base center
  double v_row, v_col;   // drift, px/frame
  double width;
  double amp;
  double mod_freq, mod_phase;  // temporal amplitude modulation
};

struct Edge {
  double offset;  // signed distance of the line from the image center
  double nx, ny;  // unit normal
  double amp;
};

// Clean scene content (background + clutter), continuous values.
Mat render_clean(const SceneSpec& spec, const std::vector<Bump>& bumps,
                 const std::vector<Edge>& edges, double plane_gr,
                 double plane_gc, double plane_base, int frame) {
  Mat img(spec.n1, spec.n2);
  const double cr = 0.5 * (spec.n1 - 1), cc = 0.5 * (spec.n2 - 1);
  for (int i = 0; i < spec.n1; ++i)
    for (int j = 0; j < spec.n2; ++j) {
      double v = plane_base + plane_gr * i + plane_gc * j;
      for (const auto& b : bumps) {
        const double br = b.row + b.v_row * frame;
        const double bc = b.col + b.v_col * frame;
        const double d2 = (i - br) * (i - br) + (j - bc) * (j - bc);
        const double a =
            b.amp * (1.0 + 0.1 * std::sin(b.mod_freq * frame + b.mod_phase));
        v += a * std::exp(-0.5 * d2 / (b.width * b.width));
      }
      for (const auto& e : edges) {
        const double s = (i - cr) * e.nx + (j - cc) * e.ny - e.offset;
        if (s >= 0.0) v += e.amp;
      }
      img(i, j) = v;
    }
  return img;
}

Mat target_layer(const TargetSpec& t, double amp, int n1, int n2, int frame) {
  Mat layer = Mat::Zero(n1, n2);
  const double tr = t.row + t.v_row * frame;
  const double tc = t.col + t.v_col * frame;
  const int rad = static_cast<int>(std::ceil(4.0 * t.sigma)) + 1;
  for (int i = std::max(0, static_cast<int>(tr) - rad);
       i <= std::min(n1 - 1, static_cast<int>(tr) + rad); ++i)
    for (int j = std::max(0, static_cast<int>(tc) - rad);
         j <= std::min(n2 - 1, static_cast<int>(tc) + rad); ++j) {
      const double d2 = (i - tr) * (i - tr) + (j - tc) * (j - tc);
      layer(i, j) = amp * std::exp(-0.5 * d2 / (t.sigma * t.sigma));
    }
  return layer;
}

TargetAnnotation target_bbox(const TargetSpec& t, int n1, int n2, int frame) {
  const double tr = t.row + t.v_row * frame;
  const double tc = t.col + t.v_col * frame;
  // 1% support radius of the Gaussian blob.
  const int rad = static_cast<int>(std::ceil(t.sigma * std::sqrt(2.0 * std::log(100.0))));
  TargetAnnotation ann;
  ann.frame = frame;
  ann.r0 = std::max(0, static_cast<int>(std::round(tr)) - rad);
  ann.c0 = std::max(0, static_cast<int>(std::round(tc)) - rad);
  ann.r1 = std::min(n1 - 1, static_cast<int>(std::round(tr)) + rad);
  ann.c1 = std::min(n2 - 1, static_cast<int>(std::round(tc)) + rad);
  ann.d = 30;
  return ann;
}

}  // namespace

void SceneSpec::validate() const {
  if (n1 < 8 || n2 < 8 || n_frames < 2)
    throw std::invalid_argument("SceneSpec: dims too small");
  if (noise_std < 0.0)
    throw std::invalid_argument("SceneSpec: noise_std must be >= 0");
  if (bump_count < 0 || edge_count < 0)
    throw std::invalid_argument("SceneSpec: counts must be >= 0");
  for (const auto& t : targets) {
    if (t.scr_in <= 0.0)
      throw std::invalid_argument("SceneSpec: SCR_in must be > 0");
    if (t.sigma <= 0.0)
      throw std::invalid_argument("SceneSpec: target sigma must be > 0");
    for (int f = 0; f < n_frames; ++f) {
      const double r = t.row + t.v_row * f, c = t.col + t.v_col * f;
      if (r < 2.0 || c < 2.0 || r > n1 - 3.0 || c > n2 - 3.0)
        throw std::invalid_argument("SceneSpec: target leaves bounds");
    }
  }
}

Scene generate(const SceneSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);

  // Plane: fixed gradient with a deterministic random orientation.
  const double theta = 2.0 * std::numbers::pi * uniform01(rng);
  const double diag = std::hypot(spec.n1, spec.n2);
  const double plane_gr = spec.plane_amplitude * std::cos(theta) / diag;
  const double plane_gc = spec.plane_amplitude * std::sin(theta) / diag;
  const double plane_base = 40.0 + 10.0 * uniform01(rng);

  std::vector<Bump> bumps;
  for (int b = 0; b < spec.bump_count; ++b) {
    Bump bump;
    bump.row = spec.n1 * (0.15 + 0.7 * uniform01(rng));
    bump.col = spec.n2 * (0.15 + 0.7 * uniform01(rng));
    const double ang = 2.0 * std::numbers::pi * uniform01(rng);
    bump.v_row = spec.drift_velocity * std::cos(ang);
    bump.v_col = spec.drift_velocity * std::sin(ang);
    bump.width = 0.15 * std::min(spec.n1, spec.n2) * (1.0 + uniform01(rng));
    bump.amp = spec.bump_scale * (0.5 + 0.2 * uniform01(rng));
    bump.mod_freq = 0.05 + 0.15 * uniform01(rng);
    bump.mod_phase = 2.0 * std::numbers::pi * uniform01(rng);
    bumps.push_back(bump);
  }

  std::vector<Edge> edges;
  for (int e = 0; e < spec.edge_count; ++e) {
    Edge edge;
    const double ang = spec.edge_orientation_deg * std::numbers::pi / 180.0;
    edge.nx = std::cos(ang);
    edge.ny = std::sin(ang);
    edge.offset = (uniform01(rng) - 0.5) * 0.3 * std::min(spec.n1, spec.n2);
    edge.amp = spec.edge_amplitude * (0.9 + 0.2 * uniform01(rng));
    edges.push_back(edge);
  }

  // Solve each target amplitude on the clean first frame by bisection
  // against the closed-loop SCR measurement.
  std::vector<double> amplitudes;
  Mat clean0 = render_clean(spec, bumps, edges, plane_gr, plane_gc,
                            plane_base, 0);
  for (const auto& t : spec.targets) {
    TargetAnnotation ann = target_bbox(t, spec.n1, spec.n2, 0);
    auto measure = [&](double amp) {
      Mat frame = clean0 + target_layer(t, amp, spec.n1, spec.n2, 0);
      return scr(frame, ann, 0.01);
    };
    double lo = 0.0, hi = 512.0;
    if (measure(hi) < t.scr_in)
      throw SpecError("generate: requested SCR infeasible");
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (measure(mid) < t.scr_in)
        lo = mid;
      else
        hi = mid;
    }
    const double amp = 0.5 * (lo + hi);
    const double peak_bg = clean0.block(ann.r0, ann.c0, ann.r1 - ann.r0 + 1,
                                        ann.c1 - ann.c0 + 1)
                               .maxCoeff();
    if (peak_bg + amp > 255.0)
      throw SpecError("generate: target amplitude exceeds the 8-bit container");
    amplitudes.push_back(amp);
  }

  Scene scene;
  scene.gt.amplitudes = amplitudes;
  for (int f = 0; f < spec.n_frames; ++f) {
    Mat frame = render_clean(spec, bumps, edges, plane_gr, plane_gc,
                             plane_base, f);
    FrameTruth truth;
    truth.mask = Mat::Zero(spec.n1, spec.n2);
    for (std::size_t ti = 0; ti < spec.targets.size(); ++ti) {
      const auto& t = spec.targets[ti];
      Mat layer = target_layer(t, amplitudes[ti], spec.n1, spec.n2, f);
      frame += layer;
      truth.centroids.emplace_back(t.row + t.v_row * f, t.col + t.v_col * f);
      const double cutoff = 0.01 * amplitudes[ti];
      for (int i = 0; i < spec.n1; ++i)
        for (int j = 0; j < spec.n2; ++j)
          if (layer(i, j) >= cutoff) truth.mask(i, j) = 1.0;
    }
    if (spec.noise_std > 0.0)
      for (int j = 0; j < spec.n2; ++j)
        for (int i = 0; i < spec.n1; ++i)
          frame(i, j) += spec.noise_std * gauss(rng);
    for (int j = 0; j < spec.n2; ++j)
      for (int i = 0; i < spec.n1; ++i)
        frame(i, j) = std::round(std::clamp(frame(i, j), 0.0, 255.0));
    scene.frames.push_back(std::move(frame));
    scene.gt.frames.push_back(std::move(truth));
  }
  return scene;
}

}  // namespace sdd
