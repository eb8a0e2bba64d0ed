#include "sdd/pipeline.hpp"

#include "sdd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <queue>
#include <stdexcept>
#include <thread>

namespace sdd {

void PipelineConfig::validate() const {
  if (cube_len < 2)
    throw std::invalid_argument("PipelineConfig: cube_len must be >= 2");
  const int s = effective_stride();
  if (s < 1 || s > cube_len)
    throw std::invalid_argument("PipelineConfig: stride must be in [1, cube_len]");
  if (c_min < 0.0 || d_thresh < 0.0)
    throw std::invalid_argument("PipelineConfig: thresholds must be >= 0");
  solver.validate();
  asce.validate();
}

std::vector<ClippedCube> clip_cubes(const std::vector<Mat>& frames,
                                    int cube_len, int stride) {
  if (frames.size() < 2)
    throw std::invalid_argument("clip_cubes: need at least 2 frames");
  const int rows = static_cast<int>(frames[0].rows());
  const int cols = static_cast<int>(frames[0].cols());
  for (const auto& f : frames)
    if (f.rows() != rows || f.cols() != cols)
      throw std::invalid_argument("clip_cubes: frame shape mismatch");
  if (cube_len < 2 || stride < 1 || stride > cube_len)
    throw std::invalid_argument("clip_cubes: bad cube_len/stride");

  const int n = static_cast<int>(frames.size());
  std::vector<ClippedCube> out;
  for (int start = 0; start < n; start += stride) {
    ClippedCube cc;
    cc.start_frame = start;
    cc.valid_len = std::min(cube_len, n - start);
    cc.cube = Cube(rows, cols, cube_len);
    for (int k = 0; k < cube_len; ++k) {
      const int src = std::min(start + k, n - 1);  // pad with the last frame
      cc.cube.slice(k) = frames[src];
    }
    out.push_back(std::move(cc));
    if (start + cube_len >= n) break;
  }
  return out;
}

std::pair<Mat, std::vector<Detection>> segment_targets(const Mat& t_slice,
                                                       double c_min,
                                                       double d_thresh) {
  const int rows = static_cast<int>(t_slice.rows());
  const int cols = static_cast<int>(t_slice.cols());
  const double count = static_cast<double>(rows) * cols;
  const double mean = t_slice.sum() / count;
  const double var = (t_slice.array() - mean).square().sum() / count;
  const double threshold = std::max(c_min, mean + d_thresh * std::sqrt(var));

  Mat mask = Mat::Zero(rows, cols);
  std::vector<Detection> detections;
  std::vector<char> visited(static_cast<std::size_t>(rows) * cols, 0);
  auto idx = [cols](int r, int c) {
    return static_cast<std::size_t>(r) * cols + c;
  };
  auto above = [&](int r, int c) {
    return std::abs(t_slice(r, c)) >= threshold;
  };

  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (above(r, c)) mask(r, c) = 1.0;
      if (!above(r, c) || visited[idx(r, c)]) continue;
      Detection det;
      det.r0 = det.r1 = r;
      det.c0 = det.c1 = c;
      double wsum = 0.0, wr = 0.0, wc = 0.0;
      std::queue<std::pair<int, int>> q;
      q.push({r, c});
      visited[idx(r, c)] = 1;
      while (!q.empty()) {
        auto [pr, pc] = q.front();
        q.pop();
        const double w = std::abs(t_slice(pr, pc));
        wsum += w;
        wr += w * pr;
        wc += w * pc;
        det.score = std::max(det.score, w);
        det.area += 1;
        det.r0 = std::min(det.r0, pr);
        det.r1 = std::max(det.r1, pr);
        det.c0 = std::min(det.c0, pc);
        det.c1 = std::max(det.c1, pc);
        for (int dr = -1; dr <= 1; ++dr)
          for (int dc = -1; dc <= 1; ++dc) {
            const int nr = pr + dr, nc = pc + dc;
            if (nr < 0 || nc < 0 || nr >= rows || nc >= cols) continue;
            if (!above(nr, nc) || visited[idx(nr, nc)]) continue;
            visited[idx(nr, nc)] = 1;
            q.push({nr, nc});
          }
      }
      det.row = wr / wsum;
      det.col = wc / wsum;
      detections.push_back(det);
    }
  return {mask, detections};
}

namespace {

struct CubeResult {
  std::vector<Detection> detections;
  std::vector<Mat> target_frames;
  std::vector<Mat> background_frames;
  std::vector<Mat> masks;
  SolveTrace trace;
};

// Internal working scale for the decomposition. The solver's fixed
// constants (gamma, beta, epsilon) balance at intensity magnitudes of a few
// units: large enough that the reweighted shrinkage keeps target energy,
// small enough that the sparsity threshold still suppresses noise residuals
// and damps the enhancement-factor feedback on unmodelable pixels. Outputs
// are scaled back to normalized units.
constexpr double kIntensityScale = 4.0;

CubeResult process_cube(const ClippedCube& cc, const PipelineConfig& cfg) {
  const int n3 = cc.cube.n3();
  Cube asce_stack(cc.cube.n1(), cc.cube.n2(), n3);
  for (int k = 0; k < n3; ++k)
    asce_stack.slice(k) = asce(cc.cube.slice(k), cfg.asce);
  Cube w_asce = enhancement_factor(asce_stack);

  Decomposition dec = decompose(kIntensityScale * cc.cube, w_asce, cfg.solver);

  CubeResult out;
  out.trace = std::move(dec.trace);
  for (int k = 0; k < cc.valid_len; ++k) {
    Mat t_slice = dec.t.slice(k) / kIntensityScale;
    auto [mask, dets] = segment_targets(t_slice, cfg.c_min, cfg.d_thresh);
    for (Detection& d : dets) {
      d.frame = cc.start_frame + k;
      out.detections.push_back(d);
    }
    out.masks.push_back(std::move(mask));
    out.target_frames.push_back(std::move(t_slice));
    out.background_frames.push_back(dec.f.slice(k) / kIntensityScale);
  }
  return out;
}

}  // namespace

DetectResult detect_sequence(const std::vector<Mat>& frames,
                             const PipelineConfig& cfg, int threads) {
  cfg.validate();
  auto cubes = clip_cubes(frames, cfg.cube_len, cfg.effective_stride());

  int workers = threads;
  if (workers <= 0)
    workers = static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min<int>(workers, static_cast<int>(cubes.size())));

  std::vector<CubeResult> results(cubes.size());
  if (workers == 1) {
    for (std::size_t i = 0; i < cubes.size(); ++i) {
      try {
        results[i] = process_cube(cubes[i], cfg);
      } catch (const SolverFailure& e) {
        throw SolverFailure("detect_sequence: solver failed on cube " +
                                std::to_string(i) + ": " + e.what(),
                            e.trace);
      }
    }
  } else {
    std::vector<std::future<CubeResult>> futures(cubes.size());
    std::size_t next = 0;
    while (next < cubes.size()) {
      const std::size_t batch =
          std::min<std::size_t>(workers, cubes.size() - next);
      for (std::size_t i = 0; i < batch; ++i)
        futures[next + i] = std::async(std::launch::async, process_cube,
                                       std::cref(cubes[next + i]),
                                       std::cref(cfg));
      for (std::size_t i = 0; i < batch; ++i) {
        try {
          results[next + i] = futures[next + i].get();
        } catch (const SolverFailure& e) {
          throw SolverFailure("detect_sequence: solver failed on cube " +
                                  std::to_string(next + i) + ": " + e.what(),
                              e.trace);
        }
      }
      next += batch;
    }
  }

  DetectResult out;
  for (auto& r : results) {
    out.detections.insert(out.detections.end(), r.detections.begin(),
                          r.detections.end());
    out.target_frames.insert(out.target_frames.end(),
                             std::make_move_iterator(r.target_frames.begin()),
                             std::make_move_iterator(r.target_frames.end()));
    out.background_frames.insert(
        out.background_frames.end(),
        std::make_move_iterator(r.background_frames.begin()),
        std::make_move_iterator(r.background_frames.end()));
    out.masks.insert(out.masks.end(), std::make_move_iterator(r.masks.begin()),
                     std::make_move_iterator(r.masks.end()));
    out.traces.push_back(std::move(r.trace));
  }
  std::sort(out.detections.begin(), out.detections.end(),
            [](const Detection& a, const Detection& b) {
              if (a.frame != b.frame) return a.frame < b.frame;
              if (a.row != b.row) return a.row < b.row;
              return a.col < b.col;
            });
  return out;
}

}  // namespace sdd
