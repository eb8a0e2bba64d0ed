#include "sdd/cli.hpp"

#include "sdd/errors.hpp"
#include "sdd/io.hpp"
#include "sdd/metrics.hpp"
#include "sdd/pipeline.hpp"
#include "sdd/synth.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace sdd::cli {

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

// ---- flat key=value handling ----

std::map<std::string, std::string> parse_kv_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    if (!key.empty()) kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

void apply_overrides(std::map<std::string, std::string>& kv,
                     const std::vector<std::string>& sets) {
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("--set expects key=value, got '" + s + "'");
    kv[s.substr(0, eq)] = s.substr(eq + 1);
  }
}

struct KvReader {
  std::map<std::string, std::string> kv;

  template <typename T>
  void get(const char* key, T& out) {
    auto it = kv.find(key);
    if (it == kv.end()) return;
    std::istringstream ss(it->second);
    T v;
    if (!(ss >> v)) throw ConfigError(std::string("bad value for key '") + key + "'");
    out = v;
    kv.erase(it);
  }

  void check_consumed() const {
    if (!kv.empty())
      throw ConfigError("unknown config key '" + kv.begin()->first + "'");
  }
};

PipelineConfig read_pipeline_config(std::map<std::string, std::string> raw) {
  KvReader reader{std::move(raw)};
  PipelineConfig cfg;
  reader.get("r", cfg.solver.r);
  reader.get("lambda", cfg.solver.lambda);
  reader.get("gamma", cfg.solver.gamma);
  reader.get("beta", cfg.solver.beta);
  reader.get("rho", cfg.solver.rho);
  reader.get("t_prox", cfg.solver.t_prox);
  reader.get("epsilon", cfg.solver.epsilon);
  reader.get("k_max", cfg.solver.k_max);
  reader.get("l_max", cfg.solver.l_max);
  reader.get("tol_outer", cfg.solver.tol_outer);
  reader.get("tol_inner", cfg.solver.tol_inner);
  reader.get("seed", cfg.solver.seed);
  int bind = cfg.solver.bind_t_prox_to_rho ? 1 : 0;
  reader.get("bind_t_prox_to_rho", bind);
  cfg.solver.bind_t_prox_to_rho = bind != 0;
  reader.get("cube_len", cfg.cube_len);
  reader.get("stride", cfg.stride);
  reader.get("c_min", cfg.c_min);
  reader.get("d_thresh", cfg.d_thresh);
  reader.get("sigma", cfg.asce.sigma);
  reader.get("alpha1", cfg.asce.alpha[0]);
  reader.get("alpha2", cfg.asce.alpha[1]);
  reader.get("alpha3", cfg.asce.alpha[2]);
  reader.get("delta", cfg.asce.delta);
  reader.check_consumed();
  return cfg;
}

void print_resolved(const PipelineConfig& cfg) {
  std::cout << "resolved config:\n"
            << "  r=" << cfg.solver.r << " lambda=" << cfg.solver.lambda
            << " gamma=" << cfg.solver.gamma << " beta=" << cfg.solver.beta
            << " rho=" << cfg.solver.rho << " t_prox=" << cfg.solver.t_prox
            << " epsilon=" << cfg.solver.epsilon << "\n"
            << "  k_max=" << cfg.solver.k_max << " l_max=" << cfg.solver.l_max
            << " tol_outer=" << cfg.solver.tol_outer
            << " tol_inner=" << cfg.solver.tol_inner
            << " seed=" << cfg.solver.seed
            << " bind_t_prox_to_rho=" << cfg.solver.bind_t_prox_to_rho << "\n"
            << "  cube_len=" << cfg.cube_len << " stride=" << cfg.stride
            << " c_min=" << cfg.c_min << " d_thresh=" << cfg.d_thresh << "\n"
            << "  sigma=" << cfg.asce.sigma << " alpha1=" << cfg.asce.alpha[0]
            << " alpha2=" << cfg.asce.alpha[1]
            << " alpha3=" << cfg.asce.alpha[2]
            << " delta=" << cfg.asce.delta << std::endl;
}

SceneSpec read_scene_spec(std::map<std::string, std::string> raw) {
  KvReader reader{std::move(raw)};
  SceneSpec spec;
  reader.get("n1", spec.n1);
  reader.get("n2", spec.n2);
  reader.get("n_frames", spec.n_frames);
  reader.get("plane_amplitude", spec.plane_amplitude);
  reader.get("bump_count", spec.bump_count);
  reader.get("bump_scale", spec.bump_scale);
  reader.get("drift_velocity", spec.drift_velocity);
  reader.get("edge_count", spec.edge_count);
  reader.get("edge_amplitude", spec.edge_amplitude);
  reader.get("edge_orientation_deg", spec.edge_orientation_deg);
  reader.get("noise_std", spec.noise_std);
  reader.get("seed", spec.seed);
  int targets = 0;
  reader.get("targets", targets);
  for (int t = 0; t < targets; ++t) {
    TargetSpec ts;
    const std::string p = "target" + std::to_string(t) + "_";
    reader.get((p + "row").c_str(), ts.row);
    reader.get((p + "col").c_str(), ts.col);
    reader.get((p + "vrow").c_str(), ts.v_row);
    reader.get((p + "vcol").c_str(), ts.v_col);
    reader.get((p + "sigma").c_str(), ts.sigma);
    reader.get((p + "scr").c_str(), ts.scr_in);
    spec.targets.push_back(ts);
  }
  reader.check_consumed();
  return spec;
}

// ---- CSV helpers ----

struct GtRow {
  int frame;
  double row, col;
};

std::vector<GtRow> read_gt_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<GtRow> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("frame", 0) == 0) continue;  // header
    }
    GtRow r;
    if (std::sscanf(line.c_str(), "%d,%lf,%lf", &r.frame, &r.row, &r.col) != 3)
      throw IoError("bad ground-truth row in " + path.string() + ": " + line);
    rows.push_back(r);
  }
  return rows;
}

std::string frame_name(const char* prefix, int index, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%04d.%s", prefix, index, ext);
  return buf;
}

int num_threads_from_env() {
  const char* v = std::getenv("SDD_THREADS");
  if (!v) return 1;
  const int n = std::atoi(v);
  return n < 0 ? 1 : n;  // 0 = auto
}

// ---- subcommands ----

int cmd_synth(const fs::path& spec_path, const fs::path& out_dir,
              const std::string& format,
              const std::vector<std::string>& sets) {
  auto kv = parse_kv_file(spec_path);
  apply_overrides(kv, sets);
  SceneSpec spec = read_scene_spec(std::move(kv));
  Scene scene = generate(spec);
  fs::create_directories(out_dir);
  for (std::size_t f = 0; f < scene.frames.size(); ++f)
    write_gray8(out_dir / frame_name("frame", static_cast<int>(f),
                                     format.c_str()),
                scene.frames[f]);
  std::string gt = "frame,row,col\n";
  for (std::size_t f = 0; f < scene.gt.frames.size(); ++f)
    for (const auto& [r, c] : scene.gt.frames[f].centroids)
      gt += std::to_string(f) + "," + fmt6(r) + "," + fmt6(c) + "\n";
  write_text_atomic(out_dir / "gt.csv", gt);
  std::cout << "wrote " << scene.frames.size() << " frames to "
            << out_dir.string() << std::endl;
  return kExitOk;
}

int cmd_asce(const fs::path& in_path, const fs::path& out_dir,
             const AsceParams& params, const std::string& format) {
  auto frames = load_sequence(in_path);
  fs::create_directories(out_dir);
  for (std::size_t f = 0; f < frames.size(); ++f) {
    Mat map = asce(frames[f], params);
    write_gray16(out_dir / frame_name("asce", static_cast<int>(f),
                                      format.c_str()),
                 65535.0 * map);
  }
  std::cout << "wrote " << frames.size() << " ASCE maps to "
            << out_dir.string() << std::endl;
  return kExitOk;
}

int cmd_detect(const fs::path& in_path, const fs::path& config_path,
               const fs::path& out_dir, const std::vector<std::string>& sets,
               const std::string& format) {
  std::map<std::string, std::string> kv;
  if (!config_path.empty()) kv = parse_kv_file(config_path);
  apply_overrides(kv, sets);
  PipelineConfig cfg = read_pipeline_config(std::move(kv));
  cfg.validate();
  print_resolved(cfg);

  auto frames = load_sequence(in_path);
  DetectResult result = detect_sequence(frames, cfg, num_threads_from_env());

  fs::create_directories(out_dir);
  std::string det = "frame,row,col,score,area,r0,c0,r1,c1\n";
  for (const auto& d : result.detections)
    det += std::to_string(d.frame) + "," + fmt6(d.row) + "," + fmt6(d.col) +
           "," + fmt6(d.score) + "," + std::to_string(d.area) + "," +
           std::to_string(d.r0) + "," + std::to_string(d.c0) + "," +
           std::to_string(d.r1) + "," + std::to_string(d.c1) + "\n";
  write_text_atomic(out_dir / "detections.csv", det);

  std::string trace =
      "cube,iter,rel_change,data_fit,obj_group,obj_elem,obj_temporal,"
      "obj_target,inner_iters\n";
  for (std::size_t c = 0; c < result.traces.size(); ++c)
    for (std::size_t k = 0; k < result.traces[c].outer.size(); ++k) {
      const auto& rec = result.traces[c].outer[k];
      trace += std::to_string(c) + "," + std::to_string(k) + "," +
               fmt6(rec.rel_change) + "," + fmt6(rec.data_fit) + "," +
               fmt6(rec.obj_group) + "," + fmt6(rec.obj_elem) + "," +
               fmt6(rec.obj_temporal) + "," + fmt6(rec.obj_target) + "," +
               std::to_string(rec.inner_iters) + "\n";
    }
  write_text_atomic(out_dir / "trace.csv", trace);

  for (std::size_t f = 0; f < result.target_frames.size(); ++f) {
    const int fi = static_cast<int>(f);
    write_gray16(out_dir / frame_name("target", fi, format.c_str()),
                 65535.0 * result.target_frames[f].cwiseAbs());
    write_gray16(out_dir / frame_name("background", fi, format.c_str()),
                 65535.0 * result.background_frames[f]);
    write_gray8(out_dir / frame_name("mask", fi, format.c_str()),
                255.0 * result.masks[f]);
  }
  std::cout << "detections: " << result.detections.size() << std::endl;
  return kExitOk;
}

int cmd_eval(const fs::path& det_path, const fs::path& gt_path,
             const fs::path& orig_path, const fs::path& target_path,
             const fs::path& out_path, int halfwidth) {
  (void)det_path;  // detections are reported alongside but metrics use GT
  auto gt = read_gt_csv(gt_path);
  auto orig = load_sequence(orig_path);
  auto target = load_sequence(target_path);
  if (orig.size() != target.size())
    throw IoError("eval: original/target frame counts differ");

  std::string csv = "frame,bsf,gscr,cg\n";
  double sum_bsf = 0, sum_gscr = 0, sum_cg = 0;
  int count = 0;
  for (const auto& row : gt) {
    if (row.frame < 0 || row.frame >= static_cast<int>(orig.size())) continue;
    TargetAnnotation ann;
    ann.frame = row.frame;
    const Mat& o = orig[row.frame];
    ann.r0 = std::max(0, static_cast<int>(std::round(row.row)) - halfwidth);
    ann.c0 = std::max(0, static_cast<int>(std::round(row.col)) - halfwidth);
    ann.r1 = std::min<int>(static_cast<int>(o.rows()) - 1,
                           static_cast<int>(std::round(row.row)) + halfwidth);
    ann.c1 = std::min<int>(static_cast<int>(o.cols()) - 1,
                           static_cast<int>(std::round(row.col)) + halfwidth);
    const double b = bsf(o, target[row.frame], ann);
    const double g = gscr(o, target[row.frame], ann);
    const double c = cg(o, target[row.frame], ann);
    csv += std::to_string(row.frame) + "," + fmt6(b) + "," + fmt6(g) + "," +
           fmt6(c) + "\n";
    sum_bsf += b;
    sum_gscr += g;
    sum_cg += c;
    ++count;
  }
  if (count > 0)
    csv += "mean," + fmt6(sum_bsf / count) + "," + fmt6(sum_gscr / count) +
           "," + fmt6(sum_cg / count) + "\n";
  write_text_atomic(out_path, csv);
  std::cout << "wrote " << out_path.string() << std::endl;
  return kExitOk;
}

int cmd_roc(const fs::path& scores_dir, const fs::path& gt_path,
            const fs::path& out_path, int window, int halfwidth) {
  auto scores = load_sequence(scores_dir);
  auto gt = read_gt_csv(gt_path);
  std::vector<TargetAnnotation> anns;
  for (const auto& row : gt) {
    TargetAnnotation ann;
    ann.frame = row.frame;
    ann.r0 = static_cast<int>(std::round(row.row)) - halfwidth;
    ann.c0 = static_cast<int>(std::round(row.col)) - halfwidth;
    ann.r1 = static_cast<int>(std::round(row.row)) + halfwidth;
    ann.c1 = static_cast<int>(std::round(row.col)) + halfwidth;
    anns.push_back(ann);
  }
  RocCurve curve = roc(scores, anns, window);
  std::string csv = "fa,pd\n";
  for (const auto& [fa, pd] : curve.points)
    csv += fmt6(fa) + "," + fmt6(pd) + "\n";
  csv += "auc_raw," + fmt6(curve.auc_raw) + "\n";
  csv += "auc_normalized," + fmt6(curve.auc_normalized) + "\n";
  write_text_atomic(out_path, csv);
  std::cout << "auc_raw=" << curve.auc_raw
            << " auc_normalized=" << curve.auc_normalized << std::endl;
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Sparse differential directionality small-target detection"};
  app.require_subcommand(1);

  std::string spec_path, in_path, config_path, out_path, det_path, gt_path,
      orig_path, target_path, scores_path;
  std::string format = "pgm";
  std::vector<std::string> sets;
  AsceParams asce_params;
  int window = 5, halfwidth = 2;

  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic scene");
  synth_cmd->add_option("--spec", spec_path, "Scene spec (key=value file)")
      ->required();
  synth_cmd->add_option("--out", out_path, "Output directory")->required();
  synth_cmd->add_option("--format", format, "Image format: pgm or png");
  synth_cmd->add_option("--set", sets, "Override spec values (key=value)");

  auto* asce_cmd = app.add_subcommand("asce", "Emit per-frame ASCE maps");
  asce_cmd->add_option("--in", in_path, "Input sequence")->required();
  asce_cmd->add_option("--out", out_path, "Output directory")->required();
  asce_cmd->add_option("--sigma", asce_params.sigma, "Gaussian scale");
  asce_cmd->add_option("--alpha1", asce_params.alpha[0], "Balance weight 1");
  asce_cmd->add_option("--alpha2", asce_params.alpha[1], "Balance weight 2");
  asce_cmd->add_option("--alpha3", asce_params.alpha[2], "Balance weight 3");
  asce_cmd->add_option("--format", format, "Image format: pgm or png");

  auto* detect_cmd = app.add_subcommand("detect", "Run the detection pipeline");
  detect_cmd->add_option("--in", in_path, "Input sequence")->required();
  detect_cmd->add_option("--config", config_path, "Config file (key=value)");
  detect_cmd->add_option("--out", out_path, "Output directory")->required();
  detect_cmd->add_option("--set", sets, "Override config values (key=value)");
  detect_cmd->add_option("--format", format, "Image format: pgm or png");

  auto* eval_cmd = app.add_subcommand("eval", "Per-frame BSF/G_SCR/CG metrics");
  eval_cmd->add_option("--detections", det_path, "detections.csv")->required();
  eval_cmd->add_option("--gt", gt_path, "Ground-truth CSV")->required();
  eval_cmd->add_option("--orig", orig_path, "Original sequence")->required();
  eval_cmd->add_option("--target", target_path, "Target sequence")->required();
  eval_cmd->add_option("--out", out_path, "Output CSV")
      ->default_val("metrics.csv");
  eval_cmd->add_option("--target-halfwidth", halfwidth,
                       "Assumed target half-extent, px");

  auto* roc_cmd = app.add_subcommand("roc", "ROC curve from score maps");
  roc_cmd->add_option("--scores", scores_path, "Score-map directory")
      ->required();
  roc_cmd->add_option("--gt", gt_path, "Ground-truth CSV")->required();
  roc_cmd->add_option("--out", out_path, "Output CSV")->default_val("roc.csv");
  roc_cmd->add_option("--window", window, "Match window size");
  roc_cmd->add_option("--target-halfwidth", halfwidth,
                      "Assumed target half-extent, px");

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (synth_cmd->parsed())
      return cmd_synth(spec_path, out_path, format, sets);
    if (asce_cmd->parsed()) return cmd_asce(in_path, out_path, asce_params, format);
    if (detect_cmd->parsed())
      return cmd_detect(in_path, config_path, out_path, sets, format);
    if (eval_cmd->parsed())
      return cmd_eval(det_path, gt_path, orig_path, target_path, out_path,
                      halfwidth);
    if (roc_cmd->parsed())
      return cmd_roc(scores_path, gt_path, out_path, window, halfwidth);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return kExitConfig;
  } catch (const SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << std::endl;
    return kExitSolver;
  } catch (const std::invalid_argument& e) {
    std::cerr << "argument error: " << e.what() << std::endl;
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitError;
  }
  return kExitConfig;
}

}  // namespace sdd::cli
