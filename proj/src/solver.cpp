#include "sdd/solver.hpp"

#include "sdd/diff_ops.hpp"
#include "sdd/errors.hpp"
#include "sdd/prox.hpp"
#include "sdd/tensor_ops.hpp"

#include "fft_utils.hpp"

#include <cmath>
#include <complex>
#include <random>

namespace sdd {

namespace {

// Symmetric eigendecomposition of a Gram matrix with eigenvalues clamped at 0.
void gram_eigen(const Mat& g, Mat& vectors, Eigen::VectorXd& values) {
  Eigen::SelfAdjointEigenSolver<Mat> es(g);
  if (es.info() != Eigen::Success)
    throw NumericError("gram_eigen: eigendecomposition failed");
  vectors = es.eigenvectors();
  values = es.eigenvalues().cwiseMax(0.0);
}

// Uniform [0,1) from the raw 64-bit stream; identical across platforms.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

void SolverConfig::validate() const {
  if (r < 1) throw std::invalid_argument("SolverConfig: r must be >= 1");
  if (lambda <= 0 || gamma <= 0 || beta <= 0 || rho <= 0 || t_prox <= 0 ||
      epsilon <= 0)
    throw std::invalid_argument("SolverConfig: weights must be > 0");
  if (tol_outer <= 0 || tol_inner <= 0)
    throw std::invalid_argument("SolverConfig: tolerances must be > 0");
  if (k_max < 1 || l_max < 1)
    throw std::invalid_argument("SolverConfig: iteration caps must be >= 1");
}

Mat solve_A(const Cube& y, const Cube& t, const Cube& b, const Mat& a_prev,
            double lambda, double rho) {
  if (lambda <= 0 || rho <= 0)
    throw std::invalid_argument("solve_A: lambda and rho must be > 0");
  const int n3 = y.n3();
  const int r = static_cast<int>(b.n3());
  if (a_prev.rows() != n3 || a_prev.cols() != r)
    throw std::invalid_argument("solve_A: a_prev shape mismatch");
  check_same_dims(y, t, "solve_A");
  if (!y.all_finite() || !t.all_finite() || !b.all_finite() ||
      !a_prev.allFinite())
    throw NumericError("solve_A: non-finite input");

  // B_(3) is r x (n1*n2); its transpose is the pixel-major view.
  Eigen::Map<const Mat> b3t = b.pixel_major();  // (n1*n2) x r
  Mat m = b3t.transpose() * b3t;                // r x r Gram
  Mat u;
  Eigen::VectorXd sigma;
  gram_eigen(m, u, sigma);

  // R = (Y_(3) - T_(3)) B_(3)^T + rho*A_prev, rotated into M's eigenbasis.
  Mat resid_pm = y.pixel_major() - t.pixel_major();  // (n1*n2) x n3
  Mat rhs = resid_pm.transpose() * b3t + rho * a_prev;
  Mat rhs_rot = rhs * u;  // n3 x r

  const DiffSpectrum spec = diff_gram_spectrum(n3);
  Mat out_rot(n3, r);
  std::vector<std::complex<double>> buf(n3);
  for (int j = 0; j < r; ++j) {
    for (int f = 0; f < n3; ++f) buf[f] = rhs_rot(f, j);
    fft::transform_1d(buf.data(), n3, false);
    for (int f = 0; f < n3; ++f)
      buf[f] /= sigma[j] + 2.0 * lambda * spec.values[f] + rho;
    fft::transform_1d(buf.data(), n3, true);
    for (int f = 0; f < n3; ++f) out_rot(f, j) = buf[f].real();
  }
  return out_rot * u.transpose();
}

Cube solve_B_quadratic(const Cube& k_rhs, const Mat& a, double beta,
                       double rho) {
  if (beta <= 0 || rho <= 0)
    throw std::invalid_argument("solve_B_quadratic: beta and rho must be > 0");
  const int n1 = k_rhs.n1(), n2 = k_rhs.n2(), r = k_rhs.n3();
  if (a.cols() != r)
    throw std::invalid_argument("solve_B_quadratic: a.cols() must equal r");
  if (!k_rhs.all_finite() || !a.allFinite())
    throw NumericError("solve_B_quadratic: non-finite input");

  Mat v;
  Eigen::VectorXd lam;
  gram_eigen(a.transpose() * a, v, lam);

  // Rotate mode 3 into the eigenbasis: K' = K x3 V^T.
  Cube kp(n1, n2, r);
  kp.pixel_major() = k_rhs.pixel_major() * v;

  const DiffSpectrum d1 = diff_gram_spectrum(n1);
  const DiffSpectrum d2 = diff_gram_spectrum(n2);
  Cube out(n1, n2, r);
  std::vector<std::complex<double>> buf(static_cast<std::size_t>(n1) * n2);
  for (int j = 0; j < r; ++j) {
    const double* src = kp.data() + static_cast<std::size_t>(n1) * n2 * j;
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = src[i];
    fft::transform_2d(buf.data(), n1, n2, false);
    for (int q = 0; q < n2; ++q)
      for (int p = 0; p < n1; ++p)
        buf[p + static_cast<std::size_t>(n1) * q] /=
            lam[j] + rho + beta * (d1.values[p] + d2.values[q]);
    fft::transform_2d(buf.data(), n1, n2, true);
    double* dst = out.data() + static_cast<std::size_t>(n1) * n2 * j;
    for (std::size_t i = 0; i < buf.size(); ++i) dst[i] = buf[i].real();
  }

  // Back out of the eigenbasis: B = C x3 V.
  Cube b(n1, n2, r);
  b.pixel_major() = out.pixel_major() * v.transpose();
  return b;
}

AdmmResult admm_B(const Cube& y, const Cube& t, const Mat& a,
                  const Cube& b_prev, const SolverConfig& cfg) {
  cfg.validate();
  const int n1 = y.n1(), n2 = y.n2();
  const int r = cfg.r;
  const double beta = cfg.beta, rho = cfg.rho, eps = cfg.epsilon;

  // (Y - T) x3 A^T is fixed across inner iterations.
  Cube base(n1, n2, r);
  base.pixel_major() = (y.pixel_major() - t.pixel_major()) * a;

  AdmmResult res;
  res.b = b_prev;
  res.z1 = Cube(n1, n2, r);
  res.z2 = Cube(n1, n2, r);
  res.p1 = Cube(n1, n2, r);
  res.p2 = Cube(n1, n2, r);

  for (int l = 0; l < cfg.l_max; ++l) {
    Cube k = base + rho * b_prev +
             beta * apply_diff_adjoint(res.z1 - (1.0 / beta) * res.p1, 1) +
             beta * apply_diff_adjoint(res.z2 - (1.0 / beta) * res.p2, 2);
    Cube b_new = solve_B_quadratic(k, a, beta, rho);
    if (!b_new.all_finite())
      throw SolverFailure("admm_B: iterate diverged (non-finite B)", {});

    Cube d1b = apply_diff(b_new, 1);
    Cube z1_hat = d1b + (1.0 / beta) * res.p1;
    Mat w1 = reweight_group(z1_hat, eps);
    res.z1 = group_shrink_fibers(z1_hat, (1.0 / beta) * w1);

    Cube d2b = apply_diff(b_new, 2);
    Cube z2_hat = d2b + (1.0 / beta) * res.p2;
    Cube w2 = reweight_abs(z2_hat, eps);
    res.z2 = soft_threshold(z2_hat, (1.0 / beta) * w2);

    res.p1 = res.p1 + beta * (d1b - res.z1);
    res.p2 = res.p2 + beta * (d2b - res.z2);

    res.feas_gap1.push_back(norm(d1b - res.z1, NormKind::fro));
    res.feas_gap2.push_back(norm(d2b - res.z2, NormKind::fro));

    const double denom = norm(res.b, NormKind::fro);
    const double rel = denom > 0.0
                           ? norm(b_new - res.b, NormKind::fro) / denom
                           : norm(b_new, NormKind::fro);
    res.b = b_new;
    res.inner_iters = l + 1;
    if (rel < cfg.tol_inner) break;
  }
  return res;
}

Cube update_T(const Cube& y, const Mat& a, const Cube& b, const Cube& t_prev,
              const Cube& w_asce, const SolverConfig& cfg) {
  cfg.validate();
  check_same_dims(y, t_prev, "update_T");
  check_same_dims(y, w_asce, "update_T");
  const double tp = cfg.effective_t_prox();

  Cube t_hat = y;
  t_hat.pixel_major() -= b.pixel_major() * a.transpose();
  t_hat.flat() += tp * t_prev.flat();
  t_hat.flat() /= 1.0 + tp;

  Cube w_s = reweight_abs(t_hat, cfg.epsilon);
  Cube thresh = (cfg.gamma / (1.0 + tp)) * w_s;
  return soft_threshold(hadamard(w_asce, t_hat), thresh);
}

Decomposition decompose(const Cube& y, const Cube& w_asce,
                        const SolverConfig& cfg) {
  cfg.validate();
  check_same_dims(y, w_asce, "decompose");
  if (y.n3() < 2)
    throw std::invalid_argument("decompose: need at least 2 frames");
  if (!y.all_finite()) throw NumericError("decompose: non-finite input");

  const int n1 = y.n1(), n2 = y.n2(), n3 = y.n3(), r = cfg.r;

  std::mt19937_64 rng(cfg.seed);
  Mat a(n3, r);
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < n3; ++i) a(i, j) = uniform01(rng);
  Cube b(n1, n2, r);
  {
    auto f = b.flat();
    for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = uniform01(rng);
  }
  Cube t(n1, n2, n3);

  Decomposition out;
  Cube f_prev(n1, n2, n3);
  f_prev.pixel_major() = b.pixel_major() * a.transpose();

  for (int k = 0; k < cfg.k_max; ++k) {
    AdmmResult admm;
    try {
      a = solve_A(y, t, b, a, cfg.lambda, cfg.rho);
      admm = admm_B(y, t, a, b, cfg);
      b = admm.b;
      t = update_T(y, a, b, t, w_asce, cfg);
    } catch (const SolverFailure& e) {
      throw SolverFailure(e.what(), out.trace);
    } catch (const NumericError& e) {
      throw SolverFailure(e.what(), out.trace);
    }

    Cube f(n1, n2, n3);
    f.pixel_major() = b.pixel_major() * a.transpose();
    if (!f.all_finite() || !t.all_finite())
      throw SolverFailure("decompose: iterate diverged", out.trace);

    OuterRecord rec;
    const double denom = norm(f_prev, NormKind::fro);
    rec.rel_change = denom > 0.0 ? norm(f - f_prev, NormKind::fro) / denom
                                 : norm(f, NormKind::fro);
    rec.data_fit = norm(y - f - t, NormKind::fro);
    {
      Cube d1b = apply_diff(b, 1);
      Mat w1 = reweight_group(d1b, cfg.epsilon);
      double g = 0.0;
      for (int jj = 0; jj < n2; ++jj)
        for (int ii = 0; ii < n1; ++ii) {
          double nrm = 0.0;
          for (int kk = 0; kk < r; ++kk) nrm += d1b(ii, jj, kk) * d1b(ii, jj, kk);
          g += w1(ii, jj) * std::sqrt(nrm);
        }
      rec.obj_group = g;
      Cube d2b = apply_diff(b, 2);
      Cube w2 = reweight_abs(d2b, cfg.epsilon);
      rec.obj_elem = hadamard(w2, d2b).flat().cwiseAbs().sum();
      Mat d3a = apply_diff(a, 1);
      rec.obj_temporal = cfg.lambda * d3a.squaredNorm();
      Cube wt = hadamard(w_asce, t);
      Cube ws = reweight_abs(t, cfg.epsilon);
      rec.obj_target = cfg.gamma * hadamard(ws, wt).flat().cwiseAbs().sum();
    }
    rec.inner_iters = admm.inner_iters;
    out.trace.outer.push_back(rec);

    f_prev = f;
    if (rec.rel_change < cfg.tol_outer) break;
  }

  out.f = std::move(f_prev);
  out.t = std::move(t);
  return out;
}

}  // namespace sdd
