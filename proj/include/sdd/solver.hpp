#pragma once

#include "sdd/cube.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace sdd {

struct SolverConfig {
  int r = 10;             // temporal rank
  double lambda = 1.0;    // temporal continuity weight
  double gamma = 0.5;     // target sparsity weight (8-bit intensity units)
  double beta = 15000.0;  // ADMM penalty
  double rho = 0.05;      // proximal constant for the A/B blocks
  double t_prox = 0.01;   // proximal constant of the T closed form
  double epsilon = 0.01;  // reweight smoothing
  int k_max = 50;
  int l_max = 10;
  double tol_outer = 1e-5;
  double tol_inner = 1e-5;
  std::uint64_t seed = 0;
  bool bind_t_prox_to_rho = false;  // use rho in the T closed form instead

  void validate() const;
  double effective_t_prox() const { return bind_t_prox_to_rho ? rho : t_prox; }
};

struct OuterRecord {
  double rel_change;     // ||F^k - F^{k-1}||_F / ||F^{k-1}||_F
  double data_fit;       // ||Y - F - T||_F
  double obj_group;      // ||B x1 D1||_{2,1,W1}
  double obj_elem;       // ||B x2 D2||_{1,W2}
  double obj_temporal;   // lambda * ||D3 A||_F^2
  double obj_target;     // gamma * ||W_ASCE . T||_{1,W_S}
  int inner_iters;
};

struct SolveTrace {
  std::vector<OuterRecord> outer;
};

class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, SolveTrace trace)
      : std::runtime_error(what), trace(std::move(trace)) {}
  SolveTrace trace;
};

/// Closed-form A-update: solves A*M + 2*lambda*D3^T D3*A + rho*A = R with
/// M = B_(3) B_(3)^T and R = (Y_(3) - T_(3)) B_(3)^T + rho*A_prev, via the
/// eigendecomposition of M and the DFT diagonalization of D3^T D3.
Mat solve_A(const Cube& y, const Cube& t, const Cube& b, const Mat& a_prev,
            double lambda, double rho);

/// Solves B x3 (A^T A) + rho*B + beta*(B x1 D1^T D1 + B x2 D2^T D2) = K via
/// the eigendecomposition of A^T A and a 2-D DFT over the spatial axes.
Cube solve_B_quadratic(const Cube& k_rhs, const Mat& a, double beta, double rho);

struct AdmmResult {
  Cube b;
  Cube z1, z2, p1, p2;
  int inner_iters = 0;
  std::vector<double> feas_gap1;  // ||B x1 D1 - Z1||_F per inner iteration
  std::vector<double> feas_gap2;
};

/// Inner ADMM loop for the spatial factor; updates in the order
/// B -> Z1 -> Z2 -> P1 -> P2 with multipliers reset to zero on entry.
AdmmResult admm_B(const Cube& y, const Cube& t, const Mat& a,
                  const Cube& b_prev, const SolverConfig& cfg);

/// Proximal T-update: reweighted soft threshold of the enhanced residual.
Cube update_T(const Cube& y, const Mat& a, const Cube& b, const Cube& t_prev,
              const Cube& w_asce, const SolverConfig& cfg);

struct Decomposition {
  Cube f;
  Cube t;
  SolveTrace trace;
};

/// Full PAM outer loop; deterministic for a fixed cfg.seed.
Decomposition decompose(const Cube& y, const Cube& w_asce,
                        const SolverConfig& cfg);

}  // namespace sdd
