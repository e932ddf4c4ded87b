#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "dmfaw/controller.hpp"
#include "dmfaw/linalg.hpp"
#include "dmfaw/seminmf.hpp"

namespace dmfaw {

// How feature weights react to per-feature residuals u_i.
//   Residual:  W_i ∝ u_i^{1/(p-1)}   (larger residual, larger weight)
//   Selection: W_i ∝ u_i^{-1/(p-1)}  (smaller residual, larger weight)
// Both are scaled so that sum_i W_i^p = 1.
enum class WeightRegime { Residual, Selection };

struct DmfawConfig {
  double lambda = 1.0;
  std::vector<int> layer_dims;  // k_1 > ... > k_m = number of clusters
  double n1 = 1.0;
  double n2 = 0.2;
  double p_init = 2.0;
  double p_min = 1.001;
  double p_max = 10.0;
  double tol_init = 1e-3;
  int max_outer_iter = 100;
  double conv_rel_tol = 1e-5;
  std::uint64_t seed = 0;
  bool adaptive_p = true;
  bool weighted_mapping = true;
  WeightRegime regime = WeightRegime::Selection;
  int pretrain_iters = 10;
  double pretrain_tol = 1e-5;
  int jobs = 1;

  void validate() const;
};

struct FusionState {
  Matrix consensus;                  // G*, k x n
  std::vector<Matrix> permutations;  // M^(v), k x k
  Vector coeffs;                     // beta
  Matrix avg_region;                 // A, n x n
};

struct Objective {
  double total = 0.0;
  double recon = 0.0;
  double align = 0.0;  // includes lambda
};

struct TraceRow {
  int iter = 0;
  double total = 0.0;
  double recon = 0.0;
  double align = 0.0;
  double p = 0.0;
  double tol = 0.0;
  double seconds = 0.0;
  std::vector<double> kkt;  // per view
};

struct FitResult {
  FusionState fusion;
  std::vector<LayerStack> stacks;
  std::vector<Vector> weights;
  std::vector<TraceRow> trace;
  PiController controller;
  bool converged = false;
  int guard_reverts = 0;
  int rejected_steps = 0;
};

struct IterationView {
  int iter;
  const FusionState& fusion;
  const std::vector<LayerStack>& stacks;
  const std::vector<Vector>& weights;
  double p;
};

using FitObserver = std::function<void(const IterationView&)>;

// Per-feature squared residual u_i = sum_j (X - F_1...F_m G_m)_ij^2.
Vector residual_rows(const Matrix& x, const LayerStack& stack);

// recon = sum_v sum_i W_i u_i, align = lambda sum_v beta_v tr(G* A G_m^T M_v).
Objective objective(const std::vector<Matrix>& views, const std::vector<LayerStack>& stacks,
                    const std::vector<Vector>& weights, const FusionState& fusion, double lambda);

// tr(G* A G_m^T M_v)
double alignment_trace(const FusionState& fusion, const LayerStack& stack, std::size_t v);

Matrix update_consensus(const FusionState& fusion, const std::vector<LayerStack>& stacks);

// F_i = pinv(D Z) D X pinv(G_i), D = diag(row_scale) or identity when null.
Matrix update_mapping(const Matrix& x, const LayerStack& stack, std::size_t i,
                      const Vector* row_scale = nullptr);

Matrix update_partition_mid(const Matrix& x, const LayerStack& stack, const Vector& w,
                            std::size_t i);

// Multiplicative step for G_m including the alignment pull (lambda beta / 2) M G* A.
Matrix update_partition_last(const Matrix& x, const LayerStack& stack, const Vector& w,
                             const FusionState& fusion, std::size_t v, double lambda);

Vector update_weights(const Vector& u, double p, WeightRegime regime = WeightRegime::Residual);

// maximizer of tr(M G* A G_m^T) over orthogonal M.
Matrix update_permutation(const FusionState& fusion, const LayerStack& stack, std::size_t v);

Vector update_coeffs(const FusionState& fusion, const std::vector<LayerStack>& stacks);

// A = (1/V) sum_v Gh^T Gh with Gh = G_m row-normalized.
Matrix build_avg_region(const std::vector<LayerStack>& stacks);

// ||(2 Z^T W (Z G_m - X) - lambda beta M G* A) o G_m||_F
double kkt_residual(const Matrix& x, const LayerStack& stack, const Vector& w,
                    const FusionState& fusion, std::size_t v, double lambda);

// Rescale G_m rows to unit l2 norm, compensating in F_m.
void normalize_last_rows(LayerStack& stack);

FitResult fit(const std::vector<Matrix>& views, const DmfawConfig& config,
              const FitObserver& observer = {});

}  // namespace dmfaw
