#pragma once

#include <cstdint>
#include <vector>

#include "dmfaw/linalg.hpp"

namespace dmfaw {

inline constexpr double kDenomFloor = 1e-12;

struct SemiNmfResult {
  Matrix f;                        // d x k, mixed sign
  Matrix g;                        // k x n, nonnegative
  std::vector<double> objective;   // ||x - f g||_F^2 after each iteration
};

// Indicator of labels plus 0.2 offset.
Matrix indicator_init(const std::vector<int>& labels, int k);

// x ~ f g with g >= 0, starting from the given g.
SemiNmfResult seminmf_from(const Matrix& x, Matrix g0, int max_iter, double tol);

// g initialized from k-means on the columns of x.
SemiNmfResult seminmf(const Matrix& x, int k, std::uint64_t seed, int max_iter = 200,
                      double tol = 1e-5);

// G <- G o sqrt((pos(ZtX) + neg(ZtZ) G) / (neg(ZtX) + pos(ZtZ) G)) with the
// cross terms given precomputed.
Matrix multiplicative_step(const Matrix& g, const Matrix& ztx, const Matrix& ztz);

struct LayerStack {
  std::vector<Matrix> f;  // d x k1, k1 x k2, ...
  std::vector<Matrix> g;  // k_i x n
  std::vector<std::vector<double>> objective;  // per-layer semi-NMF history
};

// Layer 1 factorizes x, layer i >= 2 factorizes G_{i-1}. Every layer's g
// starts from k-means labels of the samples in data space.
LayerStack pretrain_stack(const Matrix& x, const std::vector<int>& layer_dims, std::uint64_t seed,
                          int max_iter = 200, double tol = 1e-5);

// F_1 ... F_count (identity of size d when count == 0).
Matrix chain(const std::vector<Matrix>& f, std::size_t count, Eigen::Index d);

}  // namespace dmfaw
