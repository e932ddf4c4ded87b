#include "dmfaw/seminmf.hpp"

#include <cmath>

#include "dmfaw/kmeans.hpp"
#include "dmfaw/rng.hpp"

namespace dmfaw {

Matrix indicator_init(const std::vector<int>& labels, int k) {
  Matrix g = Matrix::Constant(k, static_cast<Eigen::Index>(labels.size()), 0.2);
  for (std::size_t j = 0; j < labels.size(); ++j) g(labels[j], j) += 1.0;
  return g;
}

Matrix multiplicative_step(const Matrix& g, const Matrix& ztx, const Matrix& ztz) {
  Matrix num = pos_part(ztx) + neg_part(ztz) * g;
  Matrix den = neg_part(ztx) + pos_part(ztz) * g;
  return g.array() * (num.array() / den.array().max(kDenomFloor)).sqrt();
}

SemiNmfResult seminmf_from(const Matrix& x, Matrix g0, int max_iter, double tol) {
  SemiNmfResult r;
  r.g = std::move(g0);
  double prev = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    r.f = x * pinv(r.g);
    r.g = multiplicative_step(r.g, r.f.transpose() * x, r.f.transpose() * r.f);
    double obj = frob_sq(x - r.f * r.g);
    r.objective.push_back(obj);
    if (it > 0 && std::abs(prev - obj) <= tol * std::max(prev, kDenomFloor)) break;
    prev = obj;
  }
  if (r.f.size() == 0) r.f = x * pinv(r.g);
  return r;
}

SemiNmfResult seminmf(const Matrix& x, int k, std::uint64_t seed, int max_iter, double tol) {
  if (x.cols() < k)
    throw DimensionError("seminmf: n=" + std::to_string(x.cols()) + " < k=" + std::to_string(k));
  require_finite(x, "seminmf");
  KmeansResult km = kmeans(x.transpose(), k, seed, 300, 3);
  return seminmf_from(x, indicator_init(km.labels, k), max_iter, tol);
}

LayerStack pretrain_stack(const Matrix& x, const std::vector<int>& layer_dims, std::uint64_t seed,
                          int max_iter, double tol) {
  if (layer_dims.empty()) throw DimensionError("pretrain_stack: no layers");
  for (std::size_t i = 0; i < layer_dims.size(); ++i) {
    if (layer_dims[i] < 1 || (i > 0 && layer_dims[i] > layer_dims[i - 1]))
      throw DimensionError("pretrain_stack: layer sizes must be non-increasing and >= 1");
  }
  if (layer_dims.front() > x.cols())
    throw DimensionError("pretrain_stack: first layer wider than the sample count");
  require_finite(x, "pretrain_stack");
  LayerStack s;
  const Matrix pts = x.transpose();
  Matrix cur = x;
  for (std::size_t i = 0; i < layer_dims.size(); ++i) {
    const int k = layer_dims[i];
    KmeansResult km = kmeans(pts, k, i == 0 ? seed : derive_seed(seed, i), 300, 3);
    SemiNmfResult r = seminmf_from(cur, indicator_init(km.labels, k), max_iter, tol);
    s.f.push_back(r.f);
    s.g.push_back(r.g);
    s.objective.push_back(std::move(r.objective));
    cur = r.g;
  }
  return s;
}

Matrix chain(const std::vector<Matrix>& f, std::size_t count, Eigen::Index d) {
  Matrix z = Matrix::Identity(d, d);
  for (std::size_t i = 0; i < count; ++i) z = z * f[i];
  return z;
}

}  // namespace dmfaw
