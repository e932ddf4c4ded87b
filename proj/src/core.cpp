#include "dmfaw/core.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "dmfaw/rng.hpp"

namespace dmfaw {

void DmfawConfig::validate() const {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
  if (layer_dims.empty()) throw std::invalid_argument("layer_dims is empty");
  for (std::size_t i = 0; i < layer_dims.size(); ++i) {
    if (layer_dims[i] < 1) throw std::invalid_argument("layer sizes must be >= 1");
    if (i > 0 && layer_dims[i] >= layer_dims[i - 1])
      throw std::invalid_argument("layer sizes must be strictly decreasing");
  }
  if (!(1.0 < p_min && p_min <= p_init && p_init <= p_max))
    throw std::invalid_argument("need 1 < p_min <= p_init <= p_max");
  if (!(tol_init > 0.0)) throw std::invalid_argument("tol_init must be > 0");
  if (max_outer_iter < 1) throw std::invalid_argument("max_outer_iter must be >= 1");
}

namespace {

Matrix last_product(const LayerStack& s, Eigen::Index d) { return chain(s.f, s.f.size(), d); }

Matrix residual(const Matrix& x, const LayerStack& s) {
  return x - last_product(s, x.rows()) * s.g.back();
}

double view_objective(const Matrix& x, const LayerStack& s, const Vector& w,
                      const FusionState& fusion, std::size_t v, double lambda) {
  const double recon = w.dot(residual(x, s).rowwise().squaredNorm());
  return recon - lambda * fusion.coeffs(v) * alignment_trace(fusion, s, v);
}

// Multiplicative step on G_m, then projection of its rows onto the unit
// sphere with F_m absorbing the scale. Step length halves until the view
// objective does not increase; returns false if no step was taken.
bool pinned_last_step(const Matrix& x, LayerStack& s, const Vector& w, const FusionState& fusion,
                      std::size_t v, double lambda) {
  const double base = view_objective(x, s, w, fusion, v, lambda);
  const Matrix g0 = s.g.back();
  const Matrix f0 = s.f.back();
  const Matrix target = update_partition_last(x, s, w, fusion, v, lambda);
  double a = 1.0;
  for (int tries = 0; tries < 40; ++tries, a *= 0.5) {
    Matrix gn = (1.0 - a) * g0 + a * target;
    Vector r = gn.rowwise().norm();
    for (Eigen::Index i = 0; i < r.size(); ++i)
      if (!(r(i) > 0.0)) r(i) = 1.0;
    s.g.back() = r.cwiseInverse().asDiagonal() * gn;
    s.f.back() = f0 * r.asDiagonal();
    if (view_objective(x, s, w, fusion, v, lambda) <= base) return true;
  }
  s.g.back() = g0;
  s.f.back() = f0;
  return false;
}

struct ViewOutcome {
  bool reverted = false;
  bool rejected = false;
};

ViewOutcome view_step(const Matrix& x, LayerStack& s, Vector& w, FusionState& fusion,
                      std::size_t v, const DmfawConfig& cfg, double p) {
  ViewOutcome out;
  w = update_weights(residual_rows(x, s), p, cfg.regime);
  const Vector scale = w.cwiseSqrt();
  const Vector* rs = cfg.weighted_mapping ? &scale : nullptr;
  const std::size_t m = s.g.size();
  const double before = view_objective(x, s, w, fusion, v, cfg.lambda);
  const LayerStack snapshot = s;

  for (std::size_t i = 0; i + 1 < m; ++i) {
    s.f[i] = update_mapping(x, s, i, rs);
    s.g[i] = update_partition_mid(x, s, w, i);
  }
  s.f[m - 1] = update_mapping(x, s, m - 1, rs);
  out.rejected = !pinned_last_step(x, s, w, fusion, v, cfg.lambda);

  if (view_objective(x, s, w, fusion, v, cfg.lambda) > before) {
    s = snapshot;
    s.f[m - 1] = update_mapping(x, s, m - 1, rs);
    out.rejected = !pinned_last_step(x, s, w, fusion, v, cfg.lambda);
    out.reverted = true;
  }
  fusion.permutations[v] = update_permutation(fusion, s, v);
  return out;
}

template <class F>
void for_each_view(std::size_t count, int jobs, F&& fn) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t v = 0; v < count; ++v) fn(v);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  for (std::size_t start = 0; start < count; start += jobs) {
    std::vector<std::thread> pool;
    for (std::size_t v = start; v < std::min(count, start + jobs); ++v)
      pool.emplace_back([&, v] {
        try {
          fn(v);
        } catch (...) {
          errors[v] = std::current_exception();
        }
      });
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

Vector residual_rows(const Matrix& x, const LayerStack& stack) {
  return residual(x, stack).rowwise().squaredNorm();
}

double alignment_trace(const FusionState& fusion, const LayerStack& stack, std::size_t v) {
  return (fusion.consensus * fusion.avg_region * stack.g.back().transpose() *
          fusion.permutations[v])
      .trace();
}

Objective objective(const std::vector<Matrix>& views, const std::vector<LayerStack>& stacks,
                    const std::vector<Vector>& weights, const FusionState& fusion, double lambda) {
  if (views.size() != stacks.size() || views.size() != weights.size())
    throw DimensionError("objective: view count mismatch");
  Objective o;
  for (std::size_t v = 0; v < views.size(); ++v) {
    Vector u = residual_rows(views[v], stacks[v]);
    if (u.size() != weights[v].size()) throw DimensionError("objective: weight length mismatch");
    o.recon += weights[v].dot(u);
    o.align += lambda * fusion.coeffs(v) * alignment_trace(fusion, stacks[v], v);
  }
  o.total = o.recon - o.align;
  return o;
}

Matrix update_consensus(const FusionState& fusion, const std::vector<LayerStack>& stacks) {
  const Matrix& gm0 = stacks.front().g.back();
  Matrix s = Matrix::Zero(gm0.cols(), gm0.rows());
  for (std::size_t v = 0; v < stacks.size(); ++v)
    s += fusion.coeffs(v) * stacks[v].g.back().transpose() * fusion.permutations[v];
  return max_trace_orthogonal(fusion.avg_region * s);
}

Matrix update_mapping(const Matrix& x, const LayerStack& stack, std::size_t i,
                      const Vector* row_scale) {
  Matrix z = chain(stack.f, i, x.rows());
  if (!row_scale) return pinv(z) * x * pinv(stack.g[i]);
  return pinv(row_scale->asDiagonal() * z) * (row_scale->asDiagonal() * x) * pinv(stack.g[i]);
}

Matrix update_partition_mid(const Matrix& x, const LayerStack& stack, const Vector& w,
                            std::size_t i) {
  Matrix z = chain(stack.f, i + 1, x.rows());
  Matrix ztw = z.transpose() * w.asDiagonal();
  return multiplicative_step(stack.g[i], ztw * x, ztw * z);
}

Matrix update_partition_last(const Matrix& x, const LayerStack& stack, const Vector& w,
                             const FusionState& fusion, std::size_t v, double lambda) {
  const Matrix& g = stack.g.back();
  Matrix z = last_product(stack, x.rows());
  Matrix ztw = z.transpose() * w.asDiagonal();
  Matrix ztx = ztw * x;
  Matrix ztz = ztw * z;
  Matrix t = fusion.permutations[v] * fusion.consensus * fusion.avg_region;
  const double c = 0.5 * lambda * fusion.coeffs(v);
  Matrix num = pos_part(ztx) + neg_part(ztz) * g + c * pos_part(t);
  Matrix den = neg_part(ztx) + pos_part(ztz) * g + c * neg_part(t);
  return g.array() * (num.array() / den.array().max(kDenomFloor)).sqrt();
}

Vector update_weights(const Vector& u, double p, WeightRegime regime) {
  if (std::abs(p - 1.0) < 1e-3 * (1.0 - 1e-9)) throw std::invalid_argument("update_weights: p too close to 1");
  if (u.size() == 0) throw DimensionError("update_weights: empty residual");
  const double sign = regime == WeightRegime::Residual ? 1.0 : -1.0;
  // log-space form of W_i = (sum_j u_j^{p/(p-1)})^{-1/p} u_i^{1/(p-1)}
  Vector lu = u.cwiseMax(1e-12).array().log() * sign;
  Vector a = lu * (p / (p - 1.0));
  const double amax = a.maxCoeff();
  const double lse = amax + std::log((a.array() - amax).exp().sum());
  return (lu.array() / (p - 1.0) - lse / p).exp();
}

Matrix update_permutation(const FusionState& fusion, const LayerStack& stack, std::size_t v) {
  return max_trace_orthogonal(fusion.coeffs(v) * fusion.consensus * fusion.avg_region *
                              stack.g.back().transpose());
}

Vector update_coeffs(const FusionState& fusion, const std::vector<LayerStack>& stacks) {
  const auto nv = static_cast<Eigen::Index>(stacks.size());
  Vector omega(nv);
  for (Eigen::Index v = 0; v < nv; ++v)
    omega(v) = std::max(0.0, alignment_trace(fusion, stacks[v], v));
  const double norm = omega.norm();
  if (!(norm > 0.0)) return Vector::Constant(nv, 1.0 / std::sqrt(static_cast<double>(nv)));
  return omega / norm;
}

Matrix build_avg_region(const std::vector<LayerStack>& stacks) {
  const Eigen::Index n = stacks.front().g.back().cols();
  Matrix a = Matrix::Zero(n, n);
  for (const auto& s : stacks) {
    Matrix gh = s.g.back();
    for (Eigen::Index r = 0; r < gh.rows(); ++r) {
      const double nr = gh.row(r).norm();
      if (nr > 0.0) gh.row(r) /= nr;
    }
    a.noalias() += gh.transpose() * gh;
  }
  a /= static_cast<double>(stacks.size());
  return 0.5 * (a + a.transpose());
}

double kkt_residual(const Matrix& x, const LayerStack& stack, const Vector& w,
                    const FusionState& fusion, std::size_t v, double lambda) {
  const Matrix& g = stack.g.back();
  Matrix z = last_product(stack, x.rows());
  Matrix grad = 2.0 * z.transpose() * w.asDiagonal() * (z * g - x) -
                lambda * fusion.coeffs(v) * fusion.permutations[v] * fusion.consensus *
                    fusion.avg_region;
  return grad.cwiseProduct(g).norm();
}

void normalize_last_rows(LayerStack& stack) {
  Vector r = stack.g.back().rowwise().norm();
  for (Eigen::Index i = 0; i < r.size(); ++i)
    if (!(r(i) > 0.0)) r(i) = 1.0;
  stack.g.back() = r.cwiseInverse().asDiagonal() * stack.g.back();
  stack.f.back() = stack.f.back() * r.asDiagonal();
}

FitResult fit(const std::vector<Matrix>& views, const DmfawConfig& cfg,
              const FitObserver& observer) {
  cfg.validate();
  if (views.empty()) throw std::invalid_argument("fit: no views");
  const Eigen::Index n = views.front().cols();
  for (const auto& x : views) {
    if (x.cols() != n) throw DimensionError("fit: views disagree on sample count");
    require_finite(x, "fit");
  }
  const std::size_t nv = views.size();
  const int k = cfg.layer_dims.back();
  const auto t0 = std::chrono::steady_clock::now();

  FitResult r;
  r.stacks.resize(nv);
  for_each_view(nv, cfg.jobs, [&](std::size_t v) {
    r.stacks[v] = pretrain_stack(views[v], cfg.layer_dims, derive_seed(cfg.seed, v),
                                 cfg.pretrain_iters, cfg.pretrain_tol);
    normalize_last_rows(r.stacks[v]);
  });

  FusionState& fu = r.fusion;
  fu.avg_region = build_avg_region(r.stacks);
  fu.permutations.assign(nv, Matrix::Identity(k, k));
  fu.coeffs = Vector::Constant(static_cast<Eigen::Index>(nv), 1.0 / std::sqrt(double(nv)));

  PiController ctrl{cfg.p_init, cfg.tol_init, std::nullopt, cfg.n1, cfg.n2, cfg.p_min, cfg.p_max};
  r.weights.resize(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    const double d = static_cast<double>(views[v].rows());
    r.weights[v] = Vector::Constant(views[v].rows(), std::pow(1.0 / d, 1.0 / ctrl.p));
  }

  double prev = 0.0;
  for (int it = 1; it <= cfg.max_outer_iter; ++it) {
    const double p = ctrl.p;
    fu.consensus = update_consensus(fu, r.stacks);
    std::vector<ViewOutcome> outcomes(nv);
    for_each_view(nv, cfg.jobs, [&](std::size_t v) {
      outcomes[v] = view_step(views[v], r.stacks[v], r.weights[v], fu, v, cfg, p);
    });
    for (const auto& o : outcomes) {
      r.guard_reverts += o.reverted;
      r.rejected_steps += o.rejected;
    }
    fu.coeffs = update_coeffs(fu, r.stacks);

    Objective obj = objective(views, r.stacks, r.weights, fu, cfg.lambda);
    if (!std::isfinite(obj.total))
      throw NonFiniteError("fit: non-finite objective at iteration " + std::to_string(it));

    TraceRow row{it, obj.total, obj.recon, obj.align, p, ctrl.tol,
                 std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), {}};
    for (std::size_t v = 0; v < nv; ++v)
      row.kkt.push_back(kkt_residual(views[v], r.stacks[v], r.weights[v], fu, v, cfg.lambda));
    r.trace.push_back(row);
    if (observer) observer(IterationView{it, fu, r.stacks, r.weights, p});

    if (cfg.adaptive_p) ctrl = controller_step(ctrl, obj.total);
    if (it > 1 && std::abs(obj.total - prev) < cfg.conv_rel_tol * std::max(std::abs(prev), 1e-12)) {
      r.converged = true;
      break;
    }
    prev = obj.total;
  }
  r.controller = ctrl;
  return r;
}

}  // namespace dmfaw
