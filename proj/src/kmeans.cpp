#include "dmfaw/kmeans.hpp"

#include <limits>
#include <random>

#include "dmfaw/rng.hpp"

namespace dmfaw {
namespace {

double sq_dist(const Matrix& pts, Eigen::Index i, const Matrix& cen, Eigen::Index c) {
  return (pts.row(i) - cen.row(c)).squaredNorm();
}

Matrix seed_plus_plus(const Matrix& pts, int k, std::mt19937_64& rng) {
  const Eigen::Index n = pts.rows();
  Matrix cen(k, pts.cols());
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  cen.row(0) = pts.row(pick(rng));
  std::vector<double> d2(n);
  for (Eigen::Index i = 0; i < n; ++i) d2[i] = sq_dist(pts, i, cen, 0);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (double v : d2) total += v;
    Eigen::Index chosen = 0;
    if (total > 0.0) {
      double r = std::uniform_real_distribution<double>(0.0, total)(rng);
      chosen = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        r -= d2[i];
        if (r < 0.0) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = pick(rng);
    }
    cen.row(c) = pts.row(chosen);
    for (Eigen::Index i = 0; i < n; ++i) d2[i] = std::min(d2[i], sq_dist(pts, i, cen, c));
  }
  return cen;
}

double assign(const Matrix& pts, const Matrix& cen, std::vector<int>& labels) {
  double inertia = 0.0;
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    int best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < cen.rows(); ++c) {
      double d = sq_dist(pts, i, cen, c);
      if (d < bd) {
        bd = d;
        best = static_cast<int>(c);
      }
    }
    labels[i] = best;
    inertia += bd;
  }
  return inertia;
}

// Recompute means; an empty cluster takes the point farthest from its own
// centroid (drawn from a cluster that keeps at least one member).
void update_centroids(const Matrix& pts, Matrix& cen, std::vector<int>& labels) {
  const int k = static_cast<int>(cen.rows());
  for (;;) {
    std::vector<int> count(k, 0);
    Matrix sum = Matrix::Zero(k, pts.cols());
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
      sum.row(labels[i]) += pts.row(i);
      ++count[labels[i]];
    }
    int empty = -1;
    for (int c = 0; c < k; ++c) {
      if (count[c] > 0)
        cen.row(c) = sum.row(c) / count[c];
      else if (empty < 0)
        empty = c;
    }
    if (empty < 0) return;
    Eigen::Index far = -1;
    double fd = -1.0;
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
      if (count[labels[i]] < 2) continue;
      double d = sq_dist(pts, i, cen, labels[i]);
      if (d > fd) {
        fd = d;
        far = i;
      }
    }
    labels[far] = empty;
  }
}

KmeansResult lloyd(const Matrix& pts, int k, std::uint64_t seed, int max_iter) {
  std::mt19937_64 rng(seed);
  KmeansResult r;
  r.centroids = seed_plus_plus(pts, k, rng);
  r.labels.assign(pts.rows(), 0);
  assign(pts, r.centroids, r.labels);
  for (int it = 0; it < max_iter; ++it) {
    update_centroids(pts, r.centroids, r.labels);
    std::vector<int> prev = r.labels;
    r.inertia = assign(pts, r.centroids, r.labels);
    r.inertia_trace.push_back(r.inertia);
    if (r.labels == prev) break;
  }
  update_centroids(pts, r.centroids, r.labels);
  r.inertia = 0.0;
  for (Eigen::Index i = 0; i < pts.rows(); ++i) r.inertia += sq_dist(pts, i, r.centroids, r.labels[i]);
  r.inertia_trace.push_back(r.inertia);
  return r;
}

}  // namespace

KmeansResult kmeans(const Matrix& points, int k, std::uint64_t seed, int max_iter, int n_init) {
  if (k < 1) throw DimensionError("kmeans: k must be >= 1");
  if (points.rows() < k)
    throw DimensionError("kmeans: " + std::to_string(points.rows()) + " points for k=" +
                         std::to_string(k));
  require_finite(points, "kmeans");
  KmeansResult best;
  for (int r = 0; r < std::max(1, n_init); ++r) {
    KmeansResult cur = lloyd(points, k, derive_seed(seed, r), max_iter);
    if (r == 0 || cur.inertia < best.inertia) best = std::move(cur);
  }
  return best;
}

}  // namespace dmfaw
