#include "dmfaw/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace dmfaw {
namespace {

void check_lengths(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size())
    throw DimensionError("label length mismatch: " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  if (a.empty()) throw DimensionError("empty label vector");
}

std::vector<int> distinct(const std::vector<int>& x) {
  std::vector<int> d = x;
  std::sort(d.begin(), d.end());
  d.erase(std::unique(d.begin(), d.end()), d.end());
  return d;
}

int index_of(const std::vector<int>& sorted, int value) {
  return static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), value) - sorted.begin());
}

double entropy(const std::vector<long>& counts, double n) {
  double h = 0.0;
  for (long c : counts)
    if (c > 0) h -= (c / n) * std::log(c / n);
  return h;
}

}  // namespace

Contingency contingency(const std::vector<int>& pred, const std::vector<int>& truth) {
  check_lengths(pred, truth);
  Contingency c{distinct(pred), distinct(truth), {}};
  c.counts.assign(c.pred_values.size(), std::vector<long>(c.truth_values.size(), 0));
  for (std::size_t i = 0; i < pred.size(); ++i)
    ++c.counts[index_of(c.pred_values, pred[i])][index_of(c.truth_values, truth[i])];
  return c;
}

// Shortest augmenting path (Jonker-Volgenant style potentials), minimizing cost.
std::vector<int> max_weight_assignment(const std::vector<std::vector<double>>& weight) {
  const int n = static_cast<int>(weight.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = -weight[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j]) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

double accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
  Contingency c = contingency(pred, truth);
  const std::size_t m = std::max(c.pred_values.size(), c.truth_values.size());
  std::vector<std::vector<double>> w(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < c.counts.size(); ++i)
    for (std::size_t j = 0; j < c.counts[i].size(); ++j) w[i][j] = static_cast<double>(c.counts[i][j]);
  std::vector<int> match = max_weight_assignment(w);
  double hit = 0.0;
  for (std::size_t i = 0; i < m; ++i) hit += w[i][match[i]];
  return hit / static_cast<double>(pred.size());
}

double nmi(const std::vector<int>& pred, const std::vector<int>& truth) {
  Contingency c = contingency(pred, truth);
  const double n = static_cast<double>(pred.size());
  std::vector<long> rows(c.pred_values.size(), 0), cols(c.truth_values.size(), 0);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) {
      rows[i] += c.counts[i][j];
      cols[j] += c.counts[i][j];
    }
  const double hp = entropy(rows, n);
  const double ht = entropy(cols, n);
  if (hp == 0.0 || ht == 0.0) return (hp == 0.0 && ht == 0.0) ? 1.0 : 0.0;
  double mi = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const double nij = static_cast<double>(c.counts[i][j]);
      if (nij > 0) mi += (nij / n) * std::log(n * nij / (double(rows[i]) * double(cols[j])));
    }
  return std::clamp(mi / std::sqrt(hp * ht), 0.0, 1.0);
}

double purity(const std::vector<int>& pred, const std::vector<int>& truth) {
  Contingency c = contingency(pred, truth);
  long hit = 0;
  for (const auto& row : c.counts) hit += *std::max_element(row.begin(), row.end());
  return static_cast<double>(hit) / static_cast<double>(pred.size());
}

Similarity pairwise_similarity(const Matrix& g_star, const std::vector<int>* truth) {
  require_finite(g_star, "pairwise_similarity");
  const Eigen::Index n = g_star.cols();
  Similarity out;
  out.order.resize(n);
  std::iota(out.order.begin(), out.order.end(), 0);
  if (truth) {
    if (static_cast<Eigen::Index>(truth->size()) != n)
      throw DimensionError("pairwise_similarity: label length mismatch");
    std::stable_sort(out.order.begin(), out.order.end(),
                     [&](int a, int b) { return (*truth)[a] < (*truth)[b]; });
  }
  Matrix g(g_star.rows(), n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double nr = g_star.col(out.order[j]).norm();
    g.col(j) = nr > 0.0 ? Vector(g_star.col(out.order[j]) / nr) : Vector(g_star.col(out.order[j]));
  }
  out.s = g.transpose() * g;
  out.s = 0.5 * (out.s + out.s.transpose());
  for (Eigen::Index j = 0; j < n; ++j)
    if (g.col(j).squaredNorm() > 0.0) out.s(j, j) = 1.0;
  out.s = out.s.cwiseMax(-1.0).cwiseMin(1.0);
  return out;
}

}  // namespace dmfaw
