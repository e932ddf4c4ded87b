#pragma once

#include <vector>

#include "dmfaw/linalg.hpp"

namespace dmfaw {

struct Contingency {
  std::vector<int> pred_values;
  std::vector<int> truth_values;
  std::vector<std::vector<long>> counts;  // [pred][truth]
};

Contingency contingency(const std::vector<int>& pred, const std::vector<int>& truth);

// Best agreement over label bijections (Hungarian on the padded confusion matrix).
double accuracy(const std::vector<int>& pred, const std::vector<int>& truth);

// I / sqrt(H_pred H_truth), natural log.
double nmi(const std::vector<int>& pred, const std::vector<int>& truth);

double purity(const std::vector<int>& pred, const std::vector<int>& truth);

// Max-weight perfect matching on a square matrix; result[row] = column.
std::vector<int> max_weight_assignment(const std::vector<std::vector<double>>& weight);

struct Similarity {
  Matrix s;                // n x n, reordered
  std::vector<int> order;  // original sample index per row of s
};

// Cosine similarity between columns of g_star; samples grouped by truth label
// when labels are given (stable within a group).
Similarity pairwise_similarity(const Matrix& g_star, const std::vector<int>* truth = nullptr);

}  // namespace dmfaw
