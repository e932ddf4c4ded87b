#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dmfaw/core.hpp"

namespace dmfaw {

struct RunOptions {
  std::string manifest;
  double lambda = 1.0;
  std::vector<int> layers;  // k1,k2; empty means 10k,5k
  bool grid = false;
  std::uint64_t seed = 0;
  int repeats = 50;
  int max_iters = 100;
  double conv_tol = 1e-5;
  double n1 = 1.0;
  double n2 = 0.2;
  double p_init = 2.0;
  std::optional<double> fixed_p;
  double tol_init = 1e-3;
  int jobs = 1;
  std::string out = ".";
};

struct RepeatScore {
  int index = 0;
  double acc = 0.0;
  double nmi = 0.0;
  double purity = 0.0;
  double inertia = 0.0;
};

// Max ACC, then NMI, then Purity, then lowest index. Without labels:
// lowest inertia, then lowest index.
std::size_t best_repeat(const std::vector<RepeatScore>& scores, bool have_labels);

DmfawConfig make_config(const RunOptions& opt, const std::vector<int>& layer_dims);

// Fit, repeated final k-means, and all output files. Returns results.json content.
nlohmann::json run_experiment(const RunOptions& opt);

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace);

nlohmann::json metrics_json(const std::vector<int>& pred, const std::vector<int>& truth);

// Reads gstar.csv (+ truth_labels.txt when present) from a run directory.
// Returns false when no labels were available.
bool write_similarity(const std::string& results_dir, const std::string& out_path);

}  // namespace dmfaw
