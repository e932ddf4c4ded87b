#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dmfaw/linalg.hpp"

namespace dmfaw {

enum class Normalization { None, L2Sample, ZscoreFeature, MinmaxFeature };

Normalization parse_normalization(const std::string& s);
std::string to_string(Normalization n);

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ViewEntry {
  std::string path;
  char delimiter = ',';
  bool has_header = false;
};

struct Manifest {
  std::string name;
  int clusters = 0;
  Normalization normalization = Normalization::L2Sample;
  std::vector<ViewEntry> views;
  std::optional<std::string> labels_path;
};

struct MultiViewDataset {
  std::string name;
  std::vector<Matrix> views;  // d_v x n
  std::optional<std::vector<int>> labels;
  int k = 0;

  Eigen::Index samples() const { return views.empty() ? 0 : views.front().cols(); }
};

// Relative paths resolve against the manifest's directory.
Manifest read_manifest(const std::string& manifest_path);
void write_manifest(const std::string& manifest_path, const Manifest& m);

MultiViewDataset load(const std::string& manifest_path);

// Rows are samples on disk; returned matrix is features x samples.
Matrix read_view(const std::string& path, char delimiter = ',', bool has_header = false);
void write_view(const std::string& path, const Matrix& x, char delimiter = ',');
std::vector<int> read_labels(const std::string& path);
void write_labels(const std::string& path, const std::vector<int>& labels);

// In place on a features x samples matrix.
void normalize(Matrix& x, Normalization mode);

struct SynthParams {
  int views = 3;
  int n = 300;
  int k = 3;
  std::vector<int> dims{20, 20, 20};
  double noise_sigma = 0.5;
  double irrelevant_frac = 0.3;
  std::uint64_t seed = 0;
};

// Raw (unnormalized) Gaussian blobs; floor(d * irrelevant_frac) features per
// view are pure noise.
MultiViewDataset synth_blobs(const SynthParams& p);

// Writes view_<v>.csv, labels.txt and manifest.json into dir.
std::string write_dataset(const std::string& dir, const MultiViewDataset& ds,
                          Normalization normalization = Normalization::L2Sample);

}  // namespace dmfaw
