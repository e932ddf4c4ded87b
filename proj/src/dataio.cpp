#include "dmfaw/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <json.hpp>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "dmfaw/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace dmfaw {

Normalization parse_normalization(const std::string& s) {
  if (s == "none") return Normalization::None;
  if (s == "l2_sample") return Normalization::L2Sample;
  if (s == "zscore_feature") return Normalization::ZscoreFeature;
  if (s == "minmax_feature") return Normalization::MinmaxFeature;
  throw DataError("unknown normalization '" + s + "'");
}

std::string to_string(Normalization n) {
  switch (n) {
    case Normalization::None: return "none";
    case Normalization::L2Sample: return "l2_sample";
    case Normalization::ZscoreFeature: return "zscore_feature";
    case Normalization::MinmaxFeature: return "minmax_feature";
  }
  return "none";
}

Manifest read_manifest(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw DataError("cannot open manifest " + manifest_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError(manifest_path + ": " + e.what());
  }
  const fs::path base = fs::path(manifest_path).parent_path();
  auto resolve = [&](const std::string& p) {
    fs::path q(p);
    return (q.is_absolute() ? q : base / q).string();
  };
  Manifest m;
  try {
    m.name = j.value("name", std::string{});
    m.clusters = j.at("clusters").get<int>();
    m.normalization = parse_normalization(j.value("normalization", std::string("l2_sample")));
    for (const auto& v : j.at("views")) {
      ViewEntry e;
      e.path = resolve(v.at("path").get<std::string>());
      const std::string delim = v.value("delimiter", std::string(","));
      e.delimiter = delim == "\\t" ? '\t' : (delim.empty() ? ',' : delim[0]);
      e.has_header = v.value("has_header", false);
      m.views.push_back(e);
    }
    if (j.contains("labels_path") && !j["labels_path"].is_null())
      m.labels_path = resolve(j["labels_path"].get<std::string>());
  } catch (const json::exception& e) {
    throw DataError(manifest_path + ": " + e.what());
  }
  if (m.clusters < 2) throw DataError(manifest_path + ": clusters must be >= 2");
  if (m.views.empty()) throw DataError(manifest_path + ": no views");
  return m;
}

void write_manifest(const std::string& manifest_path, const Manifest& m) {
  json j;
  j["name"] = m.name;
  j["clusters"] = m.clusters;
  j["normalization"] = to_string(m.normalization);
  j["views"] = json::array();
  for (const auto& v : m.views)
    j["views"].push_back({{"path", v.path},
                          {"delimiter", v.delimiter == '\t' ? "\\t" : std::string(1, v.delimiter)},
                          {"has_header", v.has_header}});
  j["labels_path"] = m.labels_path ? json(*m.labels_path) : json(nullptr);
  std::ofstream out(manifest_path);
  if (!out) throw DataError("cannot write " + manifest_path);
  out << j.dump(2) << "\n";
}

Matrix read_view(const std::string& path, char delimiter, bool has_header) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open view file " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (has_header && lineno == 1) continue;
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, delimiter)) {
      const auto b = cell.find_first_not_of(" \t");
      const auto e = cell.find_last_not_of(" \t");
      std::string t = b == std::string::npos ? "" : cell.substr(b, e - b + 1);
      std::size_t used = 0;
      double val = 0.0;
      try {
        val = std::stod(t, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (t.empty() || used != t.size() || !std::isfinite(val))
        throw DataError(path + ":" + std::to_string(lineno) + ": non-numeric cell '" + t + "'");
      row.push_back(val);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw DataError(path + ":" + std::to_string(lineno) + ": ragged row (" +
                      std::to_string(row.size()) + " cells, expected " +
                      std::to_string(rows.front().size()) + ")");
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.front().empty()) throw DataError(path + ": no data");
  Matrix x(rows.front().size(), rows.size());
  for (std::size_t j = 0; j < rows.size(); ++j)
    for (std::size_t i = 0; i < rows[j].size(); ++i) x(i, j) = rows[j][i];
  return x;
}

void write_view(const std::string& path, const Matrix& x, char delimiter) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << std::setprecision(17);
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      if (i) out << delimiter;
      out << x(i, j);
    }
    out << '\n';
  }
}

std::vector<int> read_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open label file " + path);
  std::vector<int> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(line, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || line.find_first_not_of(" \t\r", used) != std::string::npos)
      throw DataError(path + ":" + std::to_string(lineno) + ": not an integer label");
    labels.push_back(v);
  }
  return labels;
}

void write_labels(const std::string& path, const std::vector<int>& labels) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  for (int l : labels) out << l << '\n';
}

void normalize(Matrix& x, Normalization mode) {
  switch (mode) {
    case Normalization::None:
      break;
    case Normalization::L2Sample:
      for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const double nr = x.col(j).norm();
        if (nr > 0.0) x.col(j) /= nr;
      }
      break;
    case Normalization::ZscoreFeature:
      for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const double mu = x.row(i).mean();
        x.row(i).array() -= mu;
        const double sd = std::sqrt(x.row(i).squaredNorm() / static_cast<double>(x.cols()));
        if (sd > 0.0) x.row(i) /= sd;
      }
      break;
    case Normalization::MinmaxFeature:
      for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const double lo = x.row(i).minCoeff();
        const double span = x.row(i).maxCoeff() - lo;
        x.row(i).array() -= lo;
        if (span > 0.0) x.row(i) /= span;
      }
      break;
  }
}

MultiViewDataset load(const std::string& manifest_path) {
  Manifest m = read_manifest(manifest_path);
  MultiViewDataset ds;
  ds.name = m.name;
  ds.k = m.clusters;
  for (const auto& v : m.views) {
    Matrix x = read_view(v.path, v.delimiter, v.has_header);
    if (!ds.views.empty() && x.cols() != ds.views.front().cols())
      throw DataError("sample-count mismatch: " + m.views.front().path + " has " +
                      std::to_string(ds.views.front().cols()) + " samples, " + v.path + " has " +
                      std::to_string(x.cols()));
    normalize(x, m.normalization);
    ds.views.push_back(std::move(x));
  }
  if (m.labels_path) {
    std::vector<int> labels = read_labels(*m.labels_path);
    if (static_cast<Eigen::Index>(labels.size()) != ds.samples())
      throw DataError(*m.labels_path + ": " + std::to_string(labels.size()) +
                      " labels for " + std::to_string(ds.samples()) + " samples");
    const std::size_t distinct = std::set<int>(labels.begin(), labels.end()).size();
    if (static_cast<int>(distinct) != ds.k)
      throw DataError(*m.labels_path + ": " + std::to_string(distinct) +
                      " distinct labels but clusters=" + std::to_string(ds.k));
    ds.labels = std::move(labels);
  }
  return ds;
}

MultiViewDataset synth_blobs(const SynthParams& p) {
  if (p.views < 1) throw std::invalid_argument("synth: views must be >= 1");
  if (p.k < 2) throw std::invalid_argument("synth: k must be >= 2");
  if (p.n < 2 * p.k) throw std::invalid_argument("synth: need n >= 2k");
  if (static_cast<int>(p.dims.size()) != p.views)
    throw std::invalid_argument("synth: dims must list one size per view");
  if (!(p.noise_sigma >= 0.0)) throw std::invalid_argument("synth: noise_sigma must be >= 0");
  if (!(p.irrelevant_frac >= 0.0 && p.irrelevant_frac < 1.0))
    throw std::invalid_argument("synth: irrelevant_frac must be in [0,1)");
  for (int d : p.dims)
    if (d - static_cast<int>(std::floor(d * p.irrelevant_frac)) < 1)
      throw std::invalid_argument("synth: every view needs at least one informative feature");

  MultiViewDataset ds;
  ds.name = "synth_blobs";
  ds.k = p.k;
  std::mt19937_64 rng(p.seed);
  std::vector<int> labels(p.n);
  for (int i = 0; i < p.n; ++i) labels[i] = i % p.k;
  std::shuffle(labels.begin(), labels.end(), rng);
  ds.labels = labels;

  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int v = 0; v < p.views; ++v) {
    std::mt19937_64 vr(derive_seed(p.seed, v));
    const int d = p.dims[v];
    const int noise = static_cast<int>(std::floor(d * p.irrelevant_frac));
    const int rel = d - noise;
    std::vector<int> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), vr);

    Matrix centers(p.k, rel);
    for (Eigen::Index i = 0; i < centers.size(); ++i) centers.data()[i] = gauss(vr);
    double min_sep = std::numeric_limits<double>::infinity();
    for (int a = 0; a < p.k; ++a)
      for (int b = a + 1; b < p.k; ++b)
        min_sep = std::min(min_sep, (centers.row(a) - centers.row(b)).norm());
    // stretch so centers sit at least 10 sigma apart
    const double scale = min_sep > 0.0 ? std::max(1.0, 10.0 * p.noise_sigma / min_sep) : 1.0;
    centers *= scale;

    Matrix x(d, p.n);
    for (int j = 0; j < p.n; ++j) {
      for (int f = 0; f < rel; ++f) x(perm[f], j) = centers(labels[j], f) + p.noise_sigma * gauss(vr);
      for (int f = rel; f < d; ++f) x(perm[f], j) = scale * gauss(vr);
    }
    ds.views.push_back(std::move(x));
  }
  return ds;
}

std::string write_dataset(const std::string& dir, const MultiViewDataset& ds,
                          Normalization normalization) {
  fs::create_directories(dir);
  Manifest m;
  m.name = ds.name;
  m.clusters = ds.k;
  m.normalization = normalization;
  for (std::size_t v = 0; v < ds.views.size(); ++v) {
    const std::string file = "view_" + std::to_string(v) + ".csv";
    write_view((fs::path(dir) / file).string(), ds.views[v]);
    m.views.push_back({file, ',', false});
  }
  if (ds.labels) {
    write_labels((fs::path(dir) / "labels.txt").string(), *ds.labels);
    m.labels_path = "labels.txt";
  }
  const std::string path = (fs::path(dir) / "manifest.json").string();
  write_manifest(path, m);
  return path;
}

}  // namespace dmfaw
