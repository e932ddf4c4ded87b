#include "dmfaw/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>

#include "dmfaw/dataio.hpp"
#include "dmfaw/kmeans.hpp"
#include "dmfaw/metrics.hpp"
#include "dmfaw/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace dmfaw {
namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct CellResult {
  std::vector<int> layer_dims;
  FitResult fit;
  std::vector<RepeatScore> scores;
  std::vector<std::vector<int>> labels;
  std::size_t best = 0;
  double fit_seconds = 0.0;
  double kmeans_seconds = 0.0;
};

CellResult run_cell(const MultiViewDataset& ds, const RunOptions& opt,
                    const std::vector<int>& layer_dims) {
  CellResult c;
  c.layer_dims = layer_dims;
  auto t0 = std::chrono::steady_clock::now();
  c.fit = fit(ds.views, make_config(opt, layer_dims));
  c.fit_seconds = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  const Matrix pts = c.fit.fusion.consensus.transpose();
  c.scores.resize(opt.repeats);
  c.labels.resize(opt.repeats);
  for (int r = 0; r < opt.repeats; ++r) {
    KmeansResult km = kmeans(pts, ds.k, derive_seed(opt.seed, 1000 + r), 300, 1);
    RepeatScore& s = c.scores[r];
    s.index = r;
    s.inertia = km.inertia;
    if (ds.labels) {
      s.acc = accuracy(km.labels, *ds.labels);
      s.nmi = nmi(km.labels, *ds.labels);
      s.purity = purity(km.labels, *ds.labels);
    }
    c.labels[r] = std::move(km.labels);
  }
  c.kmeans_seconds = seconds_since(t0);
  c.best = best_repeat(c.scores, ds.labels.has_value());
  return c;
}

json score_json(const RepeatScore& s, bool labels) {
  json j{{"index", s.index}, {"inertia", s.inertia}};
  if (labels) {
    j["acc"] = s.acc;
    j["nmi"] = s.nmi;
    j["purity"] = s.purity;
  }
  return j;
}

json mean_std(const std::vector<RepeatScore>& scores) {
  json mean, sd;
  for (const char* key : {"acc", "nmi", "purity"}) {
    double m = 0.0, q = 0.0;
    for (const auto& s : scores) {
      const double v = key[0] == 'a' ? s.acc : key[0] == 'n' ? s.nmi : s.purity;
      m += v;
      q += v * v;
    }
    m /= static_cast<double>(scores.size());
    mean[key] = m;
    sd[key] = std::sqrt(std::max(0.0, q / static_cast<double>(scores.size()) - m * m));
  }
  return {{"mean", mean}, {"std", sd}};
}

bool better_cell(const CellResult& a, const CellResult& b, bool labels) {
  if (labels) {
    const RepeatScore& x = a.scores[a.best];
    const RepeatScore& y = b.scores[b.best];
    if (x.acc != y.acc) return x.acc > y.acc;
    if (x.nmi != y.nmi) return x.nmi > y.nmi;
    if (x.purity != y.purity) return x.purity > y.purity;
    return false;
  }
  return a.fit.trace.back().total < b.fit.trace.back().total;
}

}  // namespace

std::size_t best_repeat(const std::vector<RepeatScore>& scores, bool have_labels) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    const RepeatScore& a = scores[i];
    const RepeatScore& b = scores[best];
    bool better;
    if (!have_labels)
      better = a.inertia < b.inertia;
    else if (a.acc != b.acc)
      better = a.acc > b.acc;
    else if (a.nmi != b.nmi)
      better = a.nmi > b.nmi;
    else
      better = a.purity > b.purity;
    if (better) best = i;
  }
  return best;
}

DmfawConfig make_config(const RunOptions& opt, const std::vector<int>& layer_dims) {
  DmfawConfig c;
  c.lambda = opt.lambda;
  c.layer_dims = layer_dims;
  c.n1 = opt.n1;
  c.n2 = opt.n2;
  c.tol_init = opt.tol_init;
  c.max_outer_iter = opt.max_iters;
  c.conv_rel_tol = opt.conv_tol;
  c.seed = opt.seed;
  c.jobs = opt.jobs;
  if (opt.fixed_p) {
    c.adaptive_p = false;
    c.p_init = *opt.fixed_p;
    c.p_min = std::min(c.p_min, c.p_init);
    c.p_max = std::max(c.p_max, c.p_init);
  } else {
    c.p_init = opt.p_init;
  }
  return c;
}

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << "iter,total,recon,align,p,tol,seconds\n" << std::setprecision(17);
  for (const auto& r : trace)
    out << r.iter << ',' << r.total << ',' << r.recon << ',' << r.align << ',' << r.p << ','
        << r.tol << ',' << r.seconds << '\n';
}

json run_experiment(const RunOptions& opt) {
  if (opt.repeats < 1) throw std::invalid_argument("repeats must be >= 1");
  const auto t0 = std::chrono::steady_clock::now();
  MultiViewDataset ds = load(opt.manifest);
  const int k = ds.k;
  const bool labels = ds.labels.has_value();

  std::vector<std::vector<int>> cells;
  if (opt.grid) {
    for (int a : {8, 10, 12})
      for (int b : {4, 5, 6}) cells.push_back({a * k, b * k, k});
  } else if (!opt.layers.empty()) {
    std::vector<int> dims = opt.layers;
    dims.push_back(k);
    cells.push_back(dims);
  } else {
    cells.push_back({10 * k, 5 * k, k});
  }

  std::vector<CellResult> results;
  std::size_t chosen = 0;
  for (const auto& dims : cells) {
    results.push_back(run_cell(ds, opt, dims));
    if (results.size() > 1 && better_cell(results.back(), results[chosen], labels))
      chosen = results.size() - 1;
  }
  const CellResult& c = results[chosen];

  json j;
  j["dataset"] = {{"name", ds.name},
                  {"samples", ds.samples()},
                  {"views", ds.views.size()},
                  {"clusters", k},
                  {"has_labels", labels}};
  j["config"] = {{"lambda", opt.lambda},
                 {"layers", c.layer_dims},
                 {"grid", opt.grid},
                 {"seed", opt.seed},
                 {"repeats", opt.repeats},
                 {"max_iters", opt.max_iters},
                 {"conv_tol", opt.conv_tol},
                 {"n1", opt.n1},
                 {"n2", opt.n2},
                 {"p_init", opt.fixed_p ? *opt.fixed_p : opt.p_init},
                 {"adaptive_p", !opt.fixed_p.has_value()},
                 {"tol_init", opt.tol_init}};
  const FitResult& f = c.fit;
  j["fit"] = {{"iterations", f.trace.size()},
              {"converged", f.converged},
              {"objective", f.trace.back().total},
              {"recon", f.trace.back().recon},
              {"align", f.trace.back().align},
              {"final_p", f.controller.p},
              {"coeffs", std::vector<double>(f.fusion.coeffs.data(),
                                             f.fusion.coeffs.data() + f.fusion.coeffs.size())},
              {"guard_reverts", f.guard_reverts},
              {"rejected_steps", f.rejected_steps}};
  json reps = json::array();
  for (const auto& s : c.scores) reps.push_back(score_json(s, labels));
  j["repeats"] = reps;
  j["best"] = score_json(c.scores[c.best], labels);
  if (labels) {
    json ms = mean_std(c.scores);
    j["mean"] = ms["mean"];
    j["std"] = ms["std"];
  }
  if (opt.grid) {
    json g = json::array();
    for (const auto& r : results) {
      json cell = {{"layers", r.layer_dims}, {"iterations", r.fit.trace.size()},
                   {"objective", r.fit.trace.back().total}};
      cell["best"] = score_json(r.scores[r.best], labels);
      g.push_back(cell);
    }
    j["grid_cells"] = g;
  }
  double fit_s = 0.0, km_s = 0.0;
  for (const auto& r : results) {
    fit_s += r.fit_seconds;
    km_s += r.kmeans_seconds;
  }

  fs::create_directories(opt.out);
  const fs::path out(opt.out);
  write_trace_csv((out / "trace.csv").string(), f.trace);
  write_view((out / "gstar.csv").string(), f.fusion.consensus);
  write_labels((out / "pred_labels.txt").string(), c.labels[c.best]);
  if (labels) write_labels((out / "truth_labels.txt").string(), *ds.labels);
  else fs::remove(out / "truth_labels.txt");

  j["timing"] = {{"fit_seconds", fit_s}, {"kmeans_seconds", km_s}, {"total_seconds", seconds_since(t0)}};
  std::ofstream rj(out / "results.json");
  if (!rj) throw DataError("cannot write " + (out / "results.json").string());
  rj << j.dump(2) << "\n";
  return j;
}

json metrics_json(const std::vector<int>& pred, const std::vector<int>& truth) {
  return {{"acc", accuracy(pred, truth)}, {"nmi", nmi(pred, truth)}, {"purity", purity(pred, truth)}};
}

bool write_similarity(const std::string& results_dir, const std::string& out_path) {
  const fs::path dir(results_dir);
  const fs::path g = dir / "gstar.csv";
  if (!fs::exists(g)) throw DataError("missing " + g.string());
  Matrix gstar = read_view(g.string());
  std::optional<std::vector<int>> truth;
  if (fs::exists(dir / "truth_labels.txt")) truth = read_labels((dir / "truth_labels.txt").string());
  Similarity s = pairwise_similarity(gstar, truth ? &*truth : nullptr);
  std::ofstream out(out_path);
  if (!out) throw DataError("cannot write " + out_path);
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < s.s.rows(); ++i) {
    for (Eigen::Index j = 0; j < s.s.cols(); ++j) {
      if (j) out << ',';
      out << s.s(i, j);
    }
    out << '\n';
  }
  return truth.has_value();
}

}  // namespace dmfaw
