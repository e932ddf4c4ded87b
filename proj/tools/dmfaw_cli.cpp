#include <CLI11.hpp>
#include <cmath>
#include <iostream>

#include "dmfaw/dataio.hpp"
#include "dmfaw/runner.hpp"

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<int> parse_int_list(const std::string& s, const char* flag) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      int v = std::stoi(item, &used);
      if (used != item.size() || v < 1) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw UsageError(std::string(flag) + ": expected positive integers, got '" + s + "'");
    }
  }
  if (out.empty()) throw UsageError(std::string(flag) + ": empty list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deep matrix factorization with adaptive weights for multi-view clustering"};
  app.require_subcommand(1);

  dmfaw::RunOptions ro;
  std::string layers;
  double fixed_p = 0.0;
  auto* run = app.add_subcommand("run", "fit a dataset and score repeated k-means");
  run->add_option("--manifest", ro.manifest, "dataset manifest (JSON)")->required();
  run->add_option("--lambda", ro.lambda, "alignment weight")->capture_default_str();
  run->add_option("--layers", layers, "hidden layer sizes k1,k2");
  run->add_flag("--grid", ro.grid, "sweep k1 in {8k,10k,12k} x k2 in {4k,5k,6k}");
  run->add_option("--seed", ro.seed)->capture_default_str();
  run->add_option("--repeats", ro.repeats, "final k-means repeats")->capture_default_str();
  run->add_option("--max-iters", ro.max_iters)->capture_default_str();
  run->add_option("--conv-tol", ro.conv_tol)->capture_default_str();
  run->add_option("--n1", ro.n1)->capture_default_str();
  run->add_option("--n2", ro.n2)->capture_default_str();
  run->add_option("--p-init", ro.p_init)->capture_default_str();
  auto* fixed = run->add_option("--fixed-p", fixed_p, "disable the controller and hold p");
  run->add_option("--tol-init", ro.tol_init)->capture_default_str();
  run->add_option("--jobs", ro.jobs, "worker threads")->capture_default_str();
  run->add_option("--out", ro.out, "output directory")->capture_default_str();

  dmfaw::SynthParams sp;
  std::string dims = "20,20,20";
  std::string synth_out = ".";
  auto* synth = app.add_subcommand("synth", "write a synthetic multi-view dataset");
  synth->add_option("--views", sp.views)->capture_default_str();
  synth->add_option("--n", sp.n)->capture_default_str();
  synth->add_option("--k", sp.k)->capture_default_str();
  synth->add_option("--dims", dims)->capture_default_str();
  synth->add_option("--noise-sigma", sp.noise_sigma)->capture_default_str();
  synth->add_option("--irrelevant-frac", sp.irrelevant_frac)->capture_default_str();
  synth->add_option("--seed", sp.seed)->capture_default_str();
  synth->add_option("--out", synth_out)->capture_default_str();

  std::string pred_path, truth_path;
  auto* met = app.add_subcommand("metrics", "ACC, NMI and Purity of two label files");
  met->add_option("pred", pred_path)->required();
  met->add_option("truth", truth_path)->required();

  std::string results_dir, sim_out;
  auto* sim = app.add_subcommand("similarity", "pairwise similarity of a finished run");
  sim->add_option("results_dir", results_dir)->required();
  sim->add_option("out", sim_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      if (!layers.empty()) {
        ro.layers = parse_int_list(layers, "--layers");
        if (ro.layers.size() != 2) throw UsageError("--layers takes exactly k1,k2");
      }
      if (*fixed) {
        if (!(fixed_p > 1.001)) throw UsageError("--fixed-p must exceed 1.001");
        ro.fixed_p = fixed_p;
      }
      if (ro.repeats < 1 || ro.max_iters < 1 || ro.jobs < 1 || !(ro.lambda > 0.0))
        throw UsageError("--repeats, --max-iters, --jobs must be >= 1 and --lambda > 0");
      nlohmann::json j = dmfaw::run_experiment(ro);
      std::cout << j["best"].dump() << "\n";
    } else if (*synth) {
      sp.dims = parse_int_list(dims, "--dims");
      dmfaw::MultiViewDataset ds;
      try {
        ds = dmfaw::synth_blobs(sp);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      std::cout << dmfaw::write_dataset(synth_out, ds) << "\n";
    } else if (*met) {
      auto pred = dmfaw::read_labels(pred_path);
      auto truth = dmfaw::read_labels(truth_path);
      std::cout << dmfaw::metrics_json(pred, truth).dump() << "\n";
    } else if (*sim) {
      if (!dmfaw::write_similarity(results_dir, sim_out))
        std::cerr << "warning: no truth labels in " << results_dir << ", matrix left unordered\n";
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
