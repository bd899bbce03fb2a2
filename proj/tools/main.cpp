#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sympca/cli.hpp"

namespace {

using sympca::cli::UsageError;

// Fill fields the user did not pass on the command line from a JSON config
// file; explicit flags win.
nlohmann::json load_config(const std::string& path) {
  if (path.empty()) {
    return {};
  }
  std::ifstream in(path);
  if (!in) {
    throw UsageError("cannot open config file: " + path);
  }
  nlohmann::json cfg;
  try {
    in >> cfg;
  } catch (const std::exception& e) {
    throw UsageError(std::string("bad config JSON: ") + e.what());
  }
  return cfg;
}

template <typename T>
void merge(const CLI::App& cmd, const std::string& flag, const nlohmann::json& cfg,
           const std::string& key, T& field) {
  if (cmd.count(flag) == 0 && cfg.contains(key)) {
    try {
      field = cfg.at(key).get<T>();
    } catch (const std::exception&) {
      throw UsageError("config key '" + key + "' has the wrong type");
    }
  }
}

std::vector<std::uint64_t> parse_seed_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    throw UsageError("--seeds expects a range like 1..10");
  }
  try {
    const std::uint64_t a = std::stoull(text.substr(0, dots));
    const std::uint64_t b = std::stoull(text.substr(dots + 2));
    if (b < a) {
      throw UsageError("--seeds range is empty");
    }
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = a; s <= b; ++s) {
      seeds.push_back(s);
    }
    return seeds;
  } catch (const std::invalid_argument&) {
    throw UsageError("bad --seeds range '" + text + "'");
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"sympca: PCA by maximising symmetric spectral functions of the projected covariance"};
  app.require_subcommand(1);

  sympca::cli::GenOptions gen;
  auto* cmd_gen = app.add_subcommand("gen", "Generate a seeded n x n matrix with a prescribed spectrum");
  cmd_gen->add_option("--n", gen.n, "matrix size")->required();
  cmd_gen->add_option("--spectrum", gen.spectrum,
                      "powerlaw:a (sigma_i = i^-a), list:csv-path, or uniform:a,b (evenly spaced)")
      ->required();
  cmd_gen->add_option("--seed", gen.seed, "RNG seed (default 0)");
  cmd_gen->add_option("--out", gen.out, "output CSV path")->required();

  sympca::cli::PcaOptions pca;
  std::string pca_config;
  std::string pca_seeds;
  auto* cmd_pca = app.add_subcommand("pca", "Gradient-ascent PCA on a data matrix");
  cmd_pca->add_option("--input", pca.input, "data matrix CSV")->required();
  cmd_pca->add_option("--p", pca.p, "target dimension");
  cmd_pca->add_option("--objective", pca.objective,
                      "trace | det | logdet | sq:<q> | conic:<w0,w1,...> (default logdet)");
  cmd_pca->add_option("--step", pca.step, "fixed step size (default 5)");
  cmd_pca->add_option("--iters", pca.iters, "iteration budget (default 5000)");
  cmd_pca->add_option("--stop-tol", pca.stop_tol, "gradient-norm stop tolerance (default 1e-9)");
  cmd_pca->add_option("--seed", pca.seed, "init seed (default 0)");
  cmd_pca->add_option("--seeds", pca_seeds, "seed sweep a..b; runs fan out to workers");
  cmd_pca->add_flag("--stiefel", pca.stiefel, "force Stiefel mode for det/logdet");
  cmd_pca->add_flag("--backtracking", pca.backtracking, "halve the step when it would descend");
  cmd_pca->add_option("--trace-out", pca.trace_out, "trajectory CSV path");
  cmd_pca->add_option("--out-prefix", pca.out_prefix, "prefix for recovered U/sigma/V CSVs");
  cmd_pca->add_option("--config", pca_config, "JSON config; explicit flags take precedence");

  sympca::cli::LandscapeOptions land;
  auto* cmd_land = app.add_subcommand("landscape",
                                      "Enumerate and classify every stationary point (n <= 12)");
  cmd_land->add_option("--input", land.input, "data matrix CSV")->required();
  cmd_land->add_option("--p", land.p, "target dimension")->required();
  cmd_land->add_option("--objective", land.objective, "objective (default det)");
  cmd_land->add_option("--report-out", land.report_out, "JSON report path (default stdout)");

  sympca::cli::RecoverOptions rec;
  auto* cmd_rec = app.add_subcommand("recover", "Recover leading singular triplets from a maximiser");
  cmd_rec->add_option("--input", rec.input, "data matrix CSV")->required();
  cmd_rec->add_option("--x", rec.x_input, "loading matrix CSV (any basis of the subspace)")
      ->required();
  cmd_rec->add_option("--out-prefix", rec.out_prefix, "prefix for U/sigma/V CSVs")->required();

  sympca::cli::SparseOptions sp;
  std::string sparse_config;
  auto* cmd_sp = app.add_subcommand(
      "sparse", "EXPERIMENTAL sparse-PCA heuristic (no optimality guarantee)");
  cmd_sp->add_option("--input", sp.input, "data matrix CSV")->required();
  cmd_sp->add_option("--p", sp.p, "target dimension");
  cmd_sp->add_option("--k", sp.k, "sparsity budget (total nonzeros)");
  cmd_sp->add_option("--step", sp.step, "fixed step size (default 1)");
  cmd_sp->add_option("--iters", sp.iters, "iteration budget (default 1000)");
  cmd_sp->add_option("--stop-tol", sp.stop_tol, "gradient-norm stop tolerance");
  cmd_sp->add_option("--seed", sp.seed, "init seed (default 0)");
  cmd_sp->add_option("--trace-out", sp.trace_out, "trajectory CSV path (includes nnz column)");
  cmd_sp->add_option("--out", sp.out, "final loading matrix CSV");
  cmd_sp->add_option("--config", sparse_config, "JSON config; explicit flags take precedence");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (cmd_gen->parsed()) {
      return sympca::cli::run_gen(gen);
    }
    if (cmd_pca->parsed()) {
      const nlohmann::json cfg = load_config(pca_config);
      merge(*cmd_pca, "--p", cfg, "p", pca.p);
      merge(*cmd_pca, "--objective", cfg, "objective", pca.objective);
      merge(*cmd_pca, "--step", cfg, "step", pca.step);
      merge(*cmd_pca, "--iters", cfg, "iters", pca.iters);
      merge(*cmd_pca, "--stop-tol", cfg, "stop_tol", pca.stop_tol);
      merge(*cmd_pca, "--seed", cfg, "seed", pca.seed);
      merge(*cmd_pca, "--stiefel", cfg, "stiefel", pca.stiefel);
      merge(*cmd_pca, "--backtracking", cfg, "backtracking", pca.backtracking);
      if (pca.p == 0) {
        throw UsageError("pca: --p is required (flag or config)");
      }
      if (!pca_seeds.empty()) {
        pca.seeds = parse_seed_range(pca_seeds);
      }
      return sympca::cli::run_pca(pca);
    }
    if (cmd_land->parsed()) {
      return sympca::cli::run_landscape(land);
    }
    if (cmd_rec->parsed()) {
      return sympca::cli::run_recover(rec);
    }
    if (cmd_sp->parsed()) {
      const nlohmann::json cfg = load_config(sparse_config);
      merge(*cmd_sp, "--p", cfg, "p", sp.p);
      merge(*cmd_sp, "--k", cfg, "k", sp.k);
      merge(*cmd_sp, "--step", cfg, "step", sp.step);
      merge(*cmd_sp, "--iters", cfg, "iters", sp.iters);
      merge(*cmd_sp, "--stop-tol", cfg, "stop_tol", sp.stop_tol);
      merge(*cmd_sp, "--seed", cfg, "seed", sp.seed);
      if (sp.p == 0 || sp.k == 0) {
        throw UsageError("sparse: --p and --k are required (flag or config)");
      }
      return sympca::cli::run_sparse(sp);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const sympca::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
