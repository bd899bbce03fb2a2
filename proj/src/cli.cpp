#include "sympca/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <thread>

#include "sympca/csv.hpp"
#include "sympca/gen.hpp"
#include "sympca/landscape.hpp"
#include "sympca/optimizer.hpp"
#include "sympca/postprocess.hpp"
#include "sympca/sparse.hpp"

namespace sympca::cli {

namespace {

constexpr std::size_t kLandscapeMaxN = 12;

std::vector<double> parse_number_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string tok =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) {
        throw std::invalid_argument(tok);
      }
    } catch (const std::exception&) {
      throw UsageError("bad number '" + tok + "' in " + what);
    }
    if (comma == std::string::npos) {
      break;
    }
    start = comma + 1;
  }
  return out;
}

Matrix read_input_matrix(const std::string& path) {
  try {
    return read_matrix_csv(path);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

// "traj.csv" + "_seed3" -> "traj_seed3.csv"; extension-free paths get the
// tag appended.
std::string tagged_path(const std::string& path, const std::string& tag) {
  if (tag.empty()) {
    return path;
  }
  const std::size_t dot = path.rfind('.');
  const std::size_t slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return path + tag;
  }
  return path.substr(0, dot) + tag + path.substr(dot);
}

void write_triplets(const std::string& prefix, const RecoveredTriplets& t) {
  write_matrix_csv(prefix + "_U.csv", t.u);
  Matrix s(t.sigma.size(), 1);
  for (std::size_t i = 0; i < t.sigma.size(); ++i) {
    s(i, 0) = t.sigma[i];
  }
  write_matrix_csv(prefix + "_sigma.csv", s);
  write_matrix_csv(prefix + "_V.csv", t.v);
}

} // namespace

std::vector<double> parse_spectrum_spec(const std::string& spec, std::size_t n) {
  const std::size_t colon = spec.find(':');
  if (colon == std::string::npos) {
    throw UsageError("spectrum spec must look like powerlaw:a, list:path or uniform:a,b");
  }
  const std::string head = spec.substr(0, colon);
  const std::string tail = spec.substr(colon + 1);
  std::vector<double> sigma;
  if (head == "powerlaw") {
    const auto v = parse_number_list(tail, "powerlaw spec");
    if (v.size() != 1) {
      throw UsageError("powerlaw spec takes one exponent");
    }
    sigma = powerlaw_spectrum(n, v[0]);
  } else if (head == "uniform") {
    const auto v = parse_number_list(tail, "uniform spec");
    if (v.size() != 2) {
      throw UsageError("uniform spec takes two endpoints: uniform:a,b");
    }
    sigma = linspace_spectrum(n, v[0], v[1]);
  } else if (head == "list") {
    Matrix m = read_input_matrix(tail);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j) {
        sigma.push_back(m(i, j));
      }
    }
    std::sort(sigma.begin(), sigma.end(), std::greater<>());
    if (sigma.size() != n) {
      throw UsageError("list spectrum has " + std::to_string(sigma.size()) +
                       " values, expected " + std::to_string(n));
    }
  } else {
    throw UsageError("unknown spectrum kind '" + head + "'");
  }
  for (double s : sigma) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
      throw UsageError("spectrum values must be finite and nonnegative");
    }
  }
  return sigma;
}

ObjectiveKind parse_objective(const std::string& text) {
  if (text == "trace") {
    return ObjectiveKind::trace();
  }
  if (text == "det") {
    return ObjectiveKind::det();
  }
  if (text == "logdet") {
    return ObjectiveKind::logdet();
  }
  if (text.rfind("sq:", 0) == 0) {
    const auto v = parse_number_list(text.substr(3), "sq objective");
    if (v.size() != 1 || v[0] < 1.0 || v[0] != std::floor(v[0])) {
      throw UsageError("sq objective takes one positive integer, e.g. sq:2");
    }
    return ObjectiveKind::elem_sym(static_cast<std::size_t>(v[0]));
  }
  if (text.rfind("conic:", 0) == 0) {
    Weights w{parse_number_list(text.substr(6), "conic weights")};
    return ObjectiveKind::conic(std::move(w));
  }
  throw UsageError("unknown objective '" + text +
                   "' (expected trace, det, logdet, sq:<q> or conic:<w0,w1,...>)");
}

int run_gen(const GenOptions& opt) {
  if (opt.n < 1) {
    throw UsageError("gen: --n must be at least 1");
  }
  if (opt.out.empty()) {
    throw UsageError("gen: --out is required");
  }
  const auto sigma = parse_spectrum_spec(opt.spectrum, opt.n);
  std::vector<double> sorted = sigma;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const Matrix a = synthesize_with_spectrum(sorted, opt.seed);
  write_matrix_csv(opt.out, a);
  std::cout << "wrote " << opt.n << "x" << opt.n << " matrix to " << opt.out << "\n";
  return 0;
}

namespace {

struct SeedRun {
  std::uint64_t seed = 0;
  Trajectory trajectory;
  Matrix x;               // final iterate in the diagonal frame
  bool numeric_failure = false;
  std::string message;
};

SeedRun run_one_seed(const ObjectiveKind& kind, const Gamma& gamma, std::size_t p,
                     const AscentConfig& cfg, const Matrix& oracle) {
  SeedRun out;
  out.seed = cfg.seed;
  const Matrix x0 = random_init(gamma.size(), p, cfg.seed, cfg.mode);
  try {
    AscentResult res = ascend(kind, gamma, x0, cfg, &oracle);
    out.trajectory = std::move(res.trajectory);
    out.x = std::move(res.x);
  } catch (const Diverged& e) {
    out.numeric_failure = true;
    out.message = e.what();
    out.trajectory = e.trajectory;
  } catch (const AscentDomainError& e) {
    out.numeric_failure = true;
    out.message = e.what();
    out.trajectory = e.trajectory;
  }
  return out;
}

} // namespace

int run_pca(const PcaOptions& opt) {
  const Matrix a = read_input_matrix(opt.input);
  const std::size_t n = a.cols();
  if (opt.p < 1 || opt.p > n || opt.p > a.rows()) {
    throw UsageError("pca: need 1 <= p <= min(rows, cols) of the input");
  }
  const ObjectiveKind kind = parse_objective(opt.objective);
  try {
    kind.validate(opt.p);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }

  AscentConfig cfg;
  cfg.step = opt.step;
  cfg.max_iters = opt.iters;
  cfg.stop_tol = opt.stop_tol;
  cfg.backtracking = opt.backtracking;
  cfg.mode = (kind.stiefel_constrained() || opt.stiefel) ? AscentMode::Stiefel
                                                         : AscentMode::Unconstrained;

  const Reduced red = reduce_to_diagonal(a);
  if (red.gamma.rank() < opt.p) {
    std::cerr << "pca: input has fewer than p positive singular values\n";
    return 2;
  }
  std::vector<std::size_t> lead(opt.p);
  for (std::size_t j = 0; j < opt.p; ++j) {
    lead[j] = j;
  }
  const Matrix oracle = Matrix::canonical_columns(n, lead);

  std::vector<std::uint64_t> seeds = opt.seeds.empty()
                                         ? std::vector<std::uint64_t>{opt.seed}
                                         : opt.seeds;
  std::vector<SeedRun> runs(seeds.size());
  {
    // Independent seeds fan out to independent workers.
    std::vector<std::thread> workers;
    workers.reserve(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      workers.emplace_back([&, i] {
        AscentConfig c = cfg;
        c.seed = seeds[i];
        runs[i] = run_one_seed(kind, red.gamma, opt.p, c, oracle);
      });
    }
    for (auto& w : workers) {
      w.join();
    }
  }

  const bool multi = seeds.size() > 1;
  bool failed = false;
  for (const auto& run : runs) {
    const std::string tag = multi ? "_seed" + std::to_string(run.seed) : "";
    if (!opt.trace_out.empty()) {
      write_trajectory_csv(tagged_path(opt.trace_out, tag), run.trajectory);
    }
    if (run.numeric_failure) {
      std::cerr << "seed " << run.seed << ": " << run.message << "\n";
      failed = true;
      continue;
    }
    if (!opt.out_prefix.empty()) {
      // Map the diagonal-frame iterate back to the data coordinates.
      const Matrix x_data = red.v * run.x;
      write_triplets(tagged_path(opt.out_prefix, tag), recover_svd(a, x_data));
    }
    std::cout << "seed " << run.seed
              << ": final subspace_error = " << format_double(run.trajectory.final_error())
              << " after " << run.trajectory.points.back().iter << " iterations\n";
  }
  return failed ? 2 : 0;
}

int run_landscape(const LandscapeOptions& opt) {
  const Matrix a = read_input_matrix(opt.input);
  const std::size_t n = a.cols();
  if (n > kLandscapeMaxN) {
    throw UsageError("landscape: n = " + std::to_string(n) + " exceeds the exhaustive limit " +
                     std::to_string(kLandscapeMaxN) +
                     "; enumeration is combinatorial, use a smaller instance");
  }
  if (opt.p < 1 || opt.p > n) {
    throw UsageError("landscape: need 1 <= p <= n");
  }
  const ObjectiveKind kind = parse_objective(opt.objective);
  try {
    kind.validate(opt.p);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const Reduced red = reduce_to_diagonal(a);
  const std::string json = landscape_report_json(kind, red.gamma, opt.p);
  if (opt.report_out.empty()) {
    std::cout << json << "\n";
  } else {
    std::ofstream out(opt.report_out);
    if (!out) {
      throw Error("cannot open for writing: " + opt.report_out);
    }
    out << json << "\n";
    std::cout << "wrote landscape report to " << opt.report_out << "\n";
  }
  return 0;
}

int run_recover(const RecoverOptions& opt) {
  const Matrix a = read_input_matrix(opt.input);
  const Matrix x = read_input_matrix(opt.x_input);
  if (opt.out_prefix.empty()) {
    throw UsageError("recover: --out-prefix is required");
  }
  const RecoveredTriplets t = recover_svd(a, x);
  write_triplets(opt.out_prefix, t);
  std::cout << "sigma:";
  for (double s : t.sigma) {
    std::cout << ' ' << format_double(s);
  }
  std::cout << "\n";
  return 0;
}

int run_sparse(const SparseOptions& opt) {
  const Matrix a = read_input_matrix(opt.input);
  const std::size_t n = a.cols();
  if (opt.p < 1 || opt.p > n || opt.p > a.rows()) {
    throw UsageError("sparse: need 1 <= p <= min(rows, cols) of the input");
  }
  if (opt.k < opt.p || opt.k > n * opt.p) {
    throw UsageError("sparse: need p <= k <= n*p");
  }
  SparseConfig cfg;
  cfg.base.step = opt.step;
  cfg.base.max_iters = opt.iters;
  cfg.base.stop_tol = opt.stop_tol;
  cfg.base.seed = opt.seed;
  cfg.k = opt.k;

  const Matrix x0 = random_init(n, opt.p, opt.seed);
  SparseResult res;
  try {
    res = sparse_ascend(a, x0, cfg);
  } catch (const Diverged& e) {
    if (!opt.trace_out.empty()) {
      write_trajectory_csv(opt.trace_out, e.trajectory);
    }
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const AscentDomainError& e) {
    if (!opt.trace_out.empty()) {
      write_trajectory_csv(opt.trace_out, e.trajectory);
    }
    std::cerr << e.what() << "\n";
    return 2;
  }
  if (!opt.trace_out.empty()) {
    write_trajectory_csv(opt.trace_out, res.trajectory);
  }
  if (!opt.out.empty()) {
    write_matrix_csv(opt.out, res.x);
  }
  std::size_t nnz = 0;
  for (double v : res.x.data()) {
    if (v != 0.0) {
      ++nnz;
    }
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& pt : res.trajectory.points) {
    best = std::max(best, pt.objective);
  }
  std::cout << "best objective " << format_double(best) << ", nnz " << nnz << "\n";
  return 0;
}

} // namespace sympca::cli
