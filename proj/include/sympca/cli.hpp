#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sympca/errors.hpp"
#include "sympca/objectives.hpp"

namespace sympca::cli {

/// Raised for malformed flags / specs; the driver maps it to exit code 1.
/// Numeric failures (DomainError, Diverged, ...) map to exit code 2.
class UsageError : public Error {
public:
  using Error::Error;
};

/// Parse "powerlaw:a", "list:path" or "uniform:a,b" into a descending
/// spectrum of length n.
std::vector<double> parse_spectrum_spec(const std::string& spec, std::size_t n);

/// Parse "trace", "det", "logdet", "sq:<q>" or "conic:<w0,w1,...>".
ObjectiveKind parse_objective(const std::string& text);

struct GenOptions {
  std::size_t n = 0;
  std::string spectrum;
  std::uint64_t seed = 0;
  std::string out;
};

struct PcaOptions {
  std::string input;
  std::size_t p = 0;
  std::string objective = "logdet";
  double step = 5.0;
  std::size_t iters = 5000;
  double stop_tol = 1e-9;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> seeds; // optional sweep; overrides `seed`
  bool stiefel = false;             // force Stiefel mode for det/logdet
  bool backtracking = false;
  std::string trace_out;  // trajectory CSV path (empty: do not write)
  std::string out_prefix; // recovered triplets prefix (empty: do not write)
};

struct LandscapeOptions {
  std::string input;
  std::size_t p = 0;
  std::string objective = "det";
  std::string report_out;
};

struct RecoverOptions {
  std::string input;
  std::string x_input;
  std::string out_prefix;
};

struct SparseOptions {
  std::string input;
  std::size_t p = 0;
  std::size_t k = 0;
  double step = 1.0;
  std::size_t iters = 1000;
  double stop_tol = 1e-9;
  std::uint64_t seed = 0;
  std::string trace_out;
  std::string out; // final loading matrix CSV
};

int run_gen(const GenOptions& opt);
int run_pca(const PcaOptions& opt);
int run_landscape(const LandscapeOptions& opt);
int run_recover(const RecoverOptions& opt);
int run_sparse(const SparseOptions& opt);

} // namespace sympca::cli
