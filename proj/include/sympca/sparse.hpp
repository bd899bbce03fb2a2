#pragma once

#include "sympca/matrix.hpp"
#include "sympca/optimizer.hpp"

namespace sympca {

/// Configuration for the sparse heuristic. `k` counts nonzero entries over
/// the whole matrix; any full-rank n x p iterate needs at least p of them.
struct SparseConfig {
  AscentConfig base;
  std::size_t k = 0;
};

/// Keep the k largest-magnitude entries, zero the rest. Ties are broken by
/// row-major index (earlier entries win), which makes the map idempotent.
Matrix hard_threshold(const Matrix& x, std::size_t k);

struct SparseResult {
  Matrix x;             // best-objective feasible iterate
  Trajectory trajectory; // includes an nnz column
};

/// Projected gradient heuristic for sparse PCA: ascend log f_det on the
/// original coordinates of A and hard-threshold each step. If thresholding
/// breaks full rank, the zeroed entries are perturbed at 1e-8 scale and the
/// projection retried a bounded number of times. Every accepted iterate is
/// feasible; no global-optimality claim is made (the landscape of the
/// sparse program is an open question).
SparseResult sparse_ascend(const Matrix& a, const Matrix& x0, const SparseConfig& cfg);

} // namespace sympca
