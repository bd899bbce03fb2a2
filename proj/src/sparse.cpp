#include "sympca/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sympca/errors.hpp"
#include "sympca/linalg.hpp"
#include "sympca/rng.hpp"

namespace sympca {

Matrix hard_threshold(const Matrix& x, std::size_t k) {
  if (k < 1) {
    throw ContractViolation("hard_threshold: k must be at least 1");
  }
  const auto data = x.data();
  if (k >= data.size()) {
    return x;
  }
  std::vector<std::size_t> idx(data.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  // Stable sort by magnitude: ties keep the lower row-major index.
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(data[a]) > std::abs(data[b]);
  });
  Matrix out(x.rows(), x.cols());
  auto out_data = out.data();
  for (std::size_t t = 0; t < k; ++t) {
    out_data[idx[t]] = data[idx[t]];
  }
  return out;
}

namespace {

std::size_t count_nonzeros(const Matrix& x) {
  std::size_t c = 0;
  for (double v : x.data()) {
    if (v != 0.0) {
      ++c;
    }
  }
  return c;
}

bool numerically_full_rank(const Matrix& x) {
  const SymEig eig = sym_eig(transpose_times(x, x));
  const double lead = eig.eigenvalues.front();
  return lead > 0.0 && eig.eigenvalues.back() >= tol::rank * lead;
}

// Threshold with a bounded rank rescue: when the projection loses rank, the
// zeroed entries are perturbed (starting at 1e-8 relative to the smallest
// kept magnitude, growing per retry so starved columns can re-enter the
// budget) and the projection is repeated with the same k.
Matrix project_feasible(const Matrix& y, std::size_t k, Rng& rng) {
  Matrix t = hard_threshold(y, k);
  if (numerically_full_rank(t)) {
    return t;
  }
  double kth = 0.0;
  {
    std::vector<double> mags;
    mags.reserve(y.data().size());
    for (double v : y.data()) {
      mags.push_back(std::abs(v));
    }
    std::nth_element(mags.begin(), mags.begin() + std::min(k - 1, mags.size() - 1), mags.end(),
                     std::greater<>());
    kth = mags[std::min(k - 1, mags.size() - 1)];
  }
  const double base = kth > 0.0 ? kth : std::max(1e-300, frobenius_norm(y));
  Matrix work = y;
  for (int attempt = 0; attempt < 16; ++attempt) {
    const double scale = std::min(1e-8 * std::pow(10.0, attempt), 2.0) * base;
    for (std::size_t i = 0; i < work.rows(); ++i) {
      for (std::size_t j = 0; j < work.cols(); ++j) {
        if (t(i, j) == 0.0) {
          work(i, j) += scale * rng.normal();
        }
      }
    }
    t = hard_threshold(work, k);
    if (numerically_full_rank(t)) {
      return t;
    }
  }
  throw RankDeficient("sparse_ascend: could not restore full rank after thresholding");
}

} // namespace

SparseResult sparse_ascend(const Matrix& a, const Matrix& x0, const SparseConfig& cfg) {
  const std::size_t n = a.cols();
  const std::size_t p = x0.cols();
  if (x0.rows() != n) {
    throw ContractViolation("sparse_ascend: x0 rows must match the data dimension");
  }
  if (cfg.k < p || cfg.k > n * p) {
    throw ContractViolation("sparse_ascend: need p <= k <= n*p");
  }
  if (cfg.base.step <= 0.0 || cfg.base.max_iters < 1) {
    throw ContractViolation("sparse_ascend: step must be positive, max_iters >= 1");
  }

  const Matrix c = transpose_times(a, a);
  Rng rescue_rng(cfg.base.seed ^ 0x9e3779b97f4a7c15ULL);

  // The dense x0 is used as-is; thresholding starts with the first update.
  // Starting sparse would orphan any support the initial projection misses
  // (the gradient through a discarded coordinate can vanish identically).
  Matrix x = x0;
  Trajectory traj;
  traj.points.reserve(cfg.base.max_iters + 1);

  Matrix best = x;
  double best_f = -std::numeric_limits<double>::infinity();
  bool have_best = false;

  for (std::size_t iter = 0;; ++iter) {
    double f = 0.0;
    Matrix g;
    try {
      f = dense_logdet_value(c, x);
      g = dense_logdet_grad(c, x);
    } catch (const DomainError& e) {
      throw AscentDomainError(std::string(e.what()) + " at iteration " + std::to_string(iter),
                              std::move(traj), iter);
    }
    if (!std::isfinite(f) || !g.all_finite()) {
      throw Diverged("objective or gradient became non-finite at iteration " +
                         std::to_string(iter),
                     std::move(traj), iter);
    }
    const double gn = frobenius_norm(g);
    // Only feasible iterates may be returned; x0 qualifies only when it
    // already fits the budget.
    if (f > best_f && count_nonzeros(x) <= cfg.k) {
      best_f = f;
      best = x;
      have_best = true;
    }

    TrajectoryPoint pt;
    pt.iter = iter;
    pt.objective = f;
    pt.grad_norm = gn;
    pt.nnz = static_cast<long>(count_nonzeros(x));
    traj.points.push_back(pt);

    if (gn < cfg.base.stop_tol * (1.0 + std::abs(f))) {
      break;
    }
    if (iter == cfg.base.max_iters) {
      break;
    }
    x = project_feasible(x + cfg.base.step * g, cfg.k, rescue_rng);
  }

  if (!have_best) {
    throw RankDeficient("sparse_ascend: no feasible iterate was produced");
  }
  return SparseResult{std::move(best), std::move(traj)};
}

} // namespace sympca
