#include "sympca/optimizer.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "sympca/csv.hpp"
#include "sympca/rng.hpp"

namespace sympca {

bool Trajectory::has_nnz() const {
  for (const auto& pt : points) {
    if (pt.nnz >= 0) {
      return true;
    }
  }
  return false;
}

double Trajectory::final_error() const {
  return points.empty() ? std::numeric_limits<double>::quiet_NaN()
                        : points.back().subspace_error;
}

double Trajectory::final_objective() const {
  return points.empty() ? std::numeric_limits<double>::quiet_NaN()
                        : points.back().objective;
}

void write_trajectory_csv(const std::string& path, const Trajectory& t) {
  std::ofstream out(path);
  if (!out) {
    throw Error("cannot open for writing: " + path);
  }
  const bool nnz = t.has_nnz();
  out << "iter,objective,subspace_error,grad_norm";
  if (nnz) {
    out << ",nnz";
  }
  out << '\n';
  for (const auto& pt : t.points) {
    out << pt.iter << ',' << format_double(pt.objective) << ','
        << format_double(pt.subspace_error) << ',' << format_double(pt.grad_norm);
    if (nnz) {
      out << ',' << pt.nnz;
    }
    out << '\n';
  }
  if (!out) {
    throw Error("write failed: " + path);
  }
}

Matrix random_init(std::size_t n, std::size_t p, std::uint64_t seed, AscentMode mode) {
  if (n < p) {
    throw ContractViolation("random_init: requires n >= p");
  }
  Rng rng(seed);
  for (int attempt = 0; attempt < 16; ++attempt) {
    Matrix x = rng.gaussian(n, p);
    try {
      QrFactors qr = thin_qr(x);
      return mode == AscentMode::Stiefel ? std::move(qr.q) : std::move(x);
    } catch (const RankDeficient&) {
      continue;
    }
  }
  throw Error("random_init: repeated rank-deficient draws");
}

namespace {

// Shared fixed-step loop; `value` and `gradient` close over the frame
// (diagonal Gamma or dense Gram matrix).
template <typename Value, typename Gradient>
AscentResult ascend_loop(Value&& value, Gradient&& gradient, const Matrix& x0,
                         const AscentConfig& cfg, const Matrix* oracle_vp) {
  if (cfg.step <= 0.0 || cfg.max_iters < 1) {
    throw ContractViolation("AscentConfig: step must be positive, max_iters >= 1");
  }
  if (cfg.mode == AscentMode::Stiefel && !is_orthonormal(x0)) {
    throw ContractViolation("ascend: Stiefel mode requires an orthonormal x0");
  }

  Matrix x = x0;
  Trajectory traj;
  traj.points.reserve(cfg.max_iters + 1);
  bool converged = false;

  for (std::size_t iter = 0;; ++iter) {
    double f = 0.0;
    Matrix g;
    try {
      f = value(x);
      g = gradient(x);
    } catch (const DomainError& e) {
      throw AscentDomainError(std::string(e.what()) + " at iteration " + std::to_string(iter),
                              std::move(traj), iter);
    } catch (const RankDeficient& e) {
      throw AscentDomainError(std::string(e.what()) + " at iteration " + std::to_string(iter),
                              std::move(traj), iter);
    }
    if (!std::isfinite(f) || !g.all_finite()) {
      throw Diverged("objective or gradient became non-finite at iteration " +
                         std::to_string(iter),
                     std::move(traj), iter);
    }
    const double gn = frobenius_norm(g);

    TrajectoryPoint pt;
    pt.iter = iter;
    pt.objective = f;
    pt.grad_norm = gn;
    if (oracle_vp != nullptr) {
      pt.subspace_error = subspace_error(x, *oracle_vp);
    }
    traj.points.push_back(pt);

    if (gn < cfg.stop_tol * (1.0 + std::abs(f))) {
      converged = true;
      break;
    }
    if (iter == cfg.max_iters) {
      break;
    }

    double rho = cfg.step;
    Matrix next = cfg.mode == AscentMode::Stiefel ? thin_qr(x + rho * g).q : x + rho * g;
    if (cfg.backtracking) {
      for (int halvings = 0; halvings < 30; ++halvings) {
        bool ok = false;
        try {
          ok = value(next) >= f;
        } catch (const Error&) {
          ok = false;
        }
        if (ok) {
          break;
        }
        rho *= 0.5;
        next = cfg.mode == AscentMode::Stiefel ? thin_qr(x + rho * g).q : x + rho * g;
      }
    }
    x = std::move(next);
  }

  return AscentResult{std::move(x), std::move(traj), converged};
}

} // namespace

AscentResult ascend(const ObjectiveKind& kind, const Gamma& gamma, const Matrix& x0,
                    const AscentConfig& cfg, const Matrix* oracle_vp) {
  kind.validate(x0.cols());
  if (cfg.mode == AscentMode::Unconstrained && kind.stiefel_constrained()) {
    throw ContractViolation("ascend: " + kind.name() +
                            " is a Stiefel program; use Stiefel mode");
  }

  const ObjectiveKind logdet = ObjectiveKind::logdet();
  auto value = [&](const Matrix& x) { return eval_f(kind, gamma, x); };
  auto gradient = [&](const Matrix& x) {
    if (cfg.mode == AscentMode::Unconstrained) {
      // The unconstrained programs (Det and LogDet) share the log-determinant
      // ascent direction, which is scale-free and numerically stable.
      return euclidean_grad(logdet, gamma, x);
    }
    return riemannian_grad(kind, gamma, x);
  };
  return ascend_loop(value, gradient, x0, cfg, oracle_vp);
}

double dense_logdet_value(const Matrix& c, const Matrix& x) {
  const Matrix xtcx = transpose_times(x, c * x);
  const Matrix xtx = transpose_times(x, x);
  const SymEig eg = sym_eig(xtcx);
  const SymEig ex = sym_eig(xtx);
  if (ex.eigenvalues.back() < tol::rank * std::max(1e-300, ex.eigenvalues.front())) {
    throw RankDeficient("dense_logdet_value: X is numerically rank deficient");
  }
  double s = 0.0;
  for (double v : eg.eigenvalues) {
    if (v <= 0.0 || v < 1e-14 * eg.eigenvalues.front()) {
      throw DomainError("dense_logdet_value: near-singular X^T C X");
    }
    s += std::log(v);
  }
  for (double v : ex.eigenvalues) {
    s -= std::log(v);
  }
  return s;
}

Matrix dense_logdet_grad(const Matrix& c, const Matrix& x) {
  const Matrix cx = c * x;
  const Matrix xtcx = transpose_times(x, cx);
  const Matrix xtx = transpose_times(x, x);
  Matrix out = cx * sym_inverse(xtcx);
  out -= x * sym_inverse(xtx);
  out *= 2.0;
  return out;
}

AscentResult ascend_dense(const ObjectiveKind& kind, const Matrix& a, const Matrix& x0,
                          const AscentConfig& cfg, const Matrix* oracle_vp) {
  if (kind.tag() != ObjectiveTag::Det && kind.tag() != ObjectiveTag::LogDet) {
    throw ContractViolation("ascend_dense: only the unconstrained kinds are supported");
  }
  if (cfg.mode != AscentMode::Unconstrained) {
    throw ContractViolation("ascend_dense: only Unconstrained mode is supported");
  }
  const Matrix c = transpose_times(a, a);
  auto value = [&](const Matrix& x) {
    const double v = dense_logdet_value(c, x);
    return kind.tag() == ObjectiveTag::Det ? std::exp(v) : v;
  };
  auto gradient = [&](const Matrix& x) { return dense_logdet_grad(c, x); };
  return ascend_loop(value, gradient, x0, cfg, oracle_vp);
}

} // namespace sympca
