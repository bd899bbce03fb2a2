#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "sympca/errors.hpp"
#include "sympca/matrix.hpp"
#include "sympca/objectives.hpp"

namespace sympca {

enum class AscentMode { Unconstrained, Stiefel };

struct AscentConfig {
  double step = 5.0;               // fixed step size rho
  std::size_t max_iters = 5000;
  double stop_tol = 1e-9;          // stop when ||grad|| < stop_tol * (1 + |f|)
  std::uint64_t seed = 0;
  AscentMode mode = AscentMode::Unconstrained;
  bool backtracking = false;       // optional extension; off reproduces the fixed-step run
};

struct TrajectoryPoint {
  std::size_t iter = 0;
  double objective = 0.0;
  double subspace_error = std::numeric_limits<double>::quiet_NaN();
  double grad_norm = 0.0;
  long nnz = -1; // only populated by the sparse heuristic
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;

  bool has_nnz() const;
  double final_error() const;
  double final_objective() const;
};

/// Trajectory CSV with header iter,objective,subspace_error,grad_norm and an
/// extra nnz column when the trajectory carries sparsity counts.
void write_trajectory_csv(const std::string& path, const Trajectory& t);

struct AscentResult {
  Matrix x;
  Trajectory trajectory;
  bool converged = false; // gradient-norm criterion met before max_iters
};

/// Objective became non-finite; carries the trajectory up to that point.
class Diverged : public Error {
public:
  Diverged(std::string msg, Trajectory trajectory, std::size_t iter)
      : Error(std::move(msg)), trajectory(std::move(trajectory)), iter(iter) {}

  Trajectory trajectory;
  std::size_t iter = 0;
};

/// DomainError / RankDeficient raised mid-run, annotated with the iteration
/// index and carrying the partial trajectory.
class AscentDomainError : public DomainError {
public:
  AscentDomainError(std::string msg, Trajectory trajectory, std::size_t iter)
      : DomainError(std::move(msg)), trajectory(std::move(trajectory)), iter(iter) {}

  Trajectory trajectory;
  std::size_t iter = 0;
};

/// Standard-normal n x p init, redrawn on (probability ~0) rank deficiency;
/// orthonormalised when mode is Stiefel. Same seed, same matrix.
Matrix random_init(std::size_t n, std::size_t p, std::uint64_t seed,
                   AscentMode mode = AscentMode::Unconstrained);

/// Fixed-step gradient ascent in the diagonal frame.
///   Unconstrained: X <- X + rho * grad log f_det(X)   (Det/LogDet kinds)
///   Stiefel:       X <- qr_retract(X + rho * riemannian_grad(X))
/// Logs (iter, objective, subspace_error vs oracle, grad norm) per iterate.
AscentResult ascend(const ObjectiveKind& kind, const Gamma& gamma, const Matrix& x0,
                    const AscentConfig& cfg, const Matrix* oracle_vp = nullptr);

/// Same iteration, but against a dense data matrix A (objective built from
/// C = A^T A). Used where the original coordinates matter, e.g. sparsity.
AscentResult ascend_dense(const ObjectiveKind& kind, const Matrix& a, const Matrix& x0,
                          const AscentConfig& cfg, const Matrix* oracle_vp = nullptr);

/// Gradient of log f_det for a dense Gram matrix C = A^T A:
/// 2 C X (X^T C X)^{-1} - 2 X (X^T X)^{-1}.
Matrix dense_logdet_grad(const Matrix& c, const Matrix& x);

/// log f_det for a dense Gram matrix C.
double dense_logdet_value(const Matrix& c, const Matrix& x);

} // namespace sympca
