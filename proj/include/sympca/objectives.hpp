#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sympca/linalg.hpp"
#include "sympca/matrix.hpp"
#include "sympca/sympoly.hpp"

namespace sympca {

/// Squared singular values of the data matrix, descending, padded with
/// zeros to length n. After the change of variables Y = V^T X every
/// objective depends on the data only through this vector.
class Gamma {
public:
  explicit Gamma(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  /// Number of positive entries.
  std::size_t rank() const noexcept { return rank_; }

private:
  std::vector<double> values_;
  std::size_t rank_ = 0;
};

/// Which spectral inflation ratio to maximize.
enum class ObjectiveTag { Trace, Det, LogDet, ElemSym, Conic };

class ObjectiveKind {
public:
  static ObjectiveKind trace() { return ObjectiveKind(ObjectiveTag::Trace); }
  static ObjectiveKind det() { return ObjectiveKind(ObjectiveTag::Det); }
  static ObjectiveKind logdet() { return ObjectiveKind(ObjectiveTag::LogDet); }
  static ObjectiveKind elem_sym(std::size_t q);
  static ObjectiveKind conic(Weights w);

  ObjectiveTag tag() const noexcept { return tag_; }
  std::size_t q() const noexcept { return q_; }
  const Weights& weights() const noexcept { return weights_; }
  std::string name() const;

  /// The Stiefel-constrained members of the family (everything but Det and
  /// LogDet, whose programs are effectively unconstrained).
  bool stiefel_constrained() const noexcept {
    return tag_ != ObjectiveTag::Det && tag_ != ObjectiveTag::LogDet;
  }

  /// Throws unless the kind is usable with p columns (q <= p, weight length).
  void validate(std::size_t p) const;

  /// The symmetric function psi with phi(Z) = psi(eigenvalues of Z). For
  /// LogDet these evaluate the underlying determinant e_p; the logarithm is
  /// applied by the callers that need it.
  double psi(std::span<const double> lambda) const;
  std::vector<double> psi_grad(std::span<const double> lambda) const;
  /// psi(1_p) and the first partial derivative of psi at 1_p.
  double psi_one(std::size_t p) const;
  double dpsi_one(std::size_t p) const;

private:
  explicit ObjectiveKind(ObjectiveTag tag) : tag_(tag) {}

  ObjectiveTag tag_;
  std::size_t q_ = 0;
  Weights weights_;
};

/// Diagonalised form of a data matrix: gamma = squared singular values and
/// the full right factor V with f(A, X) = f(diag form, V^T X).
struct Reduced {
  Gamma gamma;
  Matrix v; // n x n orthonormal
};

Reduced reduce_to_diagonal(const Matrix& a);

/// Evaluation point with the cached Gram pair (X^T Gamma X, X^T X) and
/// their eigendecompositions. Immutable after construction.
class EvalPoint {
public:
  EvalPoint(const Gamma& gamma, Matrix x);

  const Matrix& x() const noexcept { return x_; }
  std::size_t n() const noexcept { return x_.rows(); }
  std::size_t p() const noexcept { return x_.cols(); }
  const Matrix& xtx() const noexcept { return xtx_; }
  const Matrix& xtgx() const noexcept { return xtgx_; }
  const SymEig& xtx_eig() const noexcept { return xtx_eig_; }
  const SymEig& xtgx_eig() const noexcept { return xtgx_eig_; }

private:
  Matrix x_;
  Matrix xtx_;
  Matrix xtgx_;
  SymEig xtx_eig_;
  SymEig xtgx_eig_;
};

/// Objective value psi(eig(X^T Gamma X)) / psi(eig(X^T X)); log of the
/// determinant ratio for LogDet.
double eval_f(const ObjectiveKind& kind, const Gamma& gamma, const EvalPoint& point);
double eval_f(const ObjectiveKind& kind, const Gamma& gamma, const Matrix& x);

/// Gradient of a spectral function phi at symmetric Z from the gradient of
/// its symmetric function: W diag(psi_grad(lambda)) W^T.
Matrix grad_spectral(
    const std::function<std::vector<double>(std::span<const double>)>& psi_grad,
    const Matrix& z);

/// Euclidean gradient of eval_f at X (any full-rank X, not only Stiefel).
Matrix euclidean_grad(const ObjectiveKind& kind, const Gamma& gamma, const EvalPoint& point);
Matrix euclidean_grad(const ObjectiveKind& kind, const Gamma& gamma, const Matrix& x);

/// Tangent projection of the Euclidean gradient onto the Stiefel manifold:
/// G - X sym(X^T G). Requires X^T X = I to 1e-10.
Matrix riemannian_grad(const ObjectiveKind& kind, const Gamma& gamma, const Matrix& x);

/// Symmetric Lagrange multiplier -1/2 X_s^T grad f at a stationary Stiefel
/// point of a Stiefel-constrained kind. Throws NotStationary otherwise.
Matrix lagrange_multiplier(const ObjectiveKind& kind, const Gamma& gamma, const Matrix& xs,
                           double stationarity_tol = 1e-8);

} // namespace sympca
