#pragma once

#include <vector>

#include "sympca/matrix.hpp"

namespace sympca {

/// Default tolerances for the dense kernels. All overridable per call.
namespace tol {
inline constexpr double symmetry = 1e-12;      // relative asymmetry allowed in sym_eig input
inline constexpr double rank = 1e-12;          // relative rank-deficiency threshold
inline constexpr double orthonormal = 1e-10;   // allowed deviation of Q*Q from I for inputs
} // namespace tol

/// Eigen-decomposition of a symmetric matrix: Z = W diag(lambda) W^T with
/// eigenvalues sorted in descending order and orthonormal eigenvectors.
struct SymEig {
  std::vector<double> eigenvalues;
  Matrix eigenvectors;
};

/// Thin SVD: A = U diag(sigma) V^T, sigma descending and nonnegative,
/// U (m x k), V (n x k) with orthonormal columns, k = min(m, n).
struct SvdFactors {
  Matrix u;
  std::vector<double> sigma;
  Matrix v;
};

struct QrFactors {
  Matrix q; // n x p, orthonormal columns
  Matrix r; // p x p, upper triangular, R_ii >= 0
};

/// Cyclic Jacobi eigensolver with a fixed sweep order, so results are
/// deterministic. Ties in the eigenvalue sort are broken by original index.
SymEig sym_eig(const Matrix& z, double symmetry_tol = tol::symmetry);

/// One-sided Jacobi SVD applied to A itself (not A^T A), for accuracy on
/// small singular values. Deterministic pair order.
SvdFactors svd(const Matrix& a);

/// Modified Gram-Schmidt with a second orthogonalization pass. Requires
/// n >= p and numerically full-rank X; throws RankDeficient otherwise.
QrFactors thin_qr(const Matrix& x, double rank_tol = tol::rank);

/// Spectral norm of the projector difference Q_X Q_X^T - V_p V_p^T where
/// Q_X is an orthonormal basis of range(X): the sine of the largest
/// principal angle between range(X) and range(V_p). The singular values of
/// the projector difference are exactly the principal-angle sines, so the
/// value is obtained from the smallest singular value of the p x p matrix
/// Q_X^T V_p; tests cross-check against the explicit n x n difference.
double subspace_error(const Matrix& x, const Matrix& vp);

/// Grow a matrix with orthonormal columns to a full orthonormal basis of
/// R^n by Gram-Schmidt against canonical vectors. Deterministic.
Matrix complete_orthonormal(const Matrix& partial, std::size_t n);

/// Symmetric inverse through the eigen-decomposition. Throws DomainError if
/// the smallest eigenvalue magnitude is below 1e-14 times the largest.
Matrix sym_inverse(const Matrix& z);

bool is_orthonormal(const Matrix& q, double tolerance = tol::orthonormal);

} // namespace sympca
