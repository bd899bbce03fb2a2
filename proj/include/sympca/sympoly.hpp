#pragma once

#include <span>
#include <vector>

#include "sympca/matrix.hpp"

namespace sympca {

/// Elementary symmetric polynomials e_q over real vectors, their gradients,
/// and conic combinations. e_q is evaluated with the coefficient recurrence
/// for prod_i (1 + t*lambda_i), which stays stable for mixed-sign inputs;
/// subset enumeration exists only as a test oracle.

/// Coefficients e_0, ..., e_qmax of prod_i (1 + t*lambda_i). O(p*qmax).
std::vector<double> elem_sym_all(std::span<const double> lambda, std::size_t qmax);

/// e_q(lambda); e_0 = 1 by convention. Requires 0 <= q <= p.
double elem_sym(std::span<const double> lambda, std::size_t q);

/// Gradient of e_q: component i is e_{q-1} of lambda with entry i removed.
/// Computed by p leave-one-out recurrences. Requires 1 <= q <= p.
std::vector<double> grad_elem_sym(std::span<const double> lambda, std::size_t q);

/// Nonnegative weights w_0..w_p for conic combinations g_w = sum_q w_q e_q.
/// At least one weight must be positive.
struct Weights {
  std::vector<double> w;

  /// Throws ContractViolation unless the weights are valid for vectors of
  /// length p (size p+1, nonnegative, not all zero).
  void validate(std::size_t p) const;
};

double conic_eval(std::span<const double> lambda, const Weights& w);
std::vector<double> conic_grad(std::span<const double> lambda, const Weights& w);

/// Characteristic-polynomial coefficients of a symmetric Z: the length-(p+1)
/// vector c with det(I + tZ) = sum_q c_q t^q, i.e. c_q = e_q(eigenvalues).
std::vector<double> char_poly_coeffs(const Matrix& z);

/// Binomial coefficient as a double; exact at desk scale.
double binomial(std::size_t n, std::size_t k);

} // namespace sympca
