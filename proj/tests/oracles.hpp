#pragma once

// Test-only oracles, kept independent of the implementation paths they
// check: subset enumeration for elementary symmetric polynomials, central
// finite differences for gradients and Hessians, LU determinants, and the
// explicit projector-difference subspace error.

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "sympca/linalg.hpp"
#include "sympca/matrix.hpp"
#include "sympca/objectives.hpp"
#include "sympca/rng.hpp"

namespace oracles {

/// e_q by explicit enumeration of all q-element subsets. Exponential; only
/// for p at desk scale.
inline double elem_sym_bruteforce(std::span<const double> lambda, std::size_t q) {
  const std::size_t p = lambda.size();
  if (q == 0) {
    return 1.0;
  }
  double total = 0.0;
  std::vector<std::size_t> pick(q);
  // Iterate over increasing index tuples i_1 < ... < i_q.
  std::function<void(std::size_t, std::size_t, double)> rec =
      [&](std::size_t start, std::size_t chosen, double prod) {
        if (chosen == q) {
          total += prod;
          return;
        }
        for (std::size_t i = start; i + (q - chosen) <= p; ++i) {
          rec(i + 1, chosen + 1, prod * lambda[i]);
        }
      };
  rec(0, 0, 1.0);
  return total;
}

/// Central finite-difference gradient of a scalar function of a matrix.
inline sympca::Matrix fd_gradient(const std::function<double(const sympca::Matrix&)>& f,
                                  const sympca::Matrix& x, double step) {
  sympca::Matrix g(x.rows(), x.cols());
  sympca::Matrix xp = x;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      const double h = step * std::max(1.0, std::abs(x(i, j)));
      xp(i, j) = x(i, j) + h;
      const double fp = f(xp);
      xp(i, j) = x(i, j) - h;
      const double fm = f(xp);
      xp(i, j) = x(i, j);
      g(i, j) = (fp - fm) / (2.0 * h);
    }
  }
  return g;
}

/// Plain second central difference of t -> f(x + t*d) at t = 0.
inline double fd_second_directional(const std::function<double(const sympca::Matrix&)>& f,
                                    const sympca::Matrix& x, const sympca::Matrix& d,
                                    double h) {
  const double f0 = f(x);
  sympca::Matrix xp = x;
  xp += h * d;
  const double fp = f(xp);
  sympca::Matrix xm = x;
  xm -= h * d;
  const double fm = f(xm);
  return (fp - 2.0 * f0 + fm) / (h * h);
}

/// Determinant by LU with partial pivoting; independent of the Jacobi
/// eigensolver path.
inline double lu_det(const sympca::Matrix& m) {
  const std::size_t n = m.rows();
  sympca::Matrix a = m;
  double det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) {
        piv = i;
      }
    }
    if (a(piv, k) == 0.0) {
      return 0.0;
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(k, j));
      }
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double factor = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) {
        a(i, j) -= factor * a(k, j);
      }
    }
  }
  return det;
}

/// Spectral norm of Q_X Q_X^T - V V^T computed literally from the n x n
/// projector difference.
inline double projector_difference_error(const sympca::Matrix& x, const sympca::Matrix& v) {
  const sympca::Matrix q = sympca::thin_qr(x).q;
  const sympca::Matrix diff =
      sympca::times_transpose(q, q) - sympca::times_transpose(v, v);
  const sympca::SvdFactors f = sympca::svd(diff);
  return f.sigma.front();
}

/// Random descending positive spectrum padded to length n.
inline std::vector<double> random_descending(std::size_t n, sympca::Rng& rng, double floor = 0.05) {
  std::vector<double> g(n);
  for (auto& v : g) {
    v = floor + rng.uniform();
  }
  std::sort(g.begin(), g.end(), std::greater<>());
  return g;
}

} // namespace oracles
