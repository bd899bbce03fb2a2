#include "sympca/sympoly.hpp"

#include <cmath>
#include <string>

#include "sympca/errors.hpp"
#include "sympca/linalg.hpp"

namespace sympca {

std::vector<double> elem_sym_all(std::span<const double> lambda, std::size_t qmax) {
  std::vector<double> c(qmax + 1, 0.0);
  c[0] = 1.0;
  std::size_t filled = 0; // highest degree with a nonzero-capable coefficient
  for (double li : lambda) {
    filled = std::min(filled + 1, qmax);
    for (std::size_t k = filled; k >= 1; --k) {
      c[k] += li * c[k - 1];
    }
  }
  return c;
}

double elem_sym(std::span<const double> lambda, std::size_t q) {
  if (q > lambda.size()) {
    throw ContractViolation("elem_sym: q out of range");
  }
  return elem_sym_all(lambda, q)[q];
}

std::vector<double> grad_elem_sym(std::span<const double> lambda, std::size_t q) {
  const std::size_t p = lambda.size();
  if (q < 1 || q > p) {
    throw ContractViolation("grad_elem_sym: q out of range");
  }
  std::vector<double> g(p);
  std::vector<double> loo(p - 1);
  for (std::size_t i = 0; i < p; ++i) {
    std::size_t t = 0;
    for (std::size_t j = 0; j < p; ++j) {
      if (j != i) {
        loo[t++] = lambda[j];
      }
    }
    g[i] = elem_sym(loo, q - 1);
  }
  return g;
}

void Weights::validate(std::size_t p) const {
  if (w.size() != p + 1) {
    throw ContractViolation("Weights: expected " + std::to_string(p + 1) + " entries");
  }
  bool any = false;
  for (double wq : w) {
    if (wq < 0.0 || !std::isfinite(wq)) {
      throw ContractViolation("Weights: entries must be nonnegative and finite");
    }
    if (wq > 0.0) {
      any = true;
    }
  }
  if (!any) {
    throw ContractViolation("Weights: all-zero weight vector");
  }
}

double conic_eval(std::span<const double> lambda, const Weights& w) {
  const std::size_t p = lambda.size();
  w.validate(p);
  const auto e = elem_sym_all(lambda, p);
  double s = 0.0;
  for (std::size_t q = 0; q <= p; ++q) {
    s += w.w[q] * e[q];
  }
  return s;
}

std::vector<double> conic_grad(std::span<const double> lambda, const Weights& w) {
  const std::size_t p = lambda.size();
  w.validate(p);
  std::vector<double> g(p, 0.0);
  std::vector<double> loo(p - 1);
  for (std::size_t i = 0; i < p; ++i) {
    std::size_t t = 0;
    for (std::size_t j = 0; j < p; ++j) {
      if (j != i) {
        loo[t++] = lambda[j];
      }
    }
    const auto e = elem_sym_all(loo, p == 0 ? 0 : p - 1);
    double s = 0.0;
    for (std::size_t q = 1; q <= p; ++q) {
      s += w.w[q] * e[q - 1];
    }
    g[i] = s;
  }
  return g;
}

std::vector<double> char_poly_coeffs(const Matrix& z) {
  const SymEig eig = sym_eig(z); // rejects non-square / asymmetric input
  return elem_sym_all(eig.eigenvalues, z.rows());
}

double binomial(std::size_t n, std::size_t k) {
  if (k > n) {
    return 0.0;
  }
  k = std::min(k, n - k);
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(r);
}

} // namespace sympca
