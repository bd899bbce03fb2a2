#include "sympca/gen.hpp"

#include <cmath>

#include "sympca/errors.hpp"
#include "sympca/linalg.hpp"

namespace sympca {

std::vector<double> powerlaw_spectrum(std::size_t n, double alpha) {
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = std::pow(static_cast<double>(i + 1), -alpha);
  }
  return s;
}

std::vector<double> linspace_spectrum(std::size_t n, double hi, double lo) {
  if (hi < lo) {
    std::swap(hi, lo);
  }
  std::vector<double> s(n);
  if (n == 1) {
    s[0] = hi;
    return s;
  }
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = hi - (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return s;
}

Matrix random_orthonormal(std::size_t n, std::size_t p, Rng& rng) {
  for (int attempt = 0; attempt < 16; ++attempt) {
    Matrix g = rng.gaussian(n, p);
    try {
      return thin_qr(g).q;
    } catch (const RankDeficient&) {
      continue; // probability ~0; redraw
    }
  }
  throw Error("random_orthonormal: repeated rank-deficient draws");
}

Matrix synthesize_with_spectrum(const std::vector<double>& sigma, std::uint64_t seed) {
  const std::size_t n = sigma.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(sigma[i] >= 0.0) || (i > 0 && sigma[i] > sigma[i - 1])) {
      throw ContractViolation("spectrum must be nonnegative and descending");
    }
  }
  Rng rng(seed);
  const Matrix u = random_orthonormal(n, n, rng);
  const Matrix v = random_orthonormal(n, n, rng);
  // A = U diag(sigma) V^T
  const Matrix us = times_transpose(u, Matrix::diag(sigma));
  return times_transpose(us, v);
}

} // namespace sympca
