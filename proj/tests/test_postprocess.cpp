#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sympca/errors.hpp"
#include "sympca/gen.hpp"
#include "sympca/opcount.hpp"
#include "sympca/postprocess.hpp"
#include "sympca/rng.hpp"

using namespace sympca;

TEST_CASE("recover_svd: exact oracle input returns the leading triplets") {
  const std::vector<double> sigma{3.0, 2.0, 1.5, 0.7, 0.2, 0.05};
  const Matrix a = synthesize_with_spectrum(sigma, 11);
  const auto full = svd(a);
  Matrix vp(6, 3);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      vp(i, j) = full.v(i, j);
    }
  }
  const auto rec = recover_svd(a, vp);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(rec.sigma[i] == doctest::Approx(sigma[i]).epsilon(1e-10));
  }
  CHECK(subspace_error(rec.v, vp) <= 1e-10);
  CHECK(is_orthonormal(rec.v, 1e-10));
  CHECK(is_orthonormal(rec.u, 1e-10));

  // A V_p = U_p diag(sigma_p).
  Matrix us = rec.u;
  for (std::size_t j = 0; j < 3; ++j) {
    for (std::size_t i = 0; i < 6; ++i) {
      us(i, j) *= rec.sigma[j];
    }
  }
  CHECK(frobenius_norm(a * rec.v - us) <= 1e-8 * frobenius_norm(a));
}

TEST_CASE("recover_svd: invariant under a change of basis of the input") {
  const std::vector<double> sigma{3.0, 2.0, 1.5, 0.7, 0.2};
  const Matrix a = synthesize_with_spectrum(sigma, 4);
  const auto full = svd(a);
  Matrix vp(5, 2);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      vp(i, j) = full.v(i, j);
    }
  }
  Rng rng(5);
  Matrix theta = rng.gaussian(2, 2);
  theta(0, 0) += 2.0;
  theta(1, 1) += 2.0;
  const auto rec = recover_svd(a, vp * theta);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(rec.sigma[i] == doctest::Approx(sigma[i]).epsilon(1e-9));
  }
  CHECK(subspace_error(rec.v, vp) <= 1e-9);
}

TEST_CASE("recover_svd: sign convention is deterministic") {
  const std::vector<double> sigma{2.0, 1.0, 0.5};
  const Matrix a = synthesize_with_spectrum(sigma, 8);
  const auto full = svd(a);
  Matrix vp(3, 2);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      vp(i, j) = full.v(i, j);
    }
  }
  const auto r1 = recover_svd(a, vp);
  const auto r2 = recover_svd(a, -1.0 * vp); // flipped basis, same subspace
  CHECK(max_abs_diff(r1.v, r2.v) <= 1e-9);
  for (std::size_t j = 0; j < 2; ++j) {
    std::size_t arg = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      if (std::abs(r1.v(i, j)) > best) {
        best = std::abs(r1.v(i, j));
        arg = i;
      }
    }
    CHECK(r1.v(arg, j) > 0.0);
  }
}

TEST_CASE("recover_svd: rank-deficient input throws") {
  const Matrix a = synthesize_with_spectrum({2.0, 1.0, 0.5}, 1);
  Matrix x(3, 2);
  x(0, 0) = 1.0;
  x(0, 1) = -2.0;
  CHECK_THROWS_AS(recover_svd(a, x), RankDeficient);
}

TEST_CASE("recover_svd: cost scales linearly in the number of data vectors") {
  // Operation-count ratio test at two sizes differing only in m.
  Rng rng(21);
  const std::size_t n = 24, p = 3;
  const Matrix x = rng.gaussian(n, p);

  const auto count_for = [&](std::size_t m) {
    Matrix a = rng.gaussian(m, n);
    opcount::reset();
    (void)recover_svd(a, x);
    return static_cast<double>(opcount::total());
  };
  const double c1 = count_for(64);
  const double c2 = count_for(128);
  // Doubling m should roughly double the arithmetic (never quadruple it).
  CHECK(c2 / c1 > 1.5);
  CHECK(c2 / c1 < 2.6);
}
