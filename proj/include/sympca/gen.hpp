#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sympca/matrix.hpp"
#include "sympca/rng.hpp"

namespace sympca {

/// sigma_i = i^{-alpha}, i = 1..n.
std::vector<double> powerlaw_spectrum(std::size_t n, double alpha);

/// n evenly spaced values from hi down to lo (descending).
std::vector<double> linspace_spectrum(std::size_t n, double hi, double lo);

/// Random n x p matrix with orthonormal columns (QR of a Gaussian draw).
Matrix random_orthonormal(std::size_t n, std::size_t p, Rng& rng);

/// A = U diag(sigma) V^T with generic orthonormal U, V drawn from the seed.
/// sigma must be nonnegative and descending; A is square n x n with
/// n = sigma.size().
Matrix synthesize_with_spectrum(const std::vector<double>& sigma, std::uint64_t seed);

} // namespace sympca
