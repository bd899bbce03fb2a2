#pragma once

#include <vector>

#include "sympca/matrix.hpp"

namespace sympca {

struct RecoveredTriplets {
  Matrix u;                  // m x p, orthonormal columns
  std::vector<double> sigma; // descending
  Matrix v;                  // n x p, orthonormal columns
};

/// Recover the p leading singular triplets of A from any matrix whose range
/// equals the span of a p-leading right factor: orthonormalise Xtilde, take
/// the small SVD of A Qhat and rotate the right factor back. Costs
/// O(n p^2 + m n p) arithmetic; for fixed data dimension n it scales
/// linearly in the number of data vectors m.
RecoveredTriplets recover_svd(const Matrix& a, const Matrix& xtilde);

} // namespace sympca
