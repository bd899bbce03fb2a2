#include "sympca/postprocess.hpp"

#include <cmath>

#include "sympca/errors.hpp"
#include "sympca/linalg.hpp"

namespace sympca {

RecoveredTriplets recover_svd(const Matrix& a, const Matrix& xtilde) {
  if (a.cols() != xtilde.rows()) {
    throw ContractViolation("recover_svd: A and Xtilde dimensions do not match");
  }
  const Matrix qhat = thin_qr(xtilde).q; // throws RankDeficient
  const Matrix aq = a * qhat;            // m x p
  const SvdFactors small = svd(aq);

  RecoveredTriplets out;
  out.u = small.u;
  out.sigma = small.sigma;
  out.v = qhat * small.v;

  // Sign convention: the largest-magnitude entry of each right vector is
  // positive, ties resolved to the lowest row index.
  for (std::size_t j = 0; j < out.v.cols(); ++j) {
    std::size_t arg = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < out.v.rows(); ++i) {
      const double m = std::abs(out.v(i, j));
      if (m > best) {
        best = m;
        arg = i;
      }
    }
    if (out.v(arg, j) < 0.0) {
      for (std::size_t i = 0; i < out.v.rows(); ++i) {
        out.v(i, j) = -out.v(i, j);
      }
      for (std::size_t i = 0; i < out.u.rows(); ++i) {
        out.u(i, j) = -out.u(i, j);
      }
    }
  }
  return out;
}

} // namespace sympca
