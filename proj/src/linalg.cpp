#include "sympca/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "sympca/errors.hpp"
#include "sympca/opcount.hpp"

namespace sympca {

namespace {

constexpr int kMaxSweeps = 64;

void require_finite(const Matrix& m, const char* what) {
  if (!m.all_finite()) {
    throw ContractViolation(std::string(what) + ": non-finite entries");
  }
}

// Reorder eigenpairs / singular triplets descending, stable in the original
// index so that ties are broken deterministically.
std::vector<std::size_t> descending_order(const std::vector<double>& vals) {
  std::vector<std::size_t> idx(vals.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
  return idx;
}

} // namespace

SymEig sym_eig(const Matrix& z, double symmetry_tol) {
  require_finite(z, "sym_eig");
  const std::size_t n = z.rows();
  if (z.cols() != n) {
    throw ContractViolation("sym_eig: input must be square");
  }
  const double scale = frobenius_norm(z);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(z(i, j) - z(j, i)) > symmetry_tol * std::max(1.0, scale)) {
        throw ContractViolation("sym_eig: input is not symmetric");
      }
    }
  }

  Matrix a = z;
  // Symmetrize exactly so rotations see one consistent value per pair.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  Matrix w = Matrix::identity(n);

  const double stop = 1e-15;
  for (int sweep = 0; sweep < kMaxSweeps && n > 1; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        off += 2.0 * a(i, j) * a(i, j);
      }
    }
    double diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      diag += a(i, i) * a(i, i);
    }
    if (std::sqrt(off) <= stop * std::max(1.0, std::sqrt(off + diag))) {
      break;
    }
    for (std::size_t pidx = 0; pidx < n - 1; ++pidx) {
      for (std::size_t q = pidx + 1; q < n; ++q) {
        const double apq = a(pidx, q);
        if (apq == 0.0) {
          continue;
        }
        const double app = a(pidx, pidx);
        const double aqq = a(q, q);
        if (std::abs(apq) <= 1e-18 * (std::abs(app) + std::abs(aqq))) {
          a(pidx, q) = 0.0;
          a(q, pidx) = 0.0;
          continue;
        }
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        a(pidx, pidx) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(pidx, q) = 0.0;
        a(q, pidx) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == pidx || k == q) {
            continue;
          }
          const double akp = a(k, pidx);
          const double akq = a(k, q);
          a(k, pidx) = c * akp - s * akq;
          a(pidx, k) = a(k, pidx);
          a(k, q) = s * akp + c * akq;
          a(q, k) = a(k, q);
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double wkp = w(k, pidx);
          const double wkq = w(k, q);
          w(k, pidx) = c * wkp - s * wkq;
          w(k, q) = s * wkp + c * wkq;
        }
        opcount::add(12 * static_cast<std::uint64_t>(n));
      }
    }
  }

  std::vector<double> lambda(n);
  for (std::size_t i = 0; i < n; ++i) {
    lambda[i] = a(i, i);
  }
  const auto order = descending_order(lambda);
  SymEig out;
  out.eigenvalues.resize(n);
  out.eigenvectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.eigenvalues[j] = lambda[order[j]];
    for (std::size_t i = 0; i < n; ++i) {
      out.eigenvectors(i, j) = w(i, order[j]);
    }
  }
  return out;
}

SvdFactors svd(const Matrix& a) {
  require_finite(a, "svd");
  if (a.rows() < a.cols()) {
    // Work on the transpose and swap the factors back.
    SvdFactors t = svd(transpose(a));
    return SvdFactors{std::move(t.v), std::move(t.sigma), std::move(t.u)};
  }
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();

  Matrix b = a;
  Matrix v = Matrix::identity(n);

  const double norm = frobenius_norm(a);
  if (norm == 0.0) {
    // Zero matrix: all singular values are zero, canonical factors.
    SvdFactors out;
    out.sigma.assign(n, 0.0);
    out.u = Matrix(m, n);
    for (std::size_t j = 0; j < n; ++j) {
      out.u(j, j) = 1.0;
    }
    out.v = std::move(v);
    return out;
  }

  // One-sided Jacobi: orthogonalize pairs of columns of B until every pair
  // is orthogonal relative to the column norms.
  const double eps = 1e-15;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p < n - 1; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double app = 0.0, aqq = 0.0, apq = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
          const double bp = b(k, p);
          const double bq = b(k, q);
          app += bp * bp;
          aqq += bq * bq;
          apq += bp * bq;
        }
        opcount::add(3 * static_cast<std::uint64_t>(m));
        if (std::abs(apq) <= eps * std::sqrt(app * aqq) || apq == 0.0) {
          continue;
        }
        rotated = true;
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < m; ++k) {
          const double bp = b(k, p);
          const double bq = b(k, q);
          b(k, p) = c * bp - s * bq;
          b(k, q) = s * bp + c * bq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vp = v(k, p);
          const double vq = v(k, q);
          v(k, p) = c * vp - s * vq;
          v(k, q) = s * vp + c * vq;
        }
        opcount::add(4 * static_cast<std::uint64_t>(m + n));
      }
    }
    if (!rotated) {
      break;
    }
  }

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      s += b(k, j) * b(k, j);
    }
    sigma[j] = std::sqrt(s);
  }
  const auto order = descending_order(sigma);

  SvdFactors out;
  out.sigma.resize(n);
  out.u = Matrix(m, n);
  out.v = Matrix(n, n);
  const double tiny = 1e-300;
  std::vector<std::size_t> degenerate;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    out.sigma[j] = sigma[src];
    for (std::size_t k = 0; k < n; ++k) {
      out.v(k, j) = v(k, src);
    }
    if (sigma[src] > tiny) {
      const double inv = 1.0 / sigma[src];
      for (std::size_t k = 0; k < m; ++k) {
        out.u(k, j) = b(k, src) * inv;
      }
    } else {
      out.sigma[j] = 0.0;
      degenerate.push_back(j);
    }
  }
  // Columns for zero singular values: fill with canonical directions
  // orthogonalized against the columns already present.
  for (std::size_t j : degenerate) {
    for (std::size_t cand = 0; cand < m; ++cand) {
      Matrix e(m, 1);
      e(cand, 0) = 1.0;
      for (std::size_t jj = 0; jj < n; ++jj) {
        if (jj == j || (out.sigma[jj] == 0.0 && jj > j)) {
          continue;
        }
        double d = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
          d += out.u(k, jj) * e(k, 0);
        }
        for (std::size_t k = 0; k < m; ++k) {
          e(k, 0) -= d * out.u(k, jj);
        }
      }
      double nrm = frobenius_norm(e);
      if (nrm > 0.5) {
        for (std::size_t k = 0; k < m; ++k) {
          out.u(k, j) = e(k, 0) / nrm;
        }
        break;
      }
    }
  }
  return out;
}

QrFactors thin_qr(const Matrix& x, double rank_tol) {
  require_finite(x, "thin_qr");
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  if (n < p) {
    throw ContractViolation("thin_qr: requires rows >= cols");
  }

  double max_col_norm = 0.0;
  for (std::size_t j = 0; j < p; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s += x(i, j) * x(i, j);
    }
    max_col_norm = std::max(max_col_norm, std::sqrt(s));
  }
  if (max_col_norm == 0.0) {
    throw RankDeficient("thin_qr: zero input");
  }

  Matrix q = x;
  Matrix r(p, p);
  // Modified Gram-Schmidt with one re-orthogonalization pass per column.
  for (std::size_t j = 0; j < p; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        double d = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          d += q(i, k) * q(i, j);
        }
        for (std::size_t i = 0; i < n; ++i) {
          q(i, j) -= d * q(i, k);
        }
        r(k, j) += d;
        opcount::add(2 * static_cast<std::uint64_t>(n));
      }
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      nrm += q(i, j) * q(i, j);
    }
    nrm = std::sqrt(nrm);
    opcount::add(static_cast<std::uint64_t>(n));
    if (nrm <= rank_tol * max_col_norm) {
      throw RankDeficient("thin_qr: column " + std::to_string(j) + " is dependent");
    }
    r(j, j) = nrm;
    const double inv = 1.0 / nrm;
    for (std::size_t i = 0; i < n; ++i) {
      q(i, j) *= inv;
    }
  }
  return QrFactors{std::move(q), std::move(r)};
}

double subspace_error(const Matrix& x, const Matrix& vp) {
  if (x.rows() != vp.rows() || x.cols() != vp.cols()) {
    throw ContractViolation("subspace_error: shape mismatch");
  }
  if (!is_orthonormal(vp)) {
    throw ContractViolation("subspace_error: V_p must have orthonormal columns");
  }
  const Matrix q = thin_qr(x).q; // throws RankDeficient for rank-deficient X
  // sin(theta_max) = || (I - Q Q^T) V_p ||_2. The residual is formed before
  // any square root, so tiny angles do not cancel; for equidimensional
  // subspaces this equals the projector-difference spectral norm.
  const Matrix resid = vp - q * transpose_times(q, vp);
  const SvdFactors f = svd(resid);
  return std::clamp(f.sigma.front(), 0.0, 1.0);
}

Matrix complete_orthonormal(const Matrix& partial, std::size_t n) {
  if (partial.rows() != n || partial.cols() > n) {
    throw ContractViolation("complete_orthonormal: bad shape");
  }
  Matrix full(n, n);
  for (std::size_t j = 0; j < partial.cols(); ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      full(i, j) = partial(i, j);
    }
  }
  std::size_t next = partial.cols();
  for (std::size_t cand = 0; cand < n && next < n; ++cand) {
    std::vector<double> e(n, 0.0);
    e[cand] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < next; ++k) {
        double d = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          d += full(i, k) * e[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
          e[i] -= d * full(i, k);
        }
      }
    }
    double nrm = 0.0;
    for (double vi : e) {
      nrm += vi * vi;
    }
    nrm = std::sqrt(nrm);
    if (nrm > 0.5) {
      for (std::size_t i = 0; i < n; ++i) {
        full(i, next) = e[i] / nrm;
      }
      ++next;
    }
  }
  if (next < n) {
    throw ContractViolation("complete_orthonormal: could not complete basis");
  }
  return full;
}

Matrix sym_inverse(const Matrix& z) {
  const SymEig eig = sym_eig(z);
  double max_mag = 0.0;
  for (double v : eig.eigenvalues) {
    max_mag = std::max(max_mag, std::abs(v));
  }
  Matrix scaled = eig.eigenvectors;
  for (std::size_t j = 0; j < z.cols(); ++j) {
    const double ev = eig.eigenvalues[j];
    if (max_mag == 0.0 || std::abs(ev) < 1e-14 * max_mag) {
      throw DomainError("sym_inverse: matrix is numerically singular");
    }
    for (std::size_t i = 0; i < z.rows(); ++i) {
      scaled(i, j) /= ev;
    }
  }
  return times_transpose(scaled, eig.eigenvectors);
}

bool is_orthonormal(const Matrix& q, double tolerance) {
  const Matrix g = transpose_times(q, q);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.rows(); ++i) {
    for (std::size_t j = 0; j < g.cols(); ++j) {
      const double target = i == j ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(g(i, j) - target));
    }
  }
  return worst <= tolerance;
}

} // namespace sympca
