#include "sympca/objectives.hpp"

#include <cmath>

#include "sympca/errors.hpp"

namespace sympca {

namespace {

constexpr double kSingularRatio = 1e-14;

// Smallest-over-largest eigenvalue guard used for Det/LogDet numerators.
void require_nonsingular_spectrum(std::span<const double> lambda, const char* what) {
  double max_mag = 0.0;
  for (double v : lambda) {
    max_mag = std::max(max_mag, std::abs(v));
  }
  for (double v : lambda) {
    if (max_mag == 0.0 || std::abs(v) < kSingularRatio * max_mag) {
      throw DomainError(std::string(what) + ": near-singular matrix");
    }
  }
}

double sum_log(std::span<const double> lambda, const char* what) {
  double s = 0.0;
  for (double v : lambda) {
    if (v <= 0.0) {
      throw DomainError(std::string(what) + ": nonpositive eigenvalue in log-determinant");
    }
    s += std::log(v);
  }
  return s;
}

} // namespace

Gamma::Gamma(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw ContractViolation("Gamma: empty");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] >= 0.0) || !std::isfinite(values_[i])) {
      throw ContractViolation("Gamma: entries must be finite and nonnegative");
    }
    if (i > 0 && values_[i] > values_[i - 1]) {
      throw ContractViolation("Gamma: entries must be descending");
    }
    if (values_[i] > 0.0) {
      ++rank_;
    }
  }
}

ObjectiveKind ObjectiveKind::elem_sym(std::size_t q) {
  if (q < 1) {
    throw ContractViolation("ObjectiveKind: q must be at least 1");
  }
  ObjectiveKind k(ObjectiveTag::ElemSym);
  k.q_ = q;
  return k;
}

ObjectiveKind ObjectiveKind::conic(Weights w) {
  ObjectiveKind k(ObjectiveTag::Conic);
  k.weights_ = std::move(w);
  return k;
}

std::string ObjectiveKind::name() const {
  switch (tag_) {
    case ObjectiveTag::Trace:
      return "trace";
    case ObjectiveTag::Det:
      return "det";
    case ObjectiveTag::LogDet:
      return "logdet";
    case ObjectiveTag::ElemSym:
      return "sq:" + std::to_string(q_);
    case ObjectiveTag::Conic:
      return "conic";
  }
  return "?";
}

void ObjectiveKind::validate(std::size_t p) const {
  switch (tag_) {
    case ObjectiveTag::ElemSym:
      if (q_ < 1 || q_ > p) {
        throw ContractViolation("ObjectiveKind: q out of range for p=" + std::to_string(p));
      }
      break;
    case ObjectiveTag::Conic: {
      weights_.validate(p);
      bool nonconstant = false;
      for (std::size_t q = 1; q <= p; ++q) {
        if (weights_.w[q] > 0.0) {
          nonconstant = true;
        }
      }
      if (!nonconstant) {
        // Only w_0 positive makes the ratio identically 1.
        throw ContractViolation("ObjectiveKind: conic weights give a constant objective");
      }
      break;
    }
    default:
      break;
  }
}

double ObjectiveKind::psi(std::span<const double> lambda) const {
  const std::size_t p = lambda.size();
  switch (tag_) {
    case ObjectiveTag::Trace:
      return sympca::elem_sym(lambda, 1);
    case ObjectiveTag::Det:
    case ObjectiveTag::LogDet:
      return sympca::elem_sym(lambda, p);
    case ObjectiveTag::ElemSym:
      return sympca::elem_sym(lambda, q_);
    case ObjectiveTag::Conic:
      return conic_eval(lambda, weights_);
  }
  throw Error("unreachable");
}

std::vector<double> ObjectiveKind::psi_grad(std::span<const double> lambda) const {
  const std::size_t p = lambda.size();
  switch (tag_) {
    case ObjectiveTag::Trace:
      return grad_elem_sym(lambda, 1);
    case ObjectiveTag::Det:
    case ObjectiveTag::LogDet:
      return grad_elem_sym(lambda, p);
    case ObjectiveTag::ElemSym:
      return grad_elem_sym(lambda, q_);
    case ObjectiveTag::Conic:
      return conic_grad(lambda, weights_);
  }
  throw Error("unreachable");
}

double ObjectiveKind::psi_one(std::size_t p) const {
  switch (tag_) {
    case ObjectiveTag::Trace:
      return static_cast<double>(p);
    case ObjectiveTag::Det:
    case ObjectiveTag::LogDet:
      return 1.0;
    case ObjectiveTag::ElemSym:
      return binomial(p, q_);
    case ObjectiveTag::Conic: {
      double s = 0.0;
      for (std::size_t q = 0; q <= p; ++q) {
        s += weights_.w[q] * binomial(p, q);
      }
      return s;
    }
  }
  throw Error("unreachable");
}

double ObjectiveKind::dpsi_one(std::size_t p) const {
  switch (tag_) {
    case ObjectiveTag::Trace:
      return 1.0;
    case ObjectiveTag::Det:
    case ObjectiveTag::LogDet:
      return 1.0;
    case ObjectiveTag::ElemSym:
      return binomial(p - 1, q_ - 1);
    case ObjectiveTag::Conic: {
      double s = 0.0;
      for (std::size_t q = 1; q <= p; ++q) {
        s += weights_.w[q] * binomial(p - 1, q - 1);
      }
      return s;
    }
  }
  throw Error("unreachable");
}

Reduced reduce_to_diagonal(const Matrix& a) {
  const SvdFactors f = svd(a);
  const std::size_t n = a.cols();
  std::vector<double> gamma(n, 0.0);
  for (std::size_t i = 0; i < f.sigma.size() && i < n; ++i) {
    gamma[i] = f.sigma[i] * f.sigma[i];
  }
  Matrix v = f.v.cols() == n ? f.v : complete_orthonormal(f.v, n);
  return Reduced{Gamma(std::move(gamma)), std::move(v)};
}

EvalPoint::EvalPoint(const Gamma& gamma, Matrix x) : x_(std::move(x)) {
  if (x_.rows() != gamma.size()) {
    throw ContractViolation("EvalPoint: X rows must match gamma length");
  }
  if (x_.rows() < x_.cols()) {
    throw ContractViolation("EvalPoint: X must be tall (n >= p)");
  }
  if (!x_.all_finite()) {
    throw ContractViolation("EvalPoint: non-finite entries");
  }
  xtx_ = transpose_times(x_, x_);
  xtgx_ = transpose_times(x_, scale_rows(gamma.values(), x_));
  xtx_eig_ = sym_eig(xtx_);
  xtgx_eig_ = sym_eig(xtgx_);
  const auto& lx = xtx_eig_.eigenvalues;
  if (lx.back() < tol::rank * std::max(1e-300, lx.front())) {
    throw RankDeficient("EvalPoint: X is numerically rank deficient");
  }
}

double eval_f(const ObjectiveKind& kind, const Gamma& gamma, const EvalPoint& point) {
  (void)gamma;
  kind.validate(point.p());
  const auto& lg = point.xtgx_eig().eigenvalues;
  const auto& lx = point.xtx_eig().eigenvalues;
  if (kind.tag() == ObjectiveTag::LogDet) {
    require_nonsingular_spectrum(lg, "eval_f(logdet)");
    return sum_log(lg, "eval_f") - sum_log(lx, "eval_f");
  }
  if (kind.tag() == ObjectiveTag::Det) {
    require_nonsingular_spectrum(lg, "eval_f(det)");
  }
  return kind.psi(lg) / kind.psi(lx);
}

double eval_f(const ObjectiveKind& kind, const Gamma& gamma, const Matrix& x) {
  return eval_f(kind, gamma, EvalPoint(gamma, x));
}

Matrix grad_spectral(
    const std::function<std::vector<double>(std::span<const double>)>& psi_grad,
    const Matrix& z) {
  const SymEig eig = sym_eig(z); // rejects non-square / asymmetric input
  const std::vector<double> d = psi_grad(eig.eigenvalues);
  Matrix scaled = eig.eigenvectors;
  for (std::size_t j = 0; j < z.cols(); ++j) {
    for (std::size_t i = 0; i < z.rows(); ++i) {
      scaled(i, j) *= d[j];
    }
  }
  return times_transpose(scaled, eig.eigenvectors);
}

namespace {

// W diag(d) W^T for a cached eigen-decomposition.
Matrix assemble_spectral(const SymEig& eig, std::span<const double> d) {
  Matrix scaled = eig.eigenvectors;
  for (std::size_t j = 0; j < scaled.cols(); ++j) {
    for (std::size_t i = 0; i < scaled.rows(); ++i) {
      scaled(i, j) *= d[j];
    }
  }
  return times_transpose(scaled, eig.eigenvectors);
}

} // namespace

Matrix euclidean_grad(const ObjectiveKind& kind, const Gamma& gamma, const EvalPoint& point) {
  kind.validate(point.p());
  const auto& eg = point.xtgx_eig();
  const auto& ex = point.xtx_eig();
  const Matrix gx = scale_rows(gamma.values(), point.x());

  if (kind.tag() == ObjectiveTag::LogDet) {
    // grad log f_det = 2 Gamma X (X^T Gamma X)^{-1} - 2 X (X^T X)^{-1}.
    require_nonsingular_spectrum(eg.eigenvalues, "euclidean_grad(logdet)");
    std::vector<double> invg(eg.eigenvalues.size());
    std::vector<double> invx(ex.eigenvalues.size());
    for (std::size_t i = 0; i < invg.size(); ++i) {
      invg[i] = 1.0 / eg.eigenvalues[i];
    }
    for (std::size_t i = 0; i < invx.size(); ++i) {
      invx[i] = 1.0 / ex.eigenvalues[i];
    }
    Matrix out = gx * assemble_spectral(eg, invg);
    out -= point.x() * assemble_spectral(ex, invx);
    out *= 2.0;
    return out;
  }
  if (kind.tag() == ObjectiveTag::Det) {
    require_nonsingular_spectrum(eg.eigenvalues, "euclidean_grad(det)");
  }

  // Quotient rule: 2 Gamma X grad_phi(X^T Gamma X) / D
  //              - 2 N X grad_phi(X^T X) / D^2.
  const double num = kind.psi(eg.eigenvalues);
  const double den = kind.psi(ex.eigenvalues);
  const Matrix pg = assemble_spectral(eg, kind.psi_grad(eg.eigenvalues));
  const Matrix px = assemble_spectral(ex, kind.psi_grad(ex.eigenvalues));
  Matrix out = (gx * pg) * (2.0 / den);
  out -= (point.x() * px) * (2.0 * num / (den * den));
  return out;
}

Matrix euclidean_grad(const ObjectiveKind& kind, const Gamma& gamma, const Matrix& x) {
  return euclidean_grad(kind, gamma, EvalPoint(gamma, x));
}

Matrix riemannian_grad(const ObjectiveKind& kind, const Gamma& gamma, const Matrix& x) {
  if (!is_orthonormal(x)) {
    throw ContractViolation("riemannian_grad: X is not on the Stiefel manifold");
  }
  const Matrix g = euclidean_grad(kind, gamma, x);
  const Matrix xtg = transpose_times(x, g);
  Matrix sym(xtg.rows(), xtg.cols());
  for (std::size_t i = 0; i < xtg.rows(); ++i) {
    for (std::size_t j = 0; j < xtg.cols(); ++j) {
      sym(i, j) = 0.5 * (xtg(i, j) + xtg(j, i));
    }
  }
  return g - x * sym;
}

Matrix lagrange_multiplier(const ObjectiveKind& kind, const Gamma& gamma, const Matrix& xs,
                           double stationarity_tol) {
  if (!kind.stiefel_constrained()) {
    throw ContractViolation("lagrange_multiplier: kind is not Stiefel-constrained");
  }
  if (!is_orthonormal(xs)) {
    throw ContractViolation("lagrange_multiplier: X_s is not on the Stiefel manifold");
  }
  // Stationarity of the Stiefel program: Gamma X = X X^T Gamma X.
  const Matrix gx = scale_rows(gamma.values(), xs);
  const Matrix resid = gx - xs * transpose_times(xs, gx);
  if (frobenius_norm(resid) > stationarity_tol * std::max(1e-300, frobenius_norm(gx))) {
    throw NotStationary("lagrange_multiplier: input fails the stationarity test");
  }
  const Matrix g = euclidean_grad(kind, gamma, xs);
  Matrix lam = transpose_times(xs, g);
  lam *= -0.5;
  // Symmetric up to roundoff; symmetrize exactly.
  for (std::size_t i = 0; i < lam.rows(); ++i) {
    for (std::size_t j = i + 1; j < lam.cols(); ++j) {
      const double v = 0.5 * (lam(i, j) + lam(j, i));
      lam(i, j) = v;
      lam(j, i) = v;
    }
  }
  return lam;
}

} // namespace sympca
