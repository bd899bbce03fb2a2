#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sympca/matrix.hpp"
#include "sympca/objectives.hpp"
#include "sympca/rng.hpp"

namespace sympca {

/// One admissible stationary configuration of the diagonalised program: a
/// multiset of distinct positive squared singular values, each taken with a
/// block dimension between 1 and its multiplicity, with dimensions summing
/// to p. The rows tied to unselected values are zero; each selected value
/// contributes an orthonormal block inside its eigenspace rows.
struct StationarySpec {
  struct Block {
    double value = 0.0;          // gamma entry (squared singular value)
    std::size_t row_begin = 0;   // first row carrying this value
    std::size_t row_end = 0;     // one past the last row carrying it
    std::size_t dim = 0;         // block dimension (columns spanned)
  };

  std::vector<Block> blocks; // descending by value
  std::size_t n = 0;
  std::size_t p = 0;

  /// K: all rows whose singular value is selected (every copy).
  std::vector<std::size_t> support_rows() const;
  /// Diagonal of X_s^T Gamma X_s in the canonical block basis: dim copies of
  /// each selected value, in block order.
  std::vector<double> gamma_tilde() const;
  /// Representative row index (first copy) per selected value.
  std::vector<std::size_t> value_rows() const;
};

enum class Verdict { GlobalMax, GlobalMin, StrictSaddle };

std::string to_string(Verdict v);

/// Curvature certificate for one stationary point. Directions are single
/// nonzero entries (row, col) of unit Frobenius norm; `quadform` is the
/// second-order Taylor coefficient of the objective along that direction
/// (half the plain second derivative), feasibly for the kind's program.
struct SaddleCertificate {
  struct Direction {
    std::size_t row = 0;
    std::size_t col = 0;
    double quadform = 0.0;
  };

  Verdict verdict = Verdict::StrictSaddle;
  double f_value = 0.0;
  std::optional<Direction> ascent;
  std::optional<Direction> descent;
  /// f_det(X_s) (sigma_p^2/sigma_{p+1}^2 - 1) per unit ||Delta||_F^2; only
  /// populated for Det with a nontrivial spectral gap sigma_p > sigma_{p+1}.
  std::optional<double> bound;
};

/// True iff ||Gamma X - X X^T Gamma X||_F <= tol ||Gamma X||_F, the
/// range-invariance test that characterises stationarity of the whole
/// family. Throws DomainError when X^T Gamma X is numerically singular.
bool is_stationary(const Gamma& gamma, const Matrix& x, double tolerance = 1e-9);

/// All admissible stationary configurations at desk scale. Values that agree
/// within value_tol (relative to the largest) are grouped as one eigenvalue.
std::vector<StationarySpec> enumerate_stationary(const Gamma& gamma, std::size_t p,
                                                 double value_tol = 1e-12);

/// Canonical Stiefel representative of a spec: identity-like blocks. A
/// random generator draws a random orthonormal basis inside each eigenspace
/// block instead (still stationary).
Matrix build_stationary_point(const StationarySpec& spec, Rng* rng = nullptr);

/// Classify one stationary configuration for Trace/Det/ElemSym/Conic (LogDet
/// shares the Det landscape). Certificates use the free-row curvature
/// formula; for Det they additionally satisfy the spectral-gap lower bound.
SaddleCertificate classify(const ObjectiveKind& kind, const Gamma& gamma,
                           const StationarySpec& spec);

/// Closed-form relative curvature 2 (sigma_{i0}^2 - sigma_{i1}^2) /
/// sigma_{i1}^2 of theta -> f_det(X(theta)) / f_det(X(0)) along the rotation
/// that moves the column holding sigma_{i1} towards the free row i0.
double rotation_second_derivative(const Gamma& gamma, std::size_t i0, std::size_t i1,
                                  const StationarySpec& spec);

/// Hessian quadratic form of f_phi at the canonical stationary point of
/// `spec`, for perturbations supported off the support rows K:
///   (1/psi(1_p)) sum_{i notin K} sum_j (sigma_i^2 d_j psi(gamma~) -
///    f(X_s) d_1 psi(1_p)) Delta_ij^2,
/// as a second-order Taylor coefficient. LogDet returns the Det form scaled
/// by 1/f_det. Throws UnsupportedDirection if Delta touches K rows.
double hessian_quadform_stationary(const ObjectiveKind& kind, const Gamma& gamma,
                                   const StationarySpec& spec, const Matrix& delta);

struct ProbeEntry {
  StationarySpec spec;
  Verdict verdict = Verdict::StrictSaddle;
  double f_value = 0.0;
  int n_increase = 0;
  int n_decrease = 0;
  bool ok = false;
};

struct ProbeReport {
  std::vector<ProbeEntry> entries;
  bool all_ok = false;
};

/// Sample `n_probes` random feasible perturbations of size `radius` around
/// every stationary point: saddles must show both a strict increase and a
/// strict decrease, the global max no increase, the global min no decrease.
/// Strict means a change above 1e-12 (1 + |f|).
ProbeReport probe_no_spurious_optima(const ObjectiveKind& kind, const Gamma& gamma,
                                     std::size_t p, std::size_t n_probes, double radius,
                                     std::uint64_t seed = 0);

/// JSON report of the full enumeration: one object per stationary point with
/// indices (1-based representative rows), dims, f_value, verdict,
/// ascent_quadform and bound.
std::string landscape_report_json(const ObjectiveKind& kind, const Gamma& gamma, std::size_t p);

} // namespace sympca
