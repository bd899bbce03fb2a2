#include "sympca/landscape.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "sympca/errors.hpp"
#include "sympca/gen.hpp"

namespace sympca {

std::vector<std::size_t> StationarySpec::support_rows() const {
  std::vector<std::size_t> rows;
  for (const auto& b : blocks) {
    for (std::size_t i = b.row_begin; i < b.row_end; ++i) {
      rows.push_back(i);
    }
  }
  return rows;
}

std::vector<double> StationarySpec::gamma_tilde() const {
  std::vector<double> gt;
  gt.reserve(p);
  for (const auto& b : blocks) {
    gt.insert(gt.end(), b.dim, b.value);
  }
  return gt;
}

std::vector<std::size_t> StationarySpec::value_rows() const {
  std::vector<std::size_t> rows;
  rows.reserve(blocks.size());
  for (const auto& b : blocks) {
    rows.push_back(b.row_begin);
  }
  return rows;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::GlobalMax:
      return "global_max";
    case Verdict::GlobalMin:
      return "global_min";
    case Verdict::StrictSaddle:
      return "strict_saddle";
  }
  return "?";
}

bool is_stationary(const Gamma& gamma, const Matrix& x, double tolerance) {
  if (x.rows() != gamma.size()) {
    throw ContractViolation("is_stationary: X rows must match gamma length");
  }
  if (!is_orthonormal(x)) {
    throw ContractViolation("is_stationary: X must have orthonormal columns");
  }
  const Matrix gx = scale_rows(gamma.values(), x);
  const Matrix xtgx = transpose_times(x, gx);
  const SymEig eig = sym_eig(xtgx);
  const double lead = std::abs(eig.eigenvalues.front());
  if (lead == 0.0 || std::abs(eig.eigenvalues.back()) < 1e-14 * lead) {
    throw DomainError("is_stationary: X^T Gamma X is numerically singular");
  }
  const Matrix resid = gx - x * xtgx;
  return frobenius_norm(resid) <= tolerance * frobenius_norm(gx);
}

namespace {

// Distinct positive values of gamma with their contiguous row ranges.
struct ValueGroup {
  double value = 0.0;
  std::size_t row_begin = 0;
  std::size_t row_end = 0;
  std::size_t multiplicity() const { return row_end - row_begin; }
};

std::vector<ValueGroup> group_values(const Gamma& gamma, double value_tol) {
  std::vector<ValueGroup> groups;
  const auto g = gamma.values();
  const double scale = g.empty() ? 0.0 : g[0];
  std::size_t i = 0;
  while (i < g.size() && g[i] > 0.0) {
    std::size_t j = i + 1;
    while (j < g.size() && g[i] - g[j] <= value_tol * std::max(1.0, scale)) {
      ++j;
    }
    groups.push_back(ValueGroup{g[i], i, j});
    i = j;
  }
  return groups;
}

void enumerate_dims(const std::vector<ValueGroup>& groups, std::size_t gi,
                    std::size_t remaining, std::vector<std::size_t>& dims,
                    std::size_t n, std::size_t p, std::vector<StationarySpec>& out) {
  if (gi == groups.size()) {
    if (remaining != 0) {
      return;
    }
    StationarySpec spec;
    spec.n = n;
    spec.p = p;
    for (std::size_t k = 0; k < groups.size(); ++k) {
      if (dims[k] > 0) {
        spec.blocks.push_back(StationarySpec::Block{groups[k].value, groups[k].row_begin,
                                                    groups[k].row_end, dims[k]});
      }
    }
    out.push_back(std::move(spec));
    return;
  }
  const std::size_t cap = std::min(groups[gi].multiplicity(), remaining);
  for (std::size_t d = 0; d <= cap; ++d) {
    dims[gi] = d;
    enumerate_dims(groups, gi + 1, remaining - d, dims, n, p, out);
  }
  dims[gi] = 0;
}

double gap_tolerance(double scale) { return 1e-12 * std::max(1.0, scale); }

} // namespace

std::vector<StationarySpec> enumerate_stationary(const Gamma& gamma, std::size_t p,
                                                 double value_tol) {
  if (p < 1 || p > gamma.size()) {
    throw ContractViolation("enumerate_stationary: p out of range");
  }
  const auto groups = group_values(gamma, value_tol);
  std::size_t positive = 0;
  for (const auto& gr : groups) {
    positive += gr.multiplicity();
  }
  if (positive < p) {
    throw InsufficientRank("enumerate_stationary: fewer than p positive singular values");
  }
  std::vector<StationarySpec> out;
  std::vector<std::size_t> dims(groups.size(), 0);
  enumerate_dims(groups, 0, p, dims, gamma.size(), p, out);
  return out;
}

Matrix build_stationary_point(const StationarySpec& spec, Rng* rng) {
  if (spec.blocks.empty() || spec.n == 0 || spec.p == 0) {
    throw ContractViolation("build_stationary_point: empty spec");
  }
  Matrix x(spec.n, spec.p);
  std::size_t col = 0;
  for (const auto& b : spec.blocks) {
    const std::size_t rows = b.row_end - b.row_begin;
    if (b.dim < 1 || b.dim > rows || b.row_end > spec.n) {
      throw ContractViolation("build_stationary_point: invalid block");
    }
    if (rng == nullptr) {
      for (std::size_t d = 0; d < b.dim; ++d) {
        x(b.row_begin + d, col + d) = 1.0;
      }
    } else {
      const Matrix basis = random_orthonormal(rows, b.dim, *rng);
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t d = 0; d < b.dim; ++d) {
          x(b.row_begin + r, col + d) = basis(r, d);
        }
      }
    }
    col += b.dim;
  }
  if (col != spec.p) {
    throw ContractViolation("build_stationary_point: block dims do not sum to p");
  }
  return x;
}

namespace {

// Rows where the canonical representative of `spec` is zero, together with
// the gamma value they carry. Ascent/descent certificates rotate one column
// towards such a row.
std::vector<std::pair<std::size_t, double>> free_rows(const Gamma& gamma,
                                                      const StationarySpec& spec) {
  std::vector<bool> used(spec.n, false);
  for (const auto& b : spec.blocks) {
    for (std::size_t d = 0; d < b.dim; ++d) {
      used[b.row_begin + d] = true;
    }
  }
  std::vector<std::pair<std::size_t, double>> out;
  for (std::size_t i = 0; i < spec.n; ++i) {
    if (!used[i]) {
      out.emplace_back(i, gamma[i]);
    }
  }
  return out;
}

// Multiset equality within a gap tolerance; both inputs descending.
bool multiset_equal(std::span<const double> a, std::span<const double> b, double tolerance) {
  if (a.size() != b.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > tolerance) {
      return false;
    }
  }
  return true;
}

// Second-order Taylor coefficient of the feasible curve that rotates the
// column holding gamma~_j towards the zero row i:
//   (sigma_i^2 - gamma~_j) d_j psi(gamma~) / psi(1_p).
// For the unconstrained Det program this equals the ambient Hessian
// coefficient f_det (sigma_i^2/gamma~_j - 1); for the Stiefel-constrained
// kinds it equals the Lagrangian form (Hessian plus multiplier correction).
double certificate_quadform(const ObjectiveKind& kind, const std::vector<double>& gt,
                            double sigma2, std::size_t j) {
  const std::size_t p = gt.size();
  const auto dpsi = kind.psi_grad(gt);
  return (sigma2 - gt[j]) * dpsi[j] / kind.psi_one(p);
}

} // namespace

SaddleCertificate classify(const ObjectiveKind& kind, const Gamma& gamma,
                           const StationarySpec& spec) {
  const std::size_t p = spec.p;
  const std::size_t n = spec.n;
  if (n != gamma.size() || p < 1) {
    throw ContractViolation("classify: spec does not match gamma");
  }
  kind.validate(p);
  const bool det_like =
      kind.tag() == ObjectiveTag::Det || kind.tag() == ObjectiveTag::LogDet;

  std::vector<double> gt = spec.gamma_tilde();
  std::vector<double> gt_sorted = gt;
  std::sort(gt_sorted.begin(), gt_sorted.end(), std::greater<>());

  const auto g = gamma.values();
  const double tolerance = gap_tolerance(g[0]);
  std::vector<double> leading(g.begin(), g.begin() + p);
  std::vector<double> trailing(g.end() - p, g.end());

  SaddleCertificate cert;
  const ObjectiveKind value_kind = kind.tag() == ObjectiveTag::LogDet
                                       ? ObjectiveKind::det()
                                       : kind;
  cert.f_value = value_kind.psi(gt) / value_kind.psi_one(p);
  if (kind.tag() == ObjectiveTag::LogDet) {
    cert.f_value = std::log(cert.f_value);
  }

  if (multiset_equal(gt_sorted, leading, tolerance)) {
    cert.verdict = Verdict::GlobalMax;
  } else if (multiset_equal(gt_sorted, trailing, tolerance)) {
    cert.verdict = Verdict::GlobalMin;
  } else {
    cert.verdict = Verdict::StrictSaddle;
  }

  // Best free-row certificates: ascent pairs the largest free value with the
  // smallest selected one, descent the smallest free value with the largest
  // selected one. Ties resolve to the lowest index.
  const auto frees = free_rows(gamma, spec);
  const auto j_min = static_cast<std::size_t>(
      std::min_element(gt.begin(), gt.end()) - gt.begin());
  const auto j_max = static_cast<std::size_t>(
      std::max_element(gt.begin(), gt.end()) - gt.begin());

  if (!frees.empty()) {
    const auto hi = *std::max_element(
        frees.begin(), frees.end(),
        [](const auto& a, const auto& b) { return a.second < b.second; });
    const auto lo = *std::min_element(
        frees.begin(), frees.end(),
        [](const auto& a, const auto& b) { return a.second < b.second; });

    const ObjectiveKind quad_kind = det_like ? ObjectiveKind::det() : kind;
    if (hi.second > gt[j_min] + tolerance) {
      double qf = certificate_quadform(quad_kind, gt, hi.second, j_min);
      if (kind.tag() == ObjectiveTag::LogDet) {
        qf /= ObjectiveKind::det().psi(gt);
      }
      cert.ascent = SaddleCertificate::Direction{hi.first, j_min, qf};
    }
    if (lo.second < gt[j_max] - tolerance) {
      double qf = certificate_quadform(quad_kind, gt, lo.second, j_max);
      if (kind.tag() == ObjectiveTag::LogDet) {
        qf /= ObjectiveKind::det().psi(gt);
      }
      cert.descent = SaddleCertificate::Direction{lo.first, j_max, qf};
    }
  }

  if (det_like && p < n && g[p - 1] > g[p] + tolerance) {
    const double fdet = ObjectiveKind::det().psi(gt);
    double bound = fdet * (g[p - 1] / g[p] - 1.0);
    if (kind.tag() == ObjectiveTag::LogDet) {
      bound /= fdet;
    }
    cert.bound = bound;
  }
  return cert;
}

double rotation_second_derivative(const Gamma& gamma, std::size_t i0, std::size_t i1,
                                  const StationarySpec& spec) {
  if (i0 >= spec.n || i1 >= spec.n) {
    throw ContractViolation("rotation_second_derivative: index out of range");
  }
  // The rotation stays on the Stiefel manifold only if row i0 of the
  // canonical representative is zero: an unselected row or an unused copy
  // inside a selected eigenspace.
  bool i0_free = true;
  for (const auto& b : spec.blocks) {
    if (i0 >= b.row_begin && i0 < b.row_begin + b.dim) {
      i0_free = false;
      break;
    }
  }
  if (!i0_free) {
    throw ContractViolation("rotation_second_derivative: row i0 must be free");
  }
  bool selected = false;
  for (const auto& b : spec.blocks) {
    if (i1 >= b.row_begin && i1 < b.row_end) {
      selected = true;
      break;
    }
  }
  if (!selected) {
    throw ContractViolation("rotation_second_derivative: i1 must carry a selected value");
  }
  const double s0 = gamma[i0];
  const double s1 = gamma[i1];
  if (s1 <= 0.0) {
    throw ContractViolation("rotation_second_derivative: sigma_{i1} must be positive");
  }
  return 2.0 * (s0 - s1) / s1;
}

double hessian_quadform_stationary(const ObjectiveKind& kind, const Gamma& gamma,
                                   const StationarySpec& spec, const Matrix& delta) {
  const std::size_t p = spec.p;
  kind.validate(p);
  if (delta.rows() != spec.n || delta.cols() != p) {
    throw ContractViolation("hessian_quadform_stationary: Delta shape mismatch");
  }
  std::vector<bool> in_support(spec.n, false);
  for (std::size_t i : spec.support_rows()) {
    in_support[i] = true;
  }
  for (std::size_t i = 0; i < spec.n; ++i) {
    if (!in_support[i]) {
      continue;
    }
    for (std::size_t j = 0; j < p; ++j) {
      if (delta(i, j) != 0.0) {
        throw UnsupportedDirection(
            "hessian_quadform_stationary: Delta must vanish on the support rows");
      }
    }
  }

  const bool logdet = kind.tag() == ObjectiveTag::LogDet;
  const ObjectiveKind base = logdet ? ObjectiveKind::det() : kind;
  const std::vector<double> gt = spec.gamma_tilde();
  const auto dpsi = base.psi_grad(gt);
  const double psi_one = base.psi_one(p);
  const double f_value = base.psi(gt) / psi_one;
  const double dpsi_one = base.dpsi_one(p);

  double quad = 0.0;
  for (std::size_t i = 0; i < spec.n; ++i) {
    if (in_support[i]) {
      continue;
    }
    for (std::size_t j = 0; j < p; ++j) {
      const double d = delta(i, j);
      if (d == 0.0) {
        continue;
      }
      quad += (gamma[i] * dpsi[j] - f_value * dpsi_one) * d * d;
    }
  }
  quad /= psi_one;
  if (logdet) {
    quad /= f_value;
  }
  return quad;
}

ProbeReport probe_no_spurious_optima(const ObjectiveKind& kind, const Gamma& gamma,
                                     std::size_t p, std::size_t n_probes, double radius,
                                     std::uint64_t seed) {
  kind.validate(p);
  const auto specs = enumerate_stationary(gamma, p);
  Rng rng(seed);
  ProbeReport report;
  report.all_ok = true;

  for (const auto& spec : specs) {
    SaddleCertificate cert = classify(kind, gamma, spec);
    const Matrix xs = build_stationary_point(spec);
    const double f0 = eval_f(kind, gamma, xs);
    const double strict = 1e-12 * (1.0 + std::abs(f0));

    ProbeEntry entry;
    entry.spec = spec;
    entry.verdict = cert.verdict;
    entry.f_value = f0;

    for (std::size_t k = 0; k < n_probes; ++k) {
      Matrix d = rng.gaussian(spec.n, p);
      Matrix probe(1, 1);
      if (kind.stiefel_constrained()) {
        // Tangent step followed by QR retraction keeps the probe feasible.
        const Matrix xtd = transpose_times(xs, d);
        Matrix sym(p, p);
        for (std::size_t i = 0; i < p; ++i) {
          for (std::size_t j = 0; j < p; ++j) {
            sym(i, j) = 0.5 * (xtd(i, j) + xtd(j, i));
          }
        }
        Matrix tangent = d - xs * sym;
        const double nrm = frobenius_norm(tangent);
        if (nrm == 0.0) {
          continue;
        }
        probe = thin_qr(xs + (radius / nrm) * tangent).q;
      } else {
        const double nrm = frobenius_norm(d);
        probe = xs + (radius / nrm) * d;
      }
      double f1 = 0.0;
      try {
        f1 = eval_f(kind, gamma, probe);
      } catch (const Error&) {
        continue; // infeasible probe (rank loss); does not count either way
      }
      if (f1 - f0 > strict) {
        ++entry.n_increase;
      } else if (f0 - f1 > strict) {
        ++entry.n_decrease;
      }
    }

    switch (entry.verdict) {
      case Verdict::GlobalMax:
        entry.ok = entry.n_increase == 0;
        break;
      case Verdict::GlobalMin:
        entry.ok = entry.n_decrease == 0;
        break;
      case Verdict::StrictSaddle:
        entry.ok = entry.n_increase > 0 && entry.n_decrease > 0;
        break;
    }
    report.all_ok = report.all_ok && entry.ok;
    report.entries.push_back(std::move(entry));
  }
  return report;
}

std::string landscape_report_json(const ObjectiveKind& kind, const Gamma& gamma,
                                  std::size_t p) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& spec : enumerate_stationary(gamma, p)) {
    const SaddleCertificate cert = classify(kind, gamma, spec);
    nlohmann::json e;
    nlohmann::json indices = nlohmann::json::array();
    nlohmann::json dims = nlohmann::json::array();
    nlohmann::json values = nlohmann::json::array();
    for (const auto& b : spec.blocks) {
      indices.push_back(b.row_begin + 1); // 1-based representative row
      dims.push_back(b.dim);
      values.push_back(b.value);
    }
    e["indices"] = indices;
    e["dims"] = dims;
    e["values"] = values;
    e["f_value"] = cert.f_value;
    e["verdict"] = to_string(cert.verdict);
    e["ascent_quadform"] =
        cert.ascent ? nlohmann::json(cert.ascent->quadform) : nlohmann::json();
    e["bound"] = cert.bound ? nlohmann::json(*cert.bound) : nlohmann::json();
    entries.push_back(std::move(e));
  }
  nlohmann::json doc;
  doc["objective"] = kind.name();
  doc["p"] = p;
  doc["n"] = gamma.size();
  doc["stationary_points"] = entries;
  return doc.dump(2);
}

} // namespace sympca
