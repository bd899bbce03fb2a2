#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "sympca/errors.hpp"
#include "sympca/landscape.hpp"
#include "sympca/sympoly.hpp"

using namespace sympca;

TEST_CASE("is_stationary: canonical selections, rotations, eigenspace mixtures") {
  const Gamma gamma({4.0, 1.0, 0.25});
  const std::size_t sel[] = {0, 2};
  CHECK(is_stationary(gamma, Matrix::canonical_columns(3, sel)));

  // 45-degree mixture of distinct eigendirections is not stationary.
  Matrix mixed(3, 2);
  mixed(0, 0) = std::sqrt(0.5);
  mixed(1, 0) = std::sqrt(0.5);
  mixed(2, 1) = 1.0;
  CHECK_FALSE(is_stationary(gamma, mixed));

  // Any basis inside a repeated eigenspace is stationary.
  const Gamma rep({4.0, 4.0, 1.0});
  Matrix inside(3, 1);
  inside(0, 0) = std::cos(0.3);
  inside(1, 0) = std::sin(0.3);
  CHECK(is_stationary(rep, inside));

  // Singular X^T Gamma X violates the hypotheses.
  const Gamma defect({1.0, 1.0, 0.0});
  const std::size_t null_sel[] = {0, 2};
  CHECK_THROWS_AS(is_stationary(defect, Matrix::canonical_columns(3, null_sel)), DomainError);
  CHECK_THROWS_AS(is_stationary(gamma, 0.5 * Matrix::canonical_columns(3, sel)),
                  ContractViolation);
}

TEST_CASE("enumerate_stationary: distinct spectrum gives the C(n,p) selections") {
  const Gamma gamma({4.0, 1.0, 0.25});
  const auto specs = enumerate_stationary(gamma, 2);
  REQUIRE(specs.size() == 3);
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& s : specs) {
    REQUIRE(s.blocks.size() == 2);
    pairs.insert({s.blocks[0].row_begin, s.blocks[1].row_begin});
    CHECK(s.blocks[0].dim == 1);
    CHECK(s.blocks[1].dim == 1);
  }
  CHECK(pairs == std::set<std::pair<std::size_t, std::size_t>>{{0, 1}, {0, 2}, {1, 2}});
}

TEST_CASE("enumerate_stationary: repeated value emits block specs") {
  const Gamma gamma({4.0, 4.0, 1.0});
  const auto specs = enumerate_stationary(gamma, 2);
  REQUIRE(specs.size() == 2);
  // {value 4 with dim 2} and {value 4 dim 1, value 1 dim 1}.
  bool saw_block = false, saw_pair = false;
  for (const auto& s : specs) {
    if (s.blocks.size() == 1) {
      saw_block = true;
      CHECK(s.blocks[0].value == doctest::Approx(4.0));
      CHECK(s.blocks[0].dim == 2);
    } else {
      saw_pair = true;
      CHECK(s.blocks[0].dim == 1);
      CHECK(s.blocks[1].dim == 1);
    }
    // Every admissible spec really is stationary (sampled check with a
    // random block basis).
    Rng rng(5);
    const Matrix xs = build_stationary_point(s, &rng);
    CHECK(is_stationary(gamma, xs));
  }
  CHECK(saw_block);
  CHECK(saw_pair);
}

TEST_CASE("enumerate_stationary: zero singular values are never selected") {
  const Gamma gamma({4.0, 1.0, 0.0});
  const auto specs = enumerate_stationary(gamma, 2);
  REQUIRE(specs.size() == 1);
  CHECK(specs[0].blocks[0].row_begin == 0);
  CHECK(specs[0].blocks[1].row_begin == 1);
  CHECK_THROWS_AS(enumerate_stationary(Gamma({1.0, 0.0, 0.0}), 2), InsufficientRank);
}

TEST_CASE("build_stationary_point: canonical and random block bases") {
  const Gamma gamma({4.0, 1.0, 0.25});
  const auto specs = enumerate_stationary(gamma, 2);
  for (const auto& s : specs) {
    const Matrix xs = build_stationary_point(s);
    CHECK(is_stationary(gamma, xs));
    // X_s^T Gamma X_s is diagonal with the block values.
    const Matrix xtgx = transpose_times(xs, scale_rows(gamma.values(), xs));
    const auto gt = s.gamma_tilde();
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 2; ++j) {
        CHECK(xtgx(i, j) == doctest::Approx(i == j ? gt[i] : 0.0).epsilon(1e-12));
      }
    }
  }

  const Gamma rep({4.0, 4.0, 4.0, 1.0});
  StationarySpec spec;
  spec.n = 4;
  spec.p = 2;
  spec.blocks.push_back(StationarySpec::Block{4.0, 0, 3, 2});
  Rng rng(9);
  const Matrix xs = build_stationary_point(spec, &rng);
  CHECK(is_orthonormal(xs, 1e-12));
  CHECK(is_stationary(rep, xs));
}

TEST_CASE("classify: the worked 3x3 instance") {
  const Gamma gamma({4.0, 1.0, 0.25});
  const auto specs = enumerate_stationary(gamma, 2);
  int max_count = 0, min_count = 0, saddle_count = 0;
  for (const auto& s : specs) {
    const auto cert = classify(ObjectiveKind::det(), gamma, s);
    if (cert.verdict == Verdict::GlobalMax) {
      ++max_count;
      CHECK(cert.f_value == doctest::Approx(4.0));
    } else if (cert.verdict == Verdict::GlobalMin) {
      ++min_count;
      CHECK(cert.f_value == doctest::Approx(0.25));
      // An ascent certificate exists at the minimum too, and the
      // spectral-gap bound covers every non-maximal point.
      REQUIRE(cert.ascent.has_value());
      CHECK(cert.ascent->quadform == doctest::Approx(3.75));
      CHECK(cert.ascent->quadform >= *cert.bound - 1e-12);
    } else {
      ++saddle_count;
      CHECK(cert.f_value == doctest::Approx(1.0));
      REQUIRE(cert.ascent.has_value());
      REQUIRE(cert.descent.has_value());
      // Saddle {1,3}: ascent quadform 3.0 meets the bound with equality.
      CHECK(cert.ascent->quadform == doctest::Approx(3.0));
      REQUIRE(cert.bound.has_value());
      CHECK(*cert.bound == doctest::Approx(3.0));
      CHECK(cert.ascent->quadform >= *cert.bound - 1e-12);
    }
  }
  CHECK(max_count == 1);
  CHECK(min_count == 1);
  CHECK(saddle_count == 1);
}

TEST_CASE("classify: s_q values on the worked instance") {
  const Gamma gamma({4.0, 1.0, 0.25});
  const auto specs = enumerate_stationary(gamma, 2);
  std::set<double> values;
  for (const auto& s : specs) {
    const auto cert = classify(ObjectiveKind::elem_sym(1), gamma, s);
    values.insert(cert.f_value);
  }
  CHECK(values == std::set<double>{5.0 / 2.0, 17.0 / 8.0, 5.0 / 8.0});
}

TEST_CASE("classify: certificates agree with finite differences") {
  Rng rng(3);
  for (int rep = 0; rep < 6; ++rep) {
    const std::size_t n = 5, p = 2;
    const Gamma gamma(oracles::random_descending(n, rng));
    for (const auto& spec : enumerate_stationary(gamma, p)) {
      const Matrix xs = build_stationary_point(spec);

      // Det: ambient second difference along the certificate direction
      // equals twice the quadform (Taylor coefficient convention).
      const auto cert_det = classify(ObjectiveKind::det(), gamma, spec);
      if (cert_det.ascent) {
        Matrix delta(n, p);
        delta(cert_det.ascent->row, cert_det.ascent->col) = 1.0;
        const double fd = oracles::fd_second_directional(
            [&](const Matrix& x) { return eval_f(ObjectiveKind::det(), gamma, x); }, xs,
            delta, 1e-4);
        CHECK(cert_det.ascent->quadform == doctest::Approx(0.5 * fd).epsilon(1e-5));
        CHECK(cert_det.ascent->quadform > 0.0);
      }

      // s_q: the certificate is the constrained curvature; compare with the
      // second difference along the feasible rotation curve.
      for (std::size_t q = 1; q <= p; ++q) {
        const auto kind = ObjectiveKind::elem_sym(q);
        const auto cert = classify(kind, gamma, spec);
        for (const auto& dir : {cert.ascent, cert.descent}) {
          if (!dir) {
            continue;
          }
          const std::size_t i = dir->row;
          const std::size_t j = dir->col;
          const double h = 1e-4;
          auto f_rot = [&](double theta) {
            Matrix x = xs;
            for (std::size_t r = 0; r < n; ++r) {
              x(r, j) = std::cos(theta) * xs(r, j);
            }
            x(i, j) += std::sin(theta);
            return eval_f(kind, gamma, x);
          };
          const double fd =
              (f_rot(h) - 2.0 * f_rot(0.0) + f_rot(-h)) / (h * h);
          CHECK(dir->quadform == doctest::Approx(0.5 * fd).epsilon(1e-5));
        }
      }
    }
  }
}

TEST_CASE("classify: verdicts match finite-difference curvature signs everywhere") {
  // All specs for n <= 6, p <= 3, q in {1..p}: the closed-form verdict must
  // agree with the signs of the feasible curvatures over every free (i, j)
  // pair and every within-support rotation.
  Rng rng(13);
  for (std::size_t n = 4; n <= 6; ++n) {
    for (std::size_t p = 1; p <= 3; ++p) {
      const Gamma gamma(oracles::random_descending(n, rng));
      const std::vector<double> g(gamma.values().begin(), gamma.values().end());
      for (const auto& spec : enumerate_stationary(gamma, p)) {
        const auto gt = spec.gamma_tilde();
        std::vector<bool> used(n, false);
        {
          std::size_t col = 0;
          for (const auto& b : spec.blocks) {
            for (std::size_t d = 0; d < b.dim; ++d) {
              used[b.row_begin + d] = true;
            }
            col += b.dim;
          }
        }
        bool any_up = false, any_down = false;
        for (std::size_t i = 0; i < n; ++i) {
          if (used[i]) {
            continue;
          }
          for (std::size_t j = 0; j < p; ++j) {
            if (g[i] > gt[j] + 1e-12) {
              any_up = true;
            }
            if (g[i] < gt[j] - 1e-12) {
              any_down = true;
            }
          }
        }
        for (std::size_t q = 1; q <= p; ++q) {
          const auto cert = classify(ObjectiveKind::elem_sym(q), gamma, spec);
          switch (cert.verdict) {
            case Verdict::GlobalMax:
              CHECK_FALSE(any_up);
              break;
            case Verdict::GlobalMin:
              CHECK_FALSE(any_down);
              break;
            case Verdict::StrictSaddle:
              CHECK(any_up);
              CHECK(any_down);
              CHECK(cert.ascent.has_value());
              CHECK(cert.descent.has_value());
              break;
          }
        }
      }
    }
  }
}

TEST_CASE("classify: extremal verdicts agree with tangent curvature signs") {
  // Every tangent second derivative at the global max must be <= 0, at the
  // global min >= 0; certificates handle the saddle side.
  Rng rng(47);
  for (std::size_t n = 4; n <= 6; ++n) {
    for (std::size_t p = 1; p <= 3; ++p) {
      const Gamma gamma(oracles::random_descending(n, rng));
      for (const auto& spec : enumerate_stationary(gamma, p)) {
        for (std::size_t q = 1; q <= p; ++q) {
          const auto kind = ObjectiveKind::elem_sym(q);
          const auto cert = classify(kind, gamma, spec);
          if (cert.verdict == Verdict::StrictSaddle) {
            continue;
          }
          const Matrix xs = build_stationary_point(spec);
          for (int probe = 0; probe < 30; ++probe) {
            Matrix d = rng.gaussian(n, p);
            const Matrix xtd = transpose_times(xs, d);
            Matrix sym(p, p);
            for (std::size_t i = 0; i < p; ++i) {
              for (std::size_t j = 0; j < p; ++j) {
                sym(i, j) = 0.5 * (xtd(i, j) + xtd(j, i));
              }
            }
            Matrix tangent = d - xs * sym;
            const double nrm = frobenius_norm(tangent);
            if (nrm < 1e-12) {
              continue;
            }
            tangent *= 1.0 / nrm;
            const double h = 1e-4;
            auto f_curve = [&](double t) {
              return eval_f(kind, gamma, thin_qr(xs + t * tangent).q);
            };
            const double fd = (f_curve(h) - 2.0 * f_curve(0.0) + f_curve(-h)) / (h * h);
            if (cert.verdict == Verdict::GlobalMax) {
              CHECK(fd <= 1e-6);
            } else {
              CHECK(fd >= -1e-6);
            }
          }
        }
      }
    }
  }
}

TEST_CASE("rotation_second_derivative: closed form vs finite differences") {
  // sigma_{i0} = 2, sigma_{i1} = 1 gives 6.
  const Gamma gamma({4.0, 1.0});
  StationarySpec spec;
  spec.n = 2;
  spec.p = 1;
  spec.blocks.push_back(StationarySpec::Block{1.0, 1, 2, 1});
  CHECK(rotation_second_derivative(gamma, 0, 1, spec) == doctest::Approx(6.0));

  // Equal values: zero curvature. Row 1 is an unused copy of the selected
  // eigenvalue, free in the canonical representative.
  const Gamma flat({4.0, 4.0});
  StationarySpec fspec;
  fspec.n = 2;
  fspec.p = 1;
  fspec.blocks.push_back(StationarySpec::Block{4.0, 0, 2, 1});
  CHECK(rotation_second_derivative(flat, 1, 0, fspec) == 0.0);
  // A used row is rejected.
  CHECK_THROWS_AS(rotation_second_derivative(flat, 0, 1, fspec), ContractViolation);

  Rng rng(19);
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t n = 5, p = 2;
    const Gamma g(oracles::random_descending(n, rng));
    const auto specs = enumerate_stationary(g, p);
    for (const auto& spec2 : specs) {
      const Matrix xs = build_stationary_point(spec2);
      const auto support = spec2.support_rows();
      for (std::size_t i0 = 0; i0 < n; ++i0) {
        if (std::find(support.begin(), support.end(), i0) != support.end()) {
          continue;
        }
        // Rotate the first column (holding the first block value).
        const std::size_t i1 = spec2.blocks[0].row_begin;
        const double closed = rotation_second_derivative(g, i0, i1, spec2);
        const double f0 = eval_f(ObjectiveKind::det(), g, xs);
        auto f_theta = [&](double theta) {
          Matrix x = xs;
          for (std::size_t r = 0; r < n; ++r) {
            x(r, 0) = std::cos(theta) * xs(r, 0);
          }
          x(i0, 0) += std::sin(theta);
          return eval_f(ObjectiveKind::det(), g, x) / f0;
        };
        const double h = 1e-4;
        const double fd = (f_theta(h) - 2.0 * f_theta(0.0) + f_theta(-h)) / (h * h);
        if (std::abs(closed) > 1e-6) {
          CHECK(closed == doctest::Approx(fd).epsilon(1e-5));
        } else {
          CHECK(std::abs(closed - fd) < 1e-5);
        }
      }
    }
  }
}

TEST_CASE("hessian_quadform_stationary: worked example and bound equality") {
  const Gamma gamma({4.0, 1.0, 0.25});
  // Selection {1, 3}: rows 0 and 2.
  StationarySpec spec;
  spec.n = 3;
  spec.p = 2;
  spec.blocks.push_back(StationarySpec::Block{4.0, 0, 1, 1});
  spec.blocks.push_back(StationarySpec::Block{0.25, 2, 3, 1});

  Matrix delta(3, 2);
  delta(1, 1) = 1.0; // row of gamma = 1, column of the 0.25 block
  const double quad = hessian_quadform_stationary(ObjectiveKind::det(), gamma, spec, delta);
  CHECK(quad == doctest::Approx(3.0));

  // Spectral-gap bound: f_det(X_s) (sigma_p^2/sigma_{p+1}^2 - 1) ||Delta||^2 = 3.
  const double bound = 1.0 * (1.0 / 0.25 - 1.0) * 1.0;
  CHECK(quad >= bound - 1e-12);

  // Zero direction, zero value.
  CHECK(hessian_quadform_stationary(ObjectiveKind::det(), gamma, spec, Matrix(3, 2)) == 0.0);

  // Support overlap is rejected.
  Matrix overlap(3, 2);
  overlap(0, 0) = 1.0;
  CHECK_THROWS_AS(hessian_quadform_stationary(ObjectiveKind::det(), gamma, spec, overlap),
                  UnsupportedDirection);
}

TEST_CASE("hessian_quadform_stationary: matches finite differences for all kinds") {
  Rng rng(23);
  for (int rep = 0; rep < 4; ++rep) {
    const std::size_t n = 5;
    for (std::size_t p = 1; p <= 3; ++p) {
      const Gamma gamma(oracles::random_descending(n, rng));
      for (const auto& spec : enumerate_stationary(gamma, p)) {
        const Matrix xs = build_stationary_point(spec);
        std::vector<bool> in_support(n, false);
        for (std::size_t i : spec.support_rows()) {
          in_support[i] = true;
        }
        // Random direction on the complement rows.
        Matrix delta(n, p);
        bool nonzero = false;
        for (std::size_t i = 0; i < n; ++i) {
          if (in_support[i]) {
            continue;
          }
          for (std::size_t j = 0; j < p; ++j) {
            delta(i, j) = rng.normal();
            nonzero = true;
          }
        }
        if (!nonzero) {
          continue;
        }
        std::vector<ObjectiveKind> kinds{ObjectiveKind::det(), ObjectiveKind::logdet(),
                                         ObjectiveKind::trace()};
        for (std::size_t q = 1; q <= p; ++q) {
          kinds.push_back(ObjectiveKind::elem_sym(q));
        }
        kinds.push_back(ObjectiveKind::conic(Weights{[&] {
          std::vector<double> w(p + 1);
          for (auto& v : w) {
            v = rng.uniform();
          }
          return w;
        }()}));
        for (const auto& kind : kinds) {
          const double quad = hessian_quadform_stationary(kind, gamma, spec, delta);
          const double fd = oracles::fd_second_directional(
              [&](const Matrix& x) { return eval_f(kind, gamma, x); }, xs, delta, 1e-4);
          CHECK(quad == doctest::Approx(0.5 * fd).epsilon(1e-5));
        }
      }
    }
  }
}

TEST_CASE("classify: degenerate gap leaves the bound inapplicable") {
  // sigma_p = sigma_{p+1}: verdicts and certificates still come out, but no
  // quantitative bound is claimed.
  const Gamma gamma({4.0, 2.0, 2.0, 1.0});
  for (const auto& spec : enumerate_stationary(gamma, 2)) {
    const auto cert = classify(ObjectiveKind::det(), gamma, spec);
    CHECK_FALSE(cert.bound.has_value());
    if (cert.verdict == Verdict::StrictSaddle) {
      CHECK(cert.ascent.has_value());
      CHECK(cert.descent.has_value());
    }
  }
}

TEST_CASE("landscape values enumerate exactly for s_q") {
  Rng rng(29);
  const std::size_t n = 6, p = 3;
  const Gamma gamma(oracles::random_descending(n, rng));
  const std::vector<double> g(gamma.values().begin(), gamma.values().end());
  for (std::size_t q = 1; q <= p; ++q) {
    std::multiset<double> expected;
    // Brute force over all p-subsets.
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        for (std::size_t c = b + 1; c < n; ++c) {
          const std::vector<double> sel{g[a], g[b], g[c]};
          expected.insert(oracles::elem_sym_bruteforce(sel, q) / binomial(p, q));
        }
      }
    }
    std::multiset<double> got;
    for (const auto& spec : enumerate_stationary(gamma, p)) {
      got.insert(classify(ObjectiveKind::elem_sym(q), gamma, spec).f_value);
    }
    REQUIRE(expected.size() == got.size());
    auto it_e = expected.begin();
    auto it_g = got.begin();
    for (; it_e != expected.end(); ++it_e, ++it_g) {
      CHECK(*it_g == doctest::Approx(*it_e).epsilon(1e-12));
    }
  }
}

TEST_CASE("probe_no_spurious_optima: distinct spectrum, all kinds") {
  const Gamma gamma({2.2, 1.4, 0.9, 0.5, 0.3});
  std::vector<ObjectiveKind> kinds{ObjectiveKind::trace(), ObjectiveKind::det(),
                                   ObjectiveKind::logdet(), ObjectiveKind::elem_sym(2)};
  Rng rng(31);
  std::vector<double> w(3);
  for (auto& v : w) {
    v = 0.1 + rng.uniform();
  }
  kinds.push_back(ObjectiveKind::conic(Weights{w}));
  for (const auto& kind : kinds) {
    const auto report = probe_no_spurious_optima(kind, gamma, 2, 400, 1e-3, 7);
    CHECK(report.all_ok);
    int saddles = 0;
    for (const auto& e : report.entries) {
      if (e.verdict == Verdict::StrictSaddle) {
        ++saddles;
        CHECK(e.n_increase > 0);
        CHECK(e.n_decrease > 0);
      }
    }
    CHECK(saddles == static_cast<int>(report.entries.size()) - 2);
  }
}

TEST_CASE("probe_no_spurious_optima: p = n and degenerate top pair") {
  // p = n: the single subspace is trivially the global max.
  const Gamma full({2.0, 1.0});
  const auto rep = probe_no_spurious_optima(ObjectiveKind::det(), full, 2, 100, 1e-3, 1);
  REQUIRE(rep.entries.size() == 1);
  CHECK(rep.entries[0].verdict == Verdict::GlobalMax);
  CHECK(rep.all_ok);

  // Repeated top value, p = 1: both selections are global maxima.
  const Gamma twin({3.0, 3.0, 1.0});
  const auto rep2 = probe_no_spurious_optima(ObjectiveKind::det(), twin, 1, 200, 1e-3, 2);
  int maxima = 0;
  for (const auto& e : rep2.entries) {
    if (e.verdict == Verdict::GlobalMax) {
      ++maxima;
      CHECK(e.f_value == doctest::Approx(3.0));
    }
  }
  CHECK(maxima == 1); // one block spec covers the whole repeated eigenspace
  CHECK(rep2.all_ok);
}

TEST_CASE("landscape_report_json: structure and verdict counts") {
  const Gamma gamma({4.0, 1.0, 0.25});
  const auto text = landscape_report_json(ObjectiveKind::det(), gamma, 2);
  const auto doc = nlohmann::json::parse(text);
  REQUIRE(doc.at("stationary_points").size() == 3);
  int max_count = 0;
  for (const auto& e : doc.at("stationary_points")) {
    if (e.at("verdict") == "global_max") {
      ++max_count;
      CHECK(e.at("f_value").get<double>() == doctest::Approx(4.0));
      CHECK(e.at("indices") == nlohmann::json::array({1, 2}));
    }
  }
  CHECK(max_count == 1);
}
