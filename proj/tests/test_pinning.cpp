// Copyright 2026 The pinspace Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <set>

#include "pin/io.hpp"
#include "pin/pinning.hpp"
#include "test_helpers.hpp"

using namespace pin;

namespace {

Wavefunction load_ex38() {
  return io::wavefunction_from_json(
      io::load_json_file(std::string(PINSPACE_DATA_DIR) + "/ex38_state.json"));
}

FaceSpec bd_equality_face() { return FaceSpec{{0, 1, 2}}; }
FaceSpec bd_full_face() { return FaceSpec{{0, 1, 2, 3}}; }

const std::set<Configuration> kEight{
    Configuration{1, 2, 3}, Configuration{1, 2, 4}, Configuration{1, 3, 5},
    Configuration{1, 4, 5}, Configuration{2, 3, 6}, Configuration{2, 4, 6},
    Configuration{3, 5, 6}, Configuration{4, 5, 6}};

const std::set<Configuration> kNine38{
    Configuration{1, 2, 3}, Configuration{1, 5, 6}, Configuration{1, 3, 8},
    Configuration{2, 5, 7}, Configuration{5, 7, 8}, Configuration{2, 4, 8},
    Configuration{1, 4, 7}, Configuration{2, 6, 7}, Configuration{6, 7, 8}};

}  // namespace

TEST_CASE("natural-orbital induced operators scale by exact integer eigenvalues") {
  const ConstraintCatalog cat = builtin_catalog(Setting(3, 6));
  const LinearConstraint& d36 = cat.constraints[3];

  Wavefunction hf((Setting(3, 6)));
  hf.amplitudes[Configuration{1, 2, 3}] = 1.0;
  CHECK(lhat_apply(hf, d36).norm() == 0.0);  // eigenvalue 2 - 1 - 1 - 0 = 0

  Wavefunction excited((Setting(3, 6)));
  excited.amplitudes[Configuration{1, 2, 4}] = Complex(0.3, -0.4);
  const Wavefunction scaled = lhat_apply(excited, d36);
  CHECK(scaled.amplitude(Configuration{1, 2, 4}) == Complex(-0.3, 0.4));  // eigenvalue -1

  const LinearConstraint gpc38 = builtin_catalog(Setting(3, 8)).constraints.at(0);
  Wavefunction w38((Setting(3, 8)));
  w38.amplitudes[Configuration{1, 3, 8}] = 1.0;
  CHECK(lhat_apply(w38, gpc38).norm() == 0.0);  // 9 - 19 + 21 - 11 = 0

  CHECK_THROWS_AS(lhat_apply(hf, gpc38), ShapeError);

  SUBCASE("scaling factors match integer vertex evaluation bit-exactly") {
    auto rng = test::make_rng(5);
    const Wavefunction psi = test::random_state(Setting(3, 6), rng);
    const Wavefunction out = lhat_apply(psi, d36);
    for (const auto& [c, a] : psi.amplitudes) {
      const auto expected = static_cast<double>(evaluate_at_vertex(d36, c)) * a;
      CHECK(out.amplitude(c) == expected);
    }
  }
}

TEST_CASE("selection rules carve out the active configurations") {
  const Setting s36(3, 6);
  const ConstraintCatalog cat36 = builtin_catalog(s36);

  SUBCASE("equality face keeps eight of twenty") {
    const ActiveSpace space = selection_rule_configs(bd_equality_face(), cat36, s36);
    CHECK(std::set<Configuration>(space.configurations.begin(), space.configurations.end()) ==
          kEight);
    CHECK_FALSE(space.empty_warning);
  }

  SUBCASE("full face keeps three") {
    const ActiveSpace space = selection_rule_configs(bd_full_face(), cat36, s36);
    REQUIRE(space.configurations.size() == 3);
    CHECK(space.configurations[0] == Configuration{1, 2, 3});
    CHECK(space.configurations[1] == Configuration{1, 4, 5});
    CHECK(space.configurations[2] == Configuration{2, 4, 6});
  }

  SUBCASE("the (3,8) inequality keeps nine of fifty-six") {
    const Setting s38(3, 8);
    const ActiveSpace space =
        selection_rule_configs(FaceSpec{{0}}, builtin_catalog(s38), s38);
    CHECK(std::set<Configuration>(space.configurations.begin(), space.configurations.end()) ==
          kNine38);
  }

  SUBCASE("an unsatisfiable face returns empty with a warning") {
    ConstraintCatalog synthetic{s36, {}, {}, false};
    LinearConstraint unreachable;
    unreachable.kappa0 = 5;
    unreachable.kappa = IntVector::Zero(6);
    unreachable.kappa(0) = -1;
    synthetic.constraints.push_back(unreachable);
    synthetic.provenance.push_back("test");
    const ActiveSpace space = selection_rule_configs(FaceSpec{{0}}, synthetic, s36);
    CHECK(space.configurations.empty());
    CHECK(space.empty_warning);
  }

  SUBCASE("face indices outside the catalog are rejected") {
    CHECK_THROWS_AS(selection_rule_configs(FaceSpec{{7}}, cat36, s36), IndexError);
  }
}

TEST_CASE("frozen-core / empty-virtual biconditional") {
  const Setting s(3, 6);

  Wavefunction hf(s);
  hf.amplitudes[Configuration{1, 2, 3}] = 1.0;
  const CasCheck full = active_space_check(hf, 3, 3);
  CHECK(full.value == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(full.residual == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(full.holds);

  // (|123> + |124>)/sqrt(2) is a disguised single determinant: its natural
  // occupation numbers are (1,1,1,0,0,0), so every Pauli constraint with
  // r <= 3, s <= 3 is saturated with vanishing residual.
  Wavefunction disguised(s);
  disguised.amplitudes[Configuration{1, 2, 3}] = 1.0 / std::sqrt(2.0);
  disguised.amplitudes[Configuration{1, 2, 4}] = 1.0 / std::sqrt(2.0);
  for (const auto& [r, q] : {std::pair{2, 2}, std::pair{3, 0}}) {
    const CasCheck check = active_space_check(disguised, r, q);
    CHECK(check.value == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(check.residual == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(check.holds);
  }

  // a genuinely correlated pair: n = (1, 1/2, 1/2, 1/2, 1/2, 0)
  Wavefunction corr(s);
  corr.amplitudes[Configuration{1, 2, 3}] = 1.0 / std::sqrt(2.0);
  corr.amplitudes[Configuration{1, 4, 5}] = 1.0 / std::sqrt(2.0);
  const CasCheck open = active_space_check(corr, 3, 0);
  CHECK(open.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(open.residual == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(open.holds);  // both sides positive

  const CasCheck frozen1 = active_space_check(corr, 1, 1);
  CHECK(frozen1.value == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(frozen1.residual == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(frozen1.holds);

  CHECK_THROWS_AS(active_space_check(hf, 5, 0, 1e-8), std::invalid_argument);
}

TEST_CASE("constructed CAS states satisfy both sides of the biconditional") {
  auto rng = test::make_rng(83);
  const Setting s(4, 8);
  std::vector<Configuration> cas;
  for (const Configuration& c : build_basis(s)) {
    if (c.contains(1) && !c.contains(7) && !c.contains(8)) cas.push_back(c);
  }
  REQUIRE(cas.size() == 10);
  for (int rep = 0; rep < 20; ++rep) {
    const Wavefunction psi = test::random_state_on(s, cas, rng);
    const CasCheck check = active_space_check(psi, 1, 2);
    CHECK(check.value <= 1e-10);
    CHECK(check.residual <= 1e-10);
    CHECK(check.holds);
  }
  for (int rep = 0; rep < 20; ++rep) {
    const CasCheck check = active_space_check(test::random_state(s, rng), 1, 2);
    CHECK(check.value > 1e-3);
    CHECK(check.residual > 1e-3);
    CHECK(check.holds);
  }
}

TEST_CASE("pinned states lie in the zero eigenspace") {
  const ConstraintCatalog cat = builtin_catalog(Setting(3, 6));
  const LinearConstraint& d36 = cat.constraints[3];

  SUBCASE("a hand-picked ordered pinned state") {
    Wavefunction psi((Setting(3, 6)));
    psi.amplitudes[Configuration{1, 2, 3}] = 0.8;
    psi.amplitudes[Configuration{1, 4, 5}] = 0.5;
    psi.amplitudes[Configuration{2, 4, 6}] = std::sqrt(0.11);
    CHECK(verify_pinning_structure(psi, d36) <= 1e-10);
  }

  SUBCASE("the single determinant, despite its degenerate spectrum") {
    Wavefunction hf((Setting(3, 6)));
    hf.amplitudes[Configuration{1, 2, 3}] = 1.0;
    CHECK(verify_pinning_structure(hf, d36) == 0.0);
  }

  SUBCASE("sampled ordered pinned states") {
    auto rng = test::make_rng(89);
    for (int rep = 0; rep < 100; ++rep) {
      const Wavefunction psi = test::pinned_bd_state(rng);
      const Vector n = natural_basis(one_rdm(psi)).nons;
      CHECK(evaluate(d36, n) <= 1e-10);
      CHECK(verify_pinning_structure(psi, d36) <= 1e-10);
    }
  }

  SUBCASE("unpinned states are rejected") {
    auto rng = test::make_rng(97);
    const Wavefunction psi = test::random_state(Setting(3, 6), rng);
    CHECK_THROWS_AS(verify_pinning_structure(psi, d36), NotPinnedError);
  }
}

TEST_CASE("converse selection rule finds a consistent relabeling") {
  SUBCASE("reference (3,8) superposition") {
    const Wavefunction psi = load_ex38().normalized();
    const ConstraintCatalog cat = builtin_catalog(Setting(3, 8));
    const PermutationResult result = find_consistent_permutation(psi, FaceSpec{{0}}, cat);

    CHECK(result.permutation == std::vector<int>{4, 1, 5, 3, 6, 8, 7, 2});

    Vector printed(8);
    printed << 0.3569, 0.9418, 0.3215, 0.3914, 0.2696, 0.0527, 0.2521, 0.4140;
    CHECK((result.permuted_nons - printed).cwiseAbs().maxCoeff() < 1e-3);

    CHECK(std::abs(evaluate(cat.constraints[0], result.permuted_nons)) <= 1e-9);
    for (const Configuration& c : result.support) {
      CHECK(evaluate_at_vertex(cat.constraints[0], c) == 0);
      CHECK(kNine38.count(c) == 1);
    }
  }

  SUBCASE("a self-consistent pinned state needs no relabeling") {
    auto rng = test::make_rng(101);
    const Wavefunction psi = test::pinned_bd_state(rng);
    const ConstraintCatalog cat = builtin_catalog(Setting(3, 6));
    const PermutationResult result = find_consistent_permutation(psi, bd_full_face(), cat);
    std::vector<int> identity(6);
    std::iota(identity.begin(), identity.end(), 1);
    CHECK(result.permutation == identity);
  }

  SUBCASE("superpositions over the equality-face configurations") {
    auto rng = test::make_rng(103);
    const Setting s(3, 6);
    const ConstraintCatalog cat = builtin_catalog(s);
    const std::vector<Configuration> eight(kEight.begin(), kEight.end());
    for (int rep = 0; rep < 25; ++rep) {
      const Wavefunction psi = test::random_state_on(s, eight, rng, true);
      const PermutationResult result =
          find_consistent_permutation(psi, bd_equality_face(), cat);
      for (const Configuration& c : result.support) {
        for (int k : bd_equality_face().indices) {
          CHECK(evaluate_at_vertex(cat.constraints[k], c) == 0);
        }
      }
      for (int k : bd_equality_face().indices) {
        CHECK(std::abs(evaluate(cat.constraints[k], result.permuted_nons)) <= 1e-9);
      }
    }
  }

  SUBCASE("states outside the face's span have no relabeling") {
    auto rng = test::make_rng(107);
    const Wavefunction psi = test::random_state(Setting(3, 6), rng);
    const ConstraintCatalog cat = builtin_catalog(Setting(3, 6));
    CHECK_THROWS_AS(find_consistent_permutation(psi, bd_full_face(), cat),
                    NoPermutationFoundError);
  }
}

TEST_CASE("degenerate n3 = n4 rotation") {
  auto rng = test::make_rng(109);

  const auto make_six_term = [&rng](double* theta_out = nullptr) {
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const double split = 0.5 + 0.49 * uniform(rng);
    Wavefunction psi((Setting(3, 6)));
    psi.amplitudes[Configuration{1, 2, 3}] = std::sqrt(0.5);
    psi.amplitudes[Configuration{1, 4, 5}] = std::sqrt(0.5 * split);
    psi.amplitudes[Configuration{2, 4, 6}] = std::sqrt(0.5 * (1.0 - split));
    const double theta = 0.2 + uniform(rng);
    Matrix u = Matrix::Identity(6, 6);
    u(2, 2) = std::cos(theta);
    u(3, 3) = std::cos(theta);
    u(2, 3) = -std::sin(theta);
    u(3, 2) = std::sin(theta);
    if (theta_out) *theta_out = theta;
    return apply_orbital_rotation(psi, OrbitalUnitary(u));
  };

  SUBCASE("recovers a three-term form and matches the closed-form coefficients") {
    for (int rep = 0; rep < 20; ++rep) {
      const Wavefunction six = make_six_term();
      const Complex c123 = six.amplitude(Configuration{1, 2, 3});
      const Complex c124 = six.amplitude(Configuration{1, 2, 4});
      const Complex c135 = six.amplitude(Configuration{1, 3, 5});
      const Complex c145 = six.amplitude(Configuration{1, 4, 5});
      const Complex c236 = six.amplitude(Configuration{2, 3, 6});
      const Complex c246 = six.amplitude(Configuration{2, 4, 6});
      const double w = std::sqrt(std::norm(c123) + std::norm(c124));

      const BdRotationResult rotated = bd_degenerate_rotation(six);
      CHECK(rotated.state.norm() == doctest::Approx(six.norm()).epsilon(1e-12));

      const std::set<Configuration> three{Configuration{1, 2, 3}, Configuration{1, 4, 5},
                                          Configuration{2, 4, 6}};
      for (const auto& c : support(rotated.state, 1e-10)) CHECK(three.count(c) == 1);

      CHECK(std::abs(rotated.state.amplitude(Configuration{1, 2, 3}) - Complex(w)) < 1e-12);
      CHECK(std::abs(rotated.state.amplitude(Configuration{1, 4, 5}) -
                     (c124 * c135 - c123 * c145) / w) < 1e-12);
      CHECK(std::abs(rotated.state.amplitude(Configuration{2, 4, 6}) -
                     (c124 * c236 - c123 * c246) / w) < 1e-12);
    }
  }

  SUBCASE("c124 = 0 leaves the three-term state in place up to a phase of |4>") {
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const double split = 0.7;
    Wavefunction psi((Setting(3, 6)));
    psi.amplitudes[Configuration{1, 2, 3}] = std::sqrt(0.5);
    psi.amplitudes[Configuration{1, 4, 5}] = std::sqrt(0.5 * split);
    psi.amplitudes[Configuration{2, 4, 6}] = std::sqrt(0.5 * (1.0 - split));
    const BdRotationResult rotated = bd_degenerate_rotation(psi);
    CHECK(std::abs(rotated.state.amplitude(Configuration{1, 2, 3}) -
                   psi.amplitude(Configuration{1, 2, 3})) < 1e-12);
    CHECK(std::abs(std::abs(rotated.state.amplitude(Configuration{1, 4, 5})) -
                   std::abs(psi.amplitude(Configuration{1, 4, 5}))) < 1e-12);
    CHECK(std::abs(std::abs(rotated.state.amplitude(Configuration{2, 4, 6})) -
                   std::abs(psi.amplitude(Configuration{2, 4, 6}))) < 1e-12);
  }

  SUBCASE("preconditions are enforced") {
    auto rng2 = test::make_rng(113);
    const Wavefunction generic = test::random_state(Setting(3, 6), rng2);
    CHECK_THROWS_AS(bd_degenerate_rotation(generic), std::invalid_argument);

    const Wavefunction nondeg = test::pinned_bd_state(rng2);  // n3 > 1/2 > n4
    CHECK_THROWS_AS(bd_degenerate_rotation(nondeg), std::invalid_argument);

    Wavefunction no_weight((Setting(3, 6)));
    no_weight.amplitudes[Configuration{1, 3, 5}] = std::sqrt(0.5);
    no_weight.amplitudes[Configuration{1, 4, 5}] = std::sqrt(0.5);
    CHECK_THROWS_AS(bd_degenerate_rotation(no_weight), std::invalid_argument);
  }
}

TEST_CASE("excitation-weight bound on random states") {
  auto rng = test::make_rng(127);
  const ConstraintCatalog cat = builtin_catalog(Setting(3, 6));
  int tested = 0;
  for (int rep = 0; rep < 300; ++rep) {
    const NaturalExpansion no = to_natural_expansion(test::random_state(Setting(3, 6), rng));
    if (no.basis.nons(2) - no.basis.nons(3) <= 1e-3) continue;
    const BdWeightBound bound = bd_weight_bound(no.state);
    CHECK(bound.lhs <= bound.rhs + 1e-9);
    ++tested;
  }
  CHECK(tested > 250);  // the gate rarely rejects
}

TEST_CASE("pinning with an n4 = n5 degeneracy forces the sixth orbital empty") {
  auto rng = test::make_rng(131);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const ConstraintCatalog cat = builtin_catalog(Setting(3, 6));
  for (int rep = 0; rep < 50; ++rep) {
    // pinned with c246 = 0 gives n4 = n5 = |c145|^2 and n3 - n4 > 0
    const double w1 = 0.55 + 0.4 * uniform(rng);
    Wavefunction psi((Setting(3, 6)));
    psi.amplitudes[Configuration{1, 2, 3}] = std::sqrt(w1);
    psi.amplitudes[Configuration{1, 4, 5}] = std::sqrt(1.0 - w1);
    const PinningReport report = analyze(psi, cat);
    const int last = static_cast<int>(report.constraints.size()) - 1;
    REQUIRE(report.constraints[last].saturated);
    REQUIRE(std::abs(report.nons(3) - report.nons(4)) <= 1e-8);
    REQUIRE(report.nons(2) - report.nons(3) > 1e-8);
    CHECK(report.nons(5) <= 1e-8);
    bool has246 = false;
    for (const Configuration& c : report.support) has246 |= (c == Configuration{2, 4, 6});
    CHECK_FALSE(has246);
  }
}

TEST_CASE("two-fermion states saturate their pairing equalities structurally") {
  auto rng = test::make_rng(137);
  for (const Setting& s : {Setting(2, 4), Setting(2, 6)}) {
    const ConstraintCatalog cat = builtin_catalog(s);
    for (int rep = 0; rep < 20; ++rep) {
      const PinningReport report = analyze(test::random_state(s, rng), cat);
      for (const ConstraintReport& cr : report.constraints) {
        CHECK(cr.saturated);
        REQUIRE(cr.residual.has_value());
        CHECK(*cr.residual <= 1e-8);
      }
      CHECK_FALSE(report.degenerate_unresolved);
      // the natural expansion is a sum of disjoint pairs
      CHECK(static_cast<int>(report.support.size()) <= s.num_orbitals / 2);
    }
  }
}

TEST_CASE("aggregate pinning reports") {
  const ConstraintCatalog cat = builtin_catalog(Setting(3, 6));

  SUBCASE("the lowest configuration saturates everything") {
    Wavefunction hf((Setting(3, 6)));
    hf.amplitudes[Configuration{1, 2, 3}] = 1.0;
    const PinningReport report = analyze(hf, cat);
    REQUIRE(report.constraints.size() == 4);
    for (const ConstraintReport& cr : report.constraints) {
      CHECK(cr.saturated);
      CHECK(cr.quasipinned);
      REQUIRE(cr.residual.has_value());
      CHECK(*cr.residual <= 1e-12);
    }
    CHECK(report.support.size() == 1);
    CHECK_FALSE(report.degenerate_unresolved);
  }

  SUBCASE("the reference (3,8) state is far from the facet in ordered form") {
    const Wavefunction raw = load_ex38();
    const ConstraintCatalog cat38 = builtin_catalog(Setting(3, 8));
    CHECK_THROWS_AS(analyze(raw, cat38), NormalizationError);

    const FaceSpec face{{0}};
    const PinningReport report = analyze(raw, cat38, Tolerances{}, true, &face);
    CHECK(std::abs(report.input_norm - 1.000259) < 1e-4);
    REQUIRE(report.constraints.size() == 1);
    CHECK(std::abs(report.constraints[0].value - 1.0325) < 1e-3);
    CHECK_FALSE(report.constraints[0].saturated);
    CHECK_FALSE(report.constraints[0].residual.has_value());
    REQUIRE(report.permutation.has_value());
    CHECK(*report.permutation == std::vector<int>{4, 1, 5, 3, 6, 8, 7, 2});
  }

  SUBCASE("catalog and state settings must agree") {
    Wavefunction hf((Setting(3, 8)));
    hf.amplitudes[Configuration{1, 2, 3}] = 1.0;
    CHECK_THROWS_AS(analyze(hf, cat), ShapeError);
  }
}
