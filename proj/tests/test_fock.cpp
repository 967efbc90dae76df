// Copyright 2026 The pinspace Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "pin/fock.hpp"
#include "test_helpers.hpp"

using namespace pin;

TEST_CASE("basis enumeration is lexicographic and complete") {
  const auto basis = build_basis(Setting(3, 6));
  REQUIRE(basis.size() == 20);
  CHECK(basis.front() == Configuration{1, 2, 3});
  CHECK(basis.back() == Configuration{4, 5, 6});
  CHECK(std::is_sorted(basis.begin(), basis.end()));
  CHECK(std::set<Configuration>(basis.begin(), basis.end()).size() == 20);

  CHECK(build_basis(Setting(3, 8)).size() == 56);

  const auto single = build_basis(Setting(1, 1));
  REQUIRE(single.size() == 1);
  CHECK(single[0] == Configuration{1});

  CHECK_THROWS_AS(Setting(4, 3), SettingError);
  CHECK(Setting(4, 10).basis_size() == 210);
}

TEST_CASE("creation and annihilation signs") {
  const Configuration c13{1, 3};
  auto r = apply_creation(c13, 2, 6);
  REQUIRE(r.has_value());
  CHECK(r->config == Configuration{1, 2, 3});
  CHECK(r->sign == -1);  // one occupied index below 2

  r = apply_creation(Configuration{2, 3}, 1, 6);
  REQUIRE(r.has_value());
  CHECK(r->config == Configuration{1, 2, 3});
  CHECK(r->sign == 1);

  CHECK_FALSE(apply_creation(c13, 3, 6).has_value());  // double occupation
  CHECK_THROWS_AS(apply_creation(c13, 7, 6), IndexError);
  CHECK_THROWS_AS(apply_creation(c13, 0, 6), IndexError);

  const Configuration c123{1, 2, 3};
  auto a = apply_annihilation(c123, 1, 6);
  REQUIRE(a.has_value());
  CHECK(a->config == Configuration{2, 3});
  CHECK(a->sign == 1);

  a = apply_annihilation(c123, 3, 6);
  REQUIRE(a.has_value());
  CHECK(a->config == Configuration{1, 2});
  CHECK(a->sign == 1);  // two occupied indices below 3

  CHECK_FALSE(apply_annihilation(c123, 4, 6).has_value());

  // vacuum handling
  auto v = apply_creation(Configuration{}, 3, 6);
  REQUIRE(v.has_value());
  CHECK(v->config == Configuration{3});
  CHECK(v->sign == 1);
}

TEST_CASE("creation operators anticommute") {
  // f+_p f+_q = -f+_q f+_p on every occupation pattern of small spaces
  for (int d : {4, 5}) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << d); ++mask) {
      std::vector<int> occ;
      for (int p = 1; p <= d; ++p) {
        if (mask & (std::uint64_t(1) << (p - 1))) occ.push_back(p);
      }
      const Configuration c(occ);
      for (int p = 1; p <= d; ++p) {
        for (int q = 1; q <= d; ++q) {
          if (p == q) continue;
          const auto first_p = apply_creation(c, p, d);
          const auto pq = first_p ? apply_creation(first_p->config, q, d) : std::nullopt;
          const auto first_q = apply_creation(c, q, d);
          const auto qp = first_q ? apply_creation(first_q->config, p, d) : std::nullopt;
          if (!pq || !qp) {
            CHECK(!pq);
            CHECK(!qp);
            continue;
          }
          CHECK(pq->config == qp->config);
          CHECK(first_p->sign * pq->sign == -first_q->sign * qp->sign);
        }
      }
    }
  }
}

TEST_CASE("slater overlaps") {
  const OrbitalUnitary id = OrbitalUnitary::identity(6);
  CHECK(slater_overlap(id, Configuration{1, 2, 3}, Configuration{1, 2, 3}) == Complex(1.0));
  CHECK(slater_overlap(id, Configuration{1, 2, 3}, Configuration{1, 2, 4}) == Complex(0.0));

  // delta property on the full (3,6) basis
  const auto basis = build_basis(Setting(3, 6));
  for (const auto& a : basis) {
    for (const auto& b : basis) {
      const Complex o = slater_overlap(id, a, b);
      CHECK(o == (a == b ? Complex(1.0) : Complex(0.0)));
    }
  }

  // 2x2 rotation by theta embedded in orbitals {3,4}
  const double theta = 0.731;
  Matrix u = Matrix::Identity(6, 6);
  u(2, 2) = std::cos(theta);
  u(3, 3) = std::cos(theta);
  u(2, 3) = -std::sin(theta);
  u(3, 2) = std::sin(theta);
  const OrbitalUnitary rot(u);
  CHECK(std::abs(slater_overlap(rot, Configuration{1, 2, 3}, Configuration{1, 2, 3}) -
                 Complex(std::cos(theta))) < 1e-14);

  CHECK_THROWS_AS(slater_overlap(id, Configuration{1, 2}, Configuration{1, 2, 3}), ShapeError);
  CHECK_THROWS_AS(slater_overlap(id, Configuration{1, 7, 8}, Configuration{1, 2, 3}), ShapeError);
}

TEST_CASE("orbital rotations") {
  auto rng = test::make_rng(11);
  const Setting s(3, 6);

  SUBCASE("identity leaves the state unchanged") {
    const Wavefunction psi = test::random_state(s, rng);
    const Wavefunction out = apply_orbital_rotation(psi, OrbitalUnitary::identity(6));
    for (const auto& [c, a] : psi.amplitudes) CHECK(std::abs(out.amplitude(c) - a) < 1e-12);
  }

  SUBCASE("orbital swap relabels a determinant, sign from the submatrix determinant") {
    Matrix p34 = Matrix::Identity(6, 6);
    p34(2, 2) = p34(3, 3) = 0.0;
    p34(2, 3) = p34(3, 2) = 1.0;
    const OrbitalUnitary swap(p34);

    // the relevant 3x3 submatrix has rows (1,2,4), columns (1,2,3) and
    // determinant +1, so |1,2,3> maps to +|1,2,4>
    CHECK(slater_overlap(swap, Configuration{1, 2, 4}, Configuration{1, 2, 3}) == Complex(1.0));

    Wavefunction psi(s);
    psi.amplitudes[Configuration{1, 2, 3}] = 1.0;
    const Wavefunction out = apply_orbital_rotation(psi, swap);
    REQUIRE(out.amplitudes.size() == 1);
    CHECK(std::abs(out.amplitude(Configuration{1, 2, 4}) - Complex(1.0)) < 1e-14);

    // a swap touching occupied orbitals needs a reordering and picks up a sign
    Matrix p14 = Matrix::Identity(6, 6);
    p14(0, 0) = p14(3, 3) = 0.0;
    p14(0, 3) = p14(3, 0) = 1.0;
    const Wavefunction out14 = apply_orbital_rotation(psi, OrbitalUnitary(p14));
    CHECK(std::abs(out14.amplitude(Configuration{2, 3, 4}) - Complex(1.0)) < 1e-14);
  }

  SUBCASE("norm preservation") {
    for (int rep = 0; rep < 5; ++rep) {
      const Wavefunction psi = test::random_state(s, rng);
      const OrbitalUnitary u = test::random_unitary(6, rng);
      CHECK(apply_orbital_rotation(psi, u).norm() == doctest::Approx(1.0).epsilon(1e-10));
    }
  }

  SUBCASE("composition") {
    const Wavefunction psi = test::random_state(s, rng);
    const OrbitalUnitary u = test::random_unitary(6, rng);
    const OrbitalUnitary v = test::random_unitary(6, rng);
    const Wavefunction once = apply_orbital_rotation(psi, u * v);
    const Wavefunction twice = apply_orbital_rotation(apply_orbital_rotation(psi, v), u);
    for (const auto& [c, a] : once.amplitudes) CHECK(std::abs(twice.amplitude(c) - a) < 1e-10);
  }

  SUBCASE("non-unitary matrices are rejected") {
    Matrix bad = Matrix::Identity(6, 6);
    bad(0, 0) = 1.5;
    CHECK_THROWS_AS(OrbitalUnitary{bad}, UnitarityError);
  }
}
