// Copyright 2026 The pinspace Authors
// SPDX-License-Identifier: Apache-2.0

#include "pin/constraints.hpp"

#include <cmath>
#include <cstdlib>

namespace pin {

namespace {

LinearConstraint make_constraint(std::int64_t kappa0, std::vector<std::int64_t> kappa,
                                 ConstraintKind kind, std::string label) {
  LinearConstraint c;
  c.kappa0 = kappa0;
  c.kappa = Eigen::Map<const IntVector>(kappa.data(), static_cast<Eigen::Index>(kappa.size()));
  c.kind = kind;
  c.label = std::move(label);
  return c;
}

}  // namespace

double evaluate(const LinearConstraint& c, const Eigen::Ref<const Vector>& n) {
  if (n.size() != c.kappa.size()) {
    throw ShapeError("occupation vector dimension " + std::to_string(n.size()) +
                     " does not match constraint dimension " + std::to_string(c.dim()));
  }
  double acc = static_cast<double>(c.kappa0);
  for (int j = 0; j < c.dim(); ++j) acc += static_cast<double>(c.kappa(j)) * n(j);
  return acc;
}

std::int64_t evaluate_at_vertex(const LinearConstraint& c, const Configuration& config) {
  std::int64_t acc = c.kappa0;
  for (int p : config.occ()) {
    if (p > c.dim()) {
      throw ShapeError("configuration index " + std::to_string(p) +
                       " exceeds constraint dimension " + std::to_string(c.dim()));
    }
    acc += c.kappa(p - 1);
  }
  return acc;
}

LinearConstraint pauli_constraint(int r, int s, const Setting& setting) {
  const int n = setting.num_particles;
  const int d = setting.num_orbitals;
  if (r < 0 || r > n || s < 0 || s > d - n) {
    throw std::invalid_argument("pauli_constraint requires 0 <= r <= N and 0 <= s <= d-N");
  }
  LinearConstraint c;
  c.kappa0 = r;
  c.kappa = IntVector::Zero(d);
  for (int j = 0; j < r; ++j) c.kappa(j) = -1;
  for (int j = d - s; j < d; ++j) c.kappa(j) = 1;
  c.kind = ConstraintKind::Inequality;
  c.label = "S(" + std::to_string(r) + "," + std::to_string(s) + ")";
  return c;
}

ConstraintCatalog builtin_catalog(const Setting& setting) {
  const int n = setting.num_particles;
  const int d = setting.num_orbitals;
  ConstraintCatalog cat{setting, {}, {}, false};

  auto push = [&cat](LinearConstraint c, std::string prov) {
    cat.constraints.push_back(std::move(c));
    cat.provenance.push_back(std::move(prov));
  };

  if (n == 1) {
    // The polytope is the single point (1, 0, ..., 0).
    std::vector<std::int64_t> k(d, 0);
    k[0] = -1;
    push(make_constraint(1, k, ConstraintKind::Equality, "n1 = 1"), "single-fermion polytope");
    for (int j = 2; j <= d; ++j) {
      std::vector<std::int64_t> kj(d, 0);
      kj[j - 1] = 1;
      push(make_constraint(0, kj, ConstraintKind::Equality, "n" + std::to_string(j) + " = 0"),
           "single-fermion polytope");
    }
    return cat;
  }

  if (n == 2) {
    // Pairwise degeneracy n_{2k-1} = n_{2k}; for odd d additionally n_d = 0.
    for (int k = 1; 2 * k <= d; ++k) {
      std::vector<std::int64_t> kk(d, 0);
      kk[2 * k - 2] = 1;
      kk[2 * k - 1] = -1;
      push(make_constraint(0, kk, ConstraintKind::Equality,
                           "n" + std::to_string(2 * k - 1) + " = n" + std::to_string(2 * k)),
           "two-fermion pairing");
    }
    if (d % 2 == 1) {
      std::vector<std::int64_t> kk(d, 0);
      kk[d - 1] = 1;
      push(make_constraint(0, kk, ConstraintKind::Equality, "n" + std::to_string(d) + " = 0"),
           "two-fermion pairing, odd d");
    }
    return cat;
  }

  if (n == 3 && d == 6) {
    push(make_constraint(1, {-1, 0, 0, 0, 0, -1}, ConstraintKind::Equality, "1 - n1 - n6 = 0"),
         "Borland-Dennis");
    push(make_constraint(1, {0, -1, 0, 0, -1, 0}, ConstraintKind::Equality, "1 - n2 - n5 = 0"),
         "Borland-Dennis");
    push(make_constraint(1, {0, 0, -1, -1, 0, 0}, ConstraintKind::Equality, "1 - n3 - n4 = 0"),
         "Borland-Dennis");
    push(make_constraint(2, {-1, -1, 0, -1, 0, 0}, ConstraintKind::Inequality,
                         "D = 2 - n1 - n2 - n4 >= 0"),
         "Borland-Dennis");
    return cat;
  }

  if (n == 3 && d == 8) {
    push(make_constraint(9, {-19, -11, 21, 13, 5, 5, -3, -11}, ConstraintKind::Inequality,
                         "9 - 19n1 - 11n2 + 21n3 + 13n4 + 5n5 + 5n6 - 3n7 - 11n8 >= 0"),
         "(3,8) list, one member");
    cat.partial = true;
    return cat;
  }

  throw UnsupportedSettingError(
      "no built-in constraint catalog for (N=" + std::to_string(n) + ", d=" + std::to_string(d) +
      "); supply an external catalog JSON file of the form "
      R"({"N":3,"d":8,"constraints":[{"kappa0":9,"kappa":[-19,-11,21,13,5,5,-3,-11],)"
      R"("kind":"inequality"}]})");
}

LinearConstraint particle_hole_dual(const LinearConstraint& c, const Setting& setting) {
  if (c.dim() != setting.num_orbitals) {
    throw ShapeError("constraint dimension does not match the setting");
  }
  const int d = c.dim();
  LinearConstraint dual;
  dual.kappa0 = c.kappa0 + c.kappa.sum();
  dual.kappa = IntVector::Zero(d);
  for (int i = 1; i <= d; ++i) dual.kappa(d - i) = -c.kappa(i - 1);
  dual.kind = c.kind;
  dual.label = c.label.empty() ? "particle-hole dual" : "dual of " + c.label;
  return dual;
}

Vector vertex_spectrum(const Configuration& config, int num_orbitals) {
  Vector v = Vector::Zero(num_orbitals);
  for (int p : config.occ()) {
    if (p > num_orbitals) {
      throw ShapeError("configuration index exceeds the orbital count");
    }
    v(p - 1) = 1.0;
  }
  return v;
}

bool in_pauli_simplex(const Eigen::Ref<const Vector>& n, int num_particles, double tol) {
  const int d = static_cast<int>(n.size());
  if (d == 0) return false;
  if (n(0) > 1.0 + tol || n(d - 1) < -tol) return false;
  for (int j = 1; j < d; ++j) {
    if (n(j) > n(j - 1) + tol) return false;
  }
  return std::abs(n.sum() - static_cast<double>(num_particles)) <= tol;
}

double l1_distance(const LinearConstraint& c, const Eigen::Ref<const Vector>& n) {
  const std::int64_t kmax = c.kappa.cwiseAbs().maxCoeff();
  if (kmax == 0) throw std::invalid_argument("degenerate constraint: zero normal");
  return std::abs(evaluate(c, n)) / static_cast<double>(kmax);
}

}  // namespace pin
