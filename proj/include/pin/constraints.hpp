// Copyright 2026 The pinspace Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "pin/types.hpp"

namespace pin {

enum class ConstraintKind { Inequality, Equality };

/// Integer affine form kappa0 + kappa . n on occupation vectors. Inequalities
/// are read as "value >= 0", equalities as "value = 0".
struct LinearConstraint {
  std::int64_t kappa0 = 0;
  IntVector kappa;
  ConstraintKind kind = ConstraintKind::Inequality;
  std::string label;

  int dim() const { return static_cast<int>(kappa.size()); }
};

/// kappa0 + kappa . n, in floating point.
double evaluate(const LinearConstraint& c, const Eigen::Ref<const Vector>& n);

/// The constraint value at a configuration's 0/1 vertex spectrum, in exact
/// integer arithmetic.
std::int64_t evaluate_at_vertex(const LinearConstraint& c, const Configuration& config);

/// Pauli constraint S^(r,s): sum_{i<=r} (1 - n_i) + sum_{j>d-s} n_j >= 0,
/// valid for 0 <= r <= N and 0 <= s <= d-N.
LinearConstraint pauli_constraint(int r, int s, const Setting& setting);

struct ConstraintCatalog {
  Setting setting;
  std::vector<LinearConstraint> constraints;
  std::vector<std::string> provenance;  // one entry per constraint
  /// Set when the shipped list is known to be a subset of the full family.
  bool partial = false;
};

/// Built-in generalized Pauli constraint catalogs. Shipped exactly for
/// N=1, N=2 and the Borland-Dennis setting (3,6); for (3,8) a single known
/// inequality is shipped and the catalog is flagged partial. Other settings
/// must be supplied as an external catalog file.
ConstraintCatalog builtin_catalog(const Setting& setting);

/// Particle-hole duality: substitute n_i -> 1 - n_{d-i+1} and re-collect
/// integer coefficients. Maps constraints of (N,d) to constraints of (d-N,d).
LinearConstraint particle_hole_dual(const LinearConstraint& c, const Setting& setting);

/// 0/1 occupation vector of a configuration, a vertex of the Pauli hypercube.
Vector vertex_spectrum(const Configuration& config, int num_orbitals);

/// True iff 1+tol >= n_1 >= ... >= n_d >= -tol and |sum n - N| <= tol.
bool in_pauli_simplex(const Eigen::Ref<const Vector>& n, int num_particles, double tol);

/// l1 distance of n to the hyperplane {value = 0}, computed with the dual
/// l-infinity norm of the normal: |value| / max_j |kappa_j|.
double l1_distance(const LinearConstraint& c, const Eigen::Ref<const Vector>& n);

/// A polytope face: the catalog constraints (0-based indices) imposed as
/// equalities.
struct FaceSpec {
  std::vector<int> indices;
};

}  // namespace pin
