// Copyright 2026 The pinspace Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>

#include "pin/constraints.hpp"
#include "pin/rdm.hpp"

namespace pin {

struct Tolerances {
  double saturation = 1e-8;    // |value| below which a constraint counts as pinned
  double residual = 1e-8;      // structural residual threshold
  double degeneracy = 1e-8;    // NON gap below which orbitals share a block
  double quasipinning = 1e-3;  // l1 distance below which we report quasipinning
  double support = 1e-10;      // amplitude threshold for supports
};

/// Applies the natural-orbital induced operator of an affine constraint to a
/// state expressed in its NO basis: each amplitude is scaled by the exact
/// integer eigenvalue kappa0 + kappa . n_i of its configuration.
Wavefunction lhat_apply(const Wavefunction& psi_in_no_basis, const LinearConstraint& c);

/// Configurations selected by a polytope face: those whose vertex spectra
/// annihilate every face constraint, in exact integer arithmetic.
struct ActiveSpace {
  Setting setting;
  FaceSpec face;
  std::vector<Configuration> configurations;
  bool empty_warning = false;
};

ActiveSpace selection_rule_configs(const FaceSpec& face, const ConstraintCatalog& catalog,
                                   const Setting& setting);

/// Both sides of the Pauli-constraint biconditional: the value S^(r,s) on the
/// ordered occupation numbers and the residual ||S^ psi|| in the NO basis.
/// holds = both are <= tol or both are > tol.
struct CasCheck {
  double value = 0.0;
  double residual = 0.0;
  bool holds = false;
};

CasCheck active_space_check(const Wavefunction& psi, int r, int s, double tol = 1e-8);

/// For a state pinned by c (|c(nons)| <= tol, non-degenerate spectrum),
/// returns the structural residual ||c^ psi|| in the NO basis; pinning theory
/// asserts it vanishes. Throws NotPinnedError when the precondition fails and
/// DegenerateNonsError when the NONs are degenerate beyond deg_tol along a
/// block the constraint distinguishes.
double verify_pinning_structure(const Wavefunction& psi, const LinearConstraint& c,
                                double tol = 1e-8, double deg_tol = 1e-8);

/// Converse selection rule: searches permutations of the natural-orbital
/// labels under which (a) every face constraint vanishes on the permuted
/// occupation vector within tol and (b) every support configuration of the
/// permuted expansion satisfies the integer selection rule exactly. The first
/// permutation in lexicographic order wins.
///
/// permutation[j-1] = p means slot j of the permuted basis holds natural
/// orbital p, so the permuted occupation vector is n'_j = n_{permutation[j-1]}.
struct PermutationResult {
  std::vector<int> permutation;         // 1-based, as above
  Vector permuted_nons;
  NaturalBasis basis;                   // unpermuted natural basis of psi
  std::vector<Configuration> support;   // support relabeled to the permuted basis
};

PermutationResult find_consistent_permutation(const Wavefunction& psi, const FaceSpec& face,
                                              const ConstraintCatalog& catalog,
                                              double tol = 1e-9,
                                              double support_threshold = 1e-10);

/// For a Borland-Dennis state in its NO basis, supported on the six pinned
/// configurations with n3 = n4 degenerate: rotates within span{|3>,|4>} so the
/// state collapses to the three-configuration form. Returns the rotated state
/// and the orbital rotation used.
struct BdRotationResult {
  Wavefunction state;
  OrbitalUnitary rotation;
};

BdRotationResult bd_degenerate_rotation(const Wavefunction& psi_in_no_basis,
                                        double deg_tol = 1e-8);

/// Left side and right side of the Borland-Dennis excitation-weight bound
/// |c124|^2 + |c135|^2 + |c236|^2 <= D/(n3 - n4) + 3 D, for a (3,6) state in
/// its NO basis with n3 > n4.
struct BdWeightBound {
  double lhs = 0.0;
  double rhs = 0.0;
};

BdWeightBound bd_weight_bound(const Wavefunction& psi_in_no_basis);

// ---------------------------------------------------------------------------
// Aggregate report
// ---------------------------------------------------------------------------

struct ConstraintReport {
  LinearConstraint constraint;
  double value = 0.0;
  double l1 = 0.0;
  bool saturated = false;
  bool quasipinned = false;
  /// ||c^ psi|| in the NO basis; reported only for saturated constraints.
  std::optional<double> residual;
};

struct PinningReport {
  Setting setting;
  double input_norm = 1.0;
  Vector nons;
  std::vector<std::pair<int, int>> degeneracy_blocks;
  std::vector<Configuration> support;  // of the NO-expanded state
  std::vector<ConstraintReport> constraints;
  /// Set when a saturated constraint's residual exceeds tolerance while the
  /// spectrum is degenerate: the structural statement then needs a basis
  /// choice inside the degenerate blocks that this report does not attempt.
  bool degenerate_unresolved = false;
  std::optional<std::vector<int>> permutation;  // from the converse search, if run
};

/// Evaluates every catalog constraint on psi's ordered occupation numbers,
/// flags saturation and quasipinning, and computes structural residuals for
/// the saturated ones. When converse_face is given, additionally runs
/// find_consistent_permutation and records the permutation.
PinningReport analyze(const Wavefunction& psi, const ConstraintCatalog& catalog,
                      const Tolerances& tol = {}, bool auto_normalize = false,
                      const FaceSpec* converse_face = nullptr);

}  // namespace pin
