// Copyright 2026 The pinspace Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>

#include "pin/fock.hpp"

namespace pin {

/// One-particle reduced density matrix of a normalized state, with the
/// convention rho(i,j) = <Psi| f^dag_j f_i |Psi> (1-based orbital labels map
/// to 0-based matrix indices). The result is Hermitian with trace N and
/// eigenvalues in [0, 1].
///
/// Unnormalized input is rejected unless auto_normalize is set.
Matrix one_rdm(const Wavefunction& psi, bool auto_normalize = false);

/// Eigen-decomposition of a 1-RDM: natural occupation numbers (non-increasing)
/// and the unitary whose columns are the natural orbitals.
struct NaturalBasis {
  Vector nons;
  OrbitalUnitary unitary;
  /// Partition of 1..d into maximal 1-based inclusive ranges [first, last]
  /// whose occupation numbers agree within the degeneracy tolerance.
  std::vector<std::pair<int, int>> degeneracy_blocks;

  bool has_degeneracy() const {
    for (const auto& [lo, hi] : degeneracy_blocks)
      if (hi > lo) return true;
    return false;
  }
};

/// Diagonalizes a Hermitian rho. Eigenvalues are sorted non-increasingly and
/// each eigenvector's phase is fixed by making its largest-magnitude entry
/// real positive (ties broken by lowest index).
NaturalBasis natural_basis(const Matrix& rho, double deg_tol = 1e-8);

struct NaturalExpansion {
  Wavefunction state;   // psi expressed in its own natural-orbital basis
  NaturalBasis basis;
  double input_norm = 1.0;  // norm of the original state before normalization
};

/// Self-consistent expansion: rotates psi into the natural-orbital basis of
/// its own 1-RDM, so the 1-RDM of the returned state is diagonal with
/// non-increasing diagonal.
NaturalExpansion to_natural_expansion(const Wavefunction& psi, double deg_tol = 1e-8,
                                      bool auto_normalize = false);

/// Configurations with |amplitude| > threshold, in lexicographic order.
std::vector<Configuration> support(const Wavefunction& psi, double threshold);

/// Occupancies n_j = sum over configurations containing j of |c|^2. Meaningful
/// when psi is expressed in its natural-orbital basis, where it equals the
/// diagonal of the 1-RDM.
Vector occupation_vector(const Wavefunction& psi_in_no_basis);

}  // namespace pin
