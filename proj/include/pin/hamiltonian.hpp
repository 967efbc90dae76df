// Copyright 2026 The pinspace Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>

#include "pin/fock.hpp"

namespace pin {

/// Second-quantized operator with a one-body matrix h and a sparse two-body
/// term list, H2 = 1/2 sum V_pqrs f^dag_p f^dag_q f_s f_r (1-based indices,
/// V_pqrs = V_qpsr enforced on construction).
struct TwoBodyTerm {
  int p = 0, q = 0, r = 0, s = 0;
  Complex v;
};

struct ManyBodyOperator {
  Matrix one_body;
  std::vector<TwoBodyTerm> two_body;

  int dim() const { return static_cast<int>(one_body.rows()); }
};

/// Validates shape, Hermiticity of h and symmetrizes the two-body list under
/// V_pqrs = V_qpsr.
ManyBodyOperator make_operator(Matrix one_body, std::vector<TwoBodyTerm> two_body);

enum class SpinOrdering {
  /// Spin-orbital index 2(a-1)+1 for site-a up, 2a for site-a down.
  SiteMajor,
  /// The momentum-spin labeling used for the three-site cluster:
  /// 1=(k0,up) 2=(k1,up) 3=(k0,dn) 4=(k2,up) 5=(k2,dn) 6=(k1,dn).
  TrimerMomentum,
};

/// Fermi-Hubbard cluster on L sites (d = 2L spin-orbitals):
/// H = -t sum_{<a,b>,sigma} (f^dag_{a sigma} f_{b sigma} + h.c.)
///     + U sum_a n_{a up} n_{a down}.
/// TrimerMomentum requires L = 3 and periodic boundaries.
ManyBodyOperator hubbard_cluster(int sites, double t, double u, bool periodic,
                                 SpinOrdering ordering = SpinOrdering::SiteMajor);

/// 1-based positions of the spin-up orbitals under an ordering convention.
std::vector<int> up_orbitals(SpinOrdering ordering, int sites);

/// Unitary relating site-major spin-orbitals to the TrimerMomentum labeling
/// (columns are the momentum-spin orbitals in the site-major basis).
OrbitalUnitary trimer_momentum_unitary();

/// Basis change of the operator coefficients: columns of u are the new
/// orbitals expressed in the old basis.
ManyBodyOperator rotate_operator(const ManyBodyOperator& op, const OrbitalUnitary& u);

using ConfigFilter = std::function<bool(const Configuration&)>;

/// Keeps configurations with exactly `count` occupied orbitals among `orbitals`.
ConfigFilter occupation_count_filter(std::vector<int> orbitals, int count);

/// Dense matrix of the operator over the (optionally filtered) configuration
/// basis. Hermitian within 1e-10 by construction check.
struct AssembledOperator {
  Matrix matrix;
  std::vector<Configuration> basis;
};

AssembledOperator build_matrix(const ManyBodyOperator& op, const Setting& setting,
                               const ConfigFilter& filter = {});

/// Full dense eigendecomposition over the (filtered) sector. Eigenvalues
/// ascending; every returned pair satisfies ||H v - E v|| <= 1e-9.
struct SpectrumResult {
  Vector eigenvalues;
  std::vector<Wavefunction> eigenvectors;
  double degeneracy_tol = 1e-8;

  /// Number of eigenvalues within degeneracy_tol of the lowest.
  int ground_multiplicity() const;
};

SpectrumResult ground_state(const ManyBodyOperator& op, const Setting& setting,
                            const ConfigFilter& filter = {}, double deg_tol = 1e-8);

/// <psi| H |psi> for a normalized state.
double expectation_value(const ManyBodyOperator& op, const Wavefunction& psi);

}  // namespace pin
