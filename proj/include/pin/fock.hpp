// Copyright 2026 The pinspace Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>

#include "pin/types.hpp"

namespace pin {

// ---------------------------------------------------------------------------
// Wavefunction
// ---------------------------------------------------------------------------

/// N-fermion state as a sparse map configuration -> amplitude.
///
/// A configuration state |i1,...,iN> is f^dag_{i1} ... f^dag_{iN} |vac> with
/// ascending indices; all signs below follow from that convention.
struct Wavefunction {
  Setting setting;
  std::map<Configuration, Complex> amplitudes;

  explicit Wavefunction(Setting s) : setting(s) {}

  Complex amplitude(const Configuration& c) const {
    auto it = amplitudes.find(c);
    return it == amplitudes.end() ? Complex(0.0) : it->second;
  }

  /// Inserts (or accumulates onto) one term. Throws if the configuration does
  /// not belong to the setting.
  void add_term(const Configuration& c, Complex value);

  double norm() const;
  bool is_normalized(double tol = 1e-12) const;
  Wavefunction normalized() const;

  /// Drops amplitudes with |c| <= tol.
  void prune(double tol = 1e-14);
};

// ---------------------------------------------------------------------------
// Orbital unitaries
// ---------------------------------------------------------------------------

/// A d x d one-particle unitary, validated to u^dag u = 1 within tol.
class OrbitalUnitary {
 public:
  explicit OrbitalUnitary(Matrix u, double tol = 1e-10);

  static OrbitalUnitary identity(int d) { return OrbitalUnitary(Matrix::Identity(d, d)); }

  const Matrix& matrix() const { return u_; }
  int dim() const { return static_cast<int>(u_.rows()); }

  OrbitalUnitary adjoint() const { return OrbitalUnitary(u_.adjoint()); }

  friend OrbitalUnitary operator*(const OrbitalUnitary& a, const OrbitalUnitary& b) {
    return OrbitalUnitary(a.u_ * b.u_);
  }

 private:
  Matrix u_;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// All binomial(d,N) configurations in lexicographic order.
std::vector<Configuration> build_basis(const Setting& setting);

struct SignedConfiguration {
  Configuration config;
  int sign = 1;  // +1 or -1
};

/// f^dag_p acting on a configuration (or the vacuum). Returns nullopt when p
/// is already occupied; otherwise the sign is (-1)^(#occupied indices < p).
std::optional<SignedConfiguration> apply_creation(const Configuration& c, int p,
                                                  int num_orbitals);

/// f_p, the adjoint convention of apply_creation. Returns nullopt when p is
/// unoccupied.
std::optional<SignedConfiguration> apply_annihilation(const Configuration& c, int p,
                                                      int num_orbitals);

/// <bra| u^{(x)N} |ket> = det of the N x N submatrix of u with rows selected
/// by bra and columns by ket.
Complex slater_overlap(const OrbitalUnitary& u, const Configuration& bra,
                       const Configuration& ket);

/// The rotated state u^{(x)N} |psi>, i.e. c'_j = sum_i <j|u^{(x)N}|i> c_i.
/// Amplitudes below 1e-14 are pruned; the norm is preserved.
Wavefunction apply_orbital_rotation(const Wavefunction& psi, const OrbitalUnitary& u);

}  // namespace pin
