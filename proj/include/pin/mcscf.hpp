// Copyright 2026 The pinspace Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "pin/hamiltonian.hpp"
#include "pin/pinning.hpp"

namespace pin {

enum class RotationMode { Real, Complex };

/// Variational space: free coefficients on the configurations of a polytope
/// face times all orbital rotations. In Real mode the rotation generator is a
/// real antisymmetric matrix (d(d-1)/2 parameters) and the coefficients are
/// real; Complex mode uses an anti-Hermitian generator (d^2 parameters) and
/// complex coefficients.
struct AnsatzSpace {
  ActiveSpace active;
  RotationMode mode = RotationMode::Real;

  int config_count() const { return static_cast<int>(active.configurations.size()); }
  int coefficient_count() const {
    return (mode == RotationMode::Real) ? config_count() : 2 * config_count();
  }
  int generator_count() const {
    const int d = active.setting.num_orbitals;
    return (mode == RotationMode::Real) ? d * (d - 1) / 2 : d * d;
  }
  int parameter_count() const { return coefficient_count() + generator_count(); }
};

/// Ansatz over the configurations selected by the face. Throws when the face
/// selects no configuration.
AnsatzSpace build_ansatz(const FaceSpec& face, const ConstraintCatalog& catalog,
                         const Setting& setting, RotationMode mode = RotationMode::Real);

/// The unitary exp(G) for the packed generator parameters of the ansatz.
OrbitalUnitary rotation_from_parameters(const AnsatzSpace& ansatz,
                                        const Eigen::Ref<const Vector>& generator_params);

/// Normalized state exp(G)^{(x)N} sum_i c_i |i>. Parameter layout:
/// [coefficients | generator].
Wavefunction assemble_state(const AnsatzSpace& ansatz, const Eigen::Ref<const Vector>& params);

/// Re <psi|H|psi> at one parameter point (the imaginary part is checked to be
/// negligible).
double energy(const ManyBodyOperator& op, const AnsatzSpace& ansatz,
              const Eigen::Ref<const Vector>& params);

/// Central-difference energy gradient, the same estimator the optimizer uses.
Vector energy_gradient(const ManyBodyOperator& op, const AnsatzSpace& ansatz,
                       const Eigen::Ref<const Vector>& params, double step = 1e-6);

struct MinimizeOptions {
  int restarts = 16;
  int max_iter = 300;
  double grad_step = 1e-6;   // central-difference step
  double tol = 1e-6;         // gradient-norm convergence threshold; the
                             // finite-difference noise floor sits near 1e-9
  std::uint64_t seed = 7;
};

struct McscfResult {
  double energy = 0.0;
  Eigen::VectorXcd coefficients;  // normalized amplitudes on the active configurations
  OrbitalUnitary rotation;
  Wavefunction state;             // the assembled minimizer
  bool converged = false;         // gradient criterion met on the best restart
  int best_restart = -1;
  int iterations = 0;             // of the best restart
  std::vector<double> restart_energies;
};

/// Best-of-restarts quasi-Newton minimization of the energy over the ansatz.
/// Deterministic for a fixed seed; ties between restarts go to the lowest
/// index. Non-convergence is reported through the flag, never silently.
McscfResult minimize(const ManyBodyOperator& op, const AnsatzSpace& ansatz,
                     const MinimizeOptions& options = {});

}  // namespace pin
