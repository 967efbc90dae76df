// Copyright 2026 The pinspace Authors
// SPDX-License-Identifier: Apache-2.0

#include "pin/pinning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pin {

namespace {

double state_norm(const Wavefunction& psi) { return psi.norm(); }

void check_face(const FaceSpec& face, const ConstraintCatalog& catalog) {
  for (int k : face.indices) {
    if (k < 0 || k >= static_cast<int>(catalog.constraints.size())) {
      throw IndexError("face index " + std::to_string(k) + " outside the catalog");
    }
  }
}

}  // namespace

Wavefunction lhat_apply(const Wavefunction& psi_in_no_basis, const LinearConstraint& c) {
  if (c.dim() != psi_in_no_basis.setting.num_orbitals) {
    throw ShapeError("constraint dimension does not match the state's setting");
  }
  Wavefunction out(psi_in_no_basis.setting);
  for (const auto& [config, amp] : psi_in_no_basis.amplitudes) {
    const std::int64_t eig = evaluate_at_vertex(c, config);
    if (eig != 0) out.amplitudes[config] = static_cast<double>(eig) * amp;
  }
  return out;
}

ActiveSpace selection_rule_configs(const FaceSpec& face, const ConstraintCatalog& catalog,
                                   const Setting& setting) {
  check_face(face, catalog);
  ActiveSpace out{setting, face, {}, false};
  for (const Configuration& config : build_basis(setting)) {
    bool selected = true;
    for (int k : face.indices) {
      if (evaluate_at_vertex(catalog.constraints[k], config) != 0) {
        selected = false;
        break;
      }
    }
    if (selected) out.configurations.push_back(config);
  }
  out.empty_warning = out.configurations.empty();
  return out;
}

CasCheck active_space_check(const Wavefunction& psi, int r, int s, double tol) {
  const LinearConstraint c = pauli_constraint(r, s, psi.setting);
  const NaturalExpansion no = to_natural_expansion(psi);
  CasCheck out;
  out.value = evaluate(c, no.basis.nons);
  out.residual = state_norm(lhat_apply(no.state, c));
  out.holds = (out.value <= tol) == (out.residual <= tol);
  return out;
}

double verify_pinning_structure(const Wavefunction& psi, const LinearConstraint& c,
                                double tol, double deg_tol) {
  const NaturalExpansion no = to_natural_expansion(psi, deg_tol);
  const double value = evaluate(c, no.basis.nons);
  if (std::abs(value) > tol) {
    throw NotPinnedError("constraint value " + std::to_string(value) +
                         " exceeds the pinning tolerance " + std::to_string(tol));
  }
  const double residual = state_norm(lhat_apply(no.state, c));
  // A nonzero residual certifies nothing when the spectrum is degenerate: the
  // zero-eigenspace statement then only holds for some basis choice inside the
  // degenerate blocks, which this routine does not search.
  if (residual > tol && no.basis.has_degeneracy()) {
    throw DegenerateNonsError(
        "degenerate occupation numbers leave the natural-orbital basis ambiguous and the "
        "canonical choice does not certify the structure; use find_consistent_permutation "
        "or bd_degenerate_rotation");
  }
  return residual;
}

PermutationResult find_consistent_permutation(const Wavefunction& psi, const FaceSpec& face,
                                              const ConstraintCatalog& catalog, double tol,
                                              double support_threshold) {
  check_face(face, catalog);
  const int d = psi.setting.num_orbitals;
  const NaturalExpansion no = to_natural_expansion(psi);
  const std::vector<Configuration> supp = support(no.state, support_threshold);

  std::vector<const LinearConstraint*> cs;
  cs.reserve(face.indices.size());
  for (int k : face.indices) cs.push_back(&catalog.constraints[k]);

  std::vector<int> perm(d);
  std::iota(perm.begin(), perm.end(), 1);
  std::vector<int> inverse(d + 1, 0);

  do {
    // cheap hyperplane test on the permuted occupation vector
    bool ok = true;
    for (const LinearConstraint* c : cs) {
      double acc = static_cast<double>(c->kappa0);
      for (int j = 0; j < d; ++j) {
        acc += static_cast<double>(c->kappa(j)) * no.basis.nons(perm[j] - 1);
      }
      if (std::abs(acc) > tol) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;

    // exact integer selection rule on the relabeled support
    for (int j = 0; j < d; ++j) inverse[perm[j]] = j + 1;
    for (const Configuration& config : supp) {
      for (const LinearConstraint* c : cs) {
        std::int64_t acc = c->kappa0;
        for (int q : config.occ()) acc += c->kappa(inverse[q] - 1);
        if (acc != 0) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
    if (!ok) continue;

    PermutationResult result{perm, Vector(d), no.basis, {}};
    for (int j = 0; j < d; ++j) result.permuted_nons(j) = no.basis.nons(perm[j] - 1);
    result.support.reserve(supp.size());
    for (const Configuration& config : supp) {
      std::vector<int> occ;
      occ.reserve(config.occ().size());
      for (int q : config.occ()) occ.push_back(inverse[q]);
      std::sort(occ.begin(), occ.end());
      result.support.emplace_back(std::move(occ));
    }
    std::sort(result.support.begin(), result.support.end());
    return result;
  } while (std::next_permutation(perm.begin(), perm.end()));

  throw NoPermutationFoundError(
      "no orbital relabeling satisfies the face selection rules; the state either "
      "lies outside the face's span or the spectrum is too degenerate");
}

namespace {

const Configuration kBd123({1, 2, 3});
const Configuration kBd124({1, 2, 4});
const Configuration kBd135({1, 3, 5});
const Configuration kBd145({1, 4, 5});
const Configuration kBd236({2, 3, 6});
const Configuration kBd246({2, 4, 6});

}  // namespace

BdRotationResult bd_degenerate_rotation(const Wavefunction& psi_in_no_basis, double deg_tol) {
  const Setting& s = psi_in_no_basis.setting;
  if (s.num_particles != 3 || s.num_orbitals != 6) {
    throw std::invalid_argument("bd_degenerate_rotation requires the (3,6) setting");
  }
  for (const auto& [config, amp] : psi_in_no_basis.amplitudes) {
    if (std::abs(amp) <= 1e-12) continue;
    if (config != kBd123 && config != kBd124 && config != kBd135 && config != kBd145 &&
        config != kBd236 && config != kBd246) {
      throw std::invalid_argument("state is not supported on the six pinned configurations");
    }
  }
  const Vector n = occupation_vector(psi_in_no_basis);
  if (std::abs(n(2) - n(3)) > deg_tol) {
    throw std::invalid_argument("n3 and n4 are not degenerate within the tolerance");
  }
  const Complex c123 = psi_in_no_basis.amplitude(kBd123);
  const Complex c124 = psi_in_no_basis.amplitude(kBd124);
  const double w = std::sqrt(std::norm(c123) + std::norm(c124));
  if (w <= 0.0) {
    throw std::invalid_argument("|c123|^2 + |c124|^2 must be positive");
  }

  Matrix u = Matrix::Identity(6, 6);
  u(2, 2) = c123 / w;
  u(3, 2) = c124 / w;
  u(2, 3) = std::conj(c124) / w;
  u(3, 3) = -std::conj(c123) / w;
  OrbitalUnitary rotation(std::move(u));

  Wavefunction rotated = apply_orbital_rotation(psi_in_no_basis, rotation.adjoint());
  return BdRotationResult{std::move(rotated), std::move(rotation)};
}

BdWeightBound bd_weight_bound(const Wavefunction& psi_in_no_basis) {
  const Setting& s = psi_in_no_basis.setting;
  if (s.num_particles != 3 || s.num_orbitals != 6) {
    throw std::invalid_argument("bd_weight_bound requires the (3,6) setting");
  }
  const Vector n = occupation_vector(psi_in_no_basis);
  const double gap = n(2) - n(3);
  const double dvalue = 2.0 - n(0) - n(1) - n(3);
  BdWeightBound out;
  out.lhs = std::norm(psi_in_no_basis.amplitude(kBd124)) +
            std::norm(psi_in_no_basis.amplitude(kBd135)) +
            std::norm(psi_in_no_basis.amplitude(kBd236));
  out.rhs = dvalue / gap + 3.0 * dvalue;
  return out;
}

PinningReport analyze(const Wavefunction& psi, const ConstraintCatalog& catalog,
                      const Tolerances& tol, bool auto_normalize,
                      const FaceSpec* converse_face) {
  if (catalog.setting != psi.setting) {
    throw ShapeError("catalog setting does not match the state's setting");
  }
  const NaturalExpansion no = to_natural_expansion(psi, tol.degeneracy, auto_normalize);

  PinningReport report{psi.setting,
                       no.input_norm,
                       no.basis.nons,
                       no.basis.degeneracy_blocks,
                       support(no.state, tol.support),
                       {},
                       false,
                       std::nullopt};

  for (const LinearConstraint& c : catalog.constraints) {
    ConstraintReport cr{c, evaluate(c, no.basis.nons), l1_distance(c, no.basis.nons),
                        false, false, std::nullopt};
    cr.saturated = std::abs(cr.value) <= tol.saturation;
    cr.quasipinned = cr.l1 <= tol.quasipinning;
    if (cr.saturated) {
      cr.residual = state_norm(lhat_apply(no.state, c));
      if (*cr.residual > tol.residual && no.basis.has_degeneracy()) {
        report.degenerate_unresolved = true;
      }
    }
    report.constraints.push_back(std::move(cr));
  }

  if (converse_face != nullptr) {
    const Wavefunction input = auto_normalize ? psi.normalized() : psi;
    report.permutation =
        find_consistent_permutation(input, *converse_face, catalog, 1e-9, tol.support)
            .permutation;
  }
  return report;
}

}  // namespace pin
