// Copyright 2026 The pinspace Authors
// SPDX-License-Identifier: Apache-2.0

#include "pin/rdm.hpp"

#include <algorithm>
#include <cmath>

namespace pin {

Matrix one_rdm(const Wavefunction& psi, bool auto_normalize) {
  const int d = psi.setting.num_orbitals;
  const double nrm = psi.norm();
  if (std::abs(nrm - 1.0) > 1e-12 && !auto_normalize) {
    throw NormalizationError("state norm " + std::to_string(nrm) +
                             " differs from 1; pass auto_normalize to accept");
  }
  const double scale = 1.0 / (nrm * nrm);

  Matrix rho = Matrix::Zero(d, d);
  // rho(i,j) = <Psi| f^dag_j f_i |Psi>: annihilate i from each ket term,
  // re-create j, and pair with the matching bra amplitude.
  for (const auto& [ket, ck] : psi.amplitudes) {
    for (int i : ket.occ()) {
      const auto removed = apply_annihilation(ket, i, d);
      for (int j = 1; j <= d; ++j) {
        const auto bra = apply_creation(removed->config, j, d);
        if (!bra) continue;
        const Complex cb = psi.amplitude(bra->config);
        if (cb == Complex(0.0)) continue;
        rho(i - 1, j - 1) += std::conj(cb) * ck *
                             static_cast<double>(removed->sign * bra->sign) * scale;
      }
    }
  }
  return rho;
}

NaturalBasis natural_basis(const Matrix& rho, double deg_tol) {
  if (rho.rows() != rho.cols()) throw ShapeError("1-RDM must be square");
  const int d = static_cast<int>(rho.rows());
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    throw SymmetryError("input matrix is not Hermitian within 1e-12");
  }

  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigendecomposition failed");
  }

  // Eigen returns ascending eigenvalues; flip to non-increasing.
  Vector nons(d);
  Matrix u(d, d);
  for (int k = 0; k < d; ++k) {
    nons(k) = solver.eigenvalues()(d - 1 - k);
    u.col(k) = solver.eigenvectors().col(d - 1 - k);
  }

  std::vector<std::pair<int, int>> blocks;
  int start = 1;
  for (int k = 1; k < d; ++k) {
    if (nons(k - 1) - nons(k) >= deg_tol) {
      blocks.emplace_back(start, k);
      start = k + 1;
    }
  }
  blocks.emplace_back(start, d);

  // Inside a degenerate block any orthonormal basis of the eigenspace works;
  // pick a canonical one by orthonormalizing the projections of the
  // coordinate axes with the largest weight in the block (lowest index on
  // ties). A diagonal input then yields the identity.
  for (const auto& [lo, hi] : blocks) {
    const int m = hi - lo + 1;
    if (m < 2) continue;
    const Matrix block = u.middleCols(lo - 1, m);
    const Matrix projector = block * block.adjoint();
    std::vector<std::pair<double, int>> weight(d);
    for (int k = 0; k < d; ++k) weight[k] = {projector.col(k).norm(), k};
    std::stable_sort(weight.begin(), weight.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<int> axes(weight.size() ? m : 0);
    for (int k = 0; k < m; ++k) axes[k] = weight[k].second;
    std::sort(axes.begin(), axes.end());

    Matrix fresh(d, m);
    int filled = 0;
    for (int axis : axes) {
      Eigen::VectorXcd v = projector.col(axis);
      for (int j = 0; j < filled; ++j) v -= fresh.col(j).dot(v) * fresh.col(j);
      const double nrm = v.norm();
      if (nrm < 1e-8) continue;  // axis nearly dependent on the ones picked
      fresh.col(filled++) = v / nrm;
    }
    // fall back to the solver's columns if the axis choice degenerated
    for (int j = filled; j < m; ++j) {
      Eigen::VectorXcd v = block.col(j);
      for (int i = 0; i < filled; ++i) v -= fresh.col(i).dot(v) * fresh.col(i);
      fresh.col(filled++) = v / v.norm();
    }
    u.middleCols(lo - 1, m) = fresh;
  }

  // Deterministic phases: largest-magnitude entry real positive, ties to the
  // lowest index.
  for (int k = 0; k < d; ++k) {
    int arg = 0;
    double best = std::abs(u(0, k));
    for (int r = 1; r < d; ++r) {
      const double m = std::abs(u(r, k));
      if (m > best) {
        best = m;
        arg = r;
      }
    }
    const Complex z = u(arg, k);
    if (std::abs(z) > 0.0) u.col(k) *= std::conj(z) / std::abs(z);
  }

  return NaturalBasis{std::move(nons), OrbitalUnitary(std::move(u)), std::move(blocks)};
}

NaturalExpansion to_natural_expansion(const Wavefunction& psi, double deg_tol,
                                      bool auto_normalize) {
  const double nrm = psi.norm();
  if (std::abs(nrm - 1.0) > 1e-12 && !auto_normalize) {
    throw NormalizationError("state norm " + std::to_string(nrm) +
                             " differs from 1; pass auto_normalize to accept");
  }
  const Wavefunction input = (std::abs(nrm - 1.0) > 1e-15) ? psi.normalized() : psi;
  NaturalBasis nb = natural_basis(one_rdm(input), deg_tol);
  Wavefunction rotated = apply_orbital_rotation(input, nb.unitary.adjoint());
  return NaturalExpansion{std::move(rotated), std::move(nb), nrm};
}

std::vector<Configuration> support(const Wavefunction& psi, double threshold) {
  if (threshold < 0.0) throw std::invalid_argument("support threshold must be >= 0");
  std::vector<Configuration> out;
  for (const auto& [c, a] : psi.amplitudes) {
    if (std::abs(a) > threshold) out.push_back(c);
  }
  return out;
}

Vector occupation_vector(const Wavefunction& psi_in_no_basis) {
  Vector n = Vector::Zero(psi_in_no_basis.setting.num_orbitals);
  for (const auto& [c, a] : psi_in_no_basis.amplitudes) {
    const double w = std::norm(a);
    for (int p : c.occ()) n(p - 1) += w;
  }
  return n;
}

}  // namespace pin
