// Copyright 2026 The pinspace Authors
// SPDX-License-Identifier: Apache-2.0

#include "pin/fock.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pin {

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
  }
  return result;
}

std::int64_t Setting::basis_size() const {
  return binomial(num_orbitals, num_particles);
}

bool Configuration::contains(int p) const {
  return std::binary_search(occ_.begin(), occ_.end(), p);
}

std::uint64_t Configuration::mask() const {
  std::uint64_t m = 0;
  for (int p : occ_) m |= std::uint64_t(1) << (p - 1);
  return m;
}

std::string Configuration::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = 0; k < occ_.size(); ++k) {
    if (k) os << ',';
    os << occ_[k];
  }
  os << ')';
  return os.str();
}

void Wavefunction::add_term(const Configuration& c, Complex value) {
  if (!c.valid_in(setting)) {
    throw IndexError("configuration " + c.to_string() + " invalid in setting (N=" +
                     std::to_string(setting.num_particles) + ", d=" +
                     std::to_string(setting.num_orbitals) + ")");
  }
  amplitudes[c] += value;
}

double Wavefunction::norm() const {
  double n2 = 0.0;
  for (const auto& [c, a] : amplitudes) n2 += std::norm(a);
  return std::sqrt(n2);
}

bool Wavefunction::is_normalized(double tol) const {
  return std::abs(norm() - 1.0) <= tol;
}

Wavefunction Wavefunction::normalized() const {
  double n = norm();
  if (n == 0.0) throw NormalizationError("cannot normalize the zero state");
  Wavefunction out(setting);
  for (const auto& [c, a] : amplitudes) out.amplitudes[c] = a / n;
  return out;
}

void Wavefunction::prune(double tol) {
  for (auto it = amplitudes.begin(); it != amplitudes.end();) {
    if (std::abs(it->second) <= tol) {
      it = amplitudes.erase(it);
    } else {
      ++it;
    }
  }
}

OrbitalUnitary::OrbitalUnitary(Matrix u, double tol) : u_(std::move(u)) {
  if (u_.rows() != u_.cols()) {
    throw ShapeError("orbital unitary must be square");
  }
  const Matrix gram = u_.adjoint() * u_;
  const double err = (gram - Matrix::Identity(u_.rows(), u_.cols())).cwiseAbs().maxCoeff();
  if (err > tol) {
    throw UnitarityError("matrix is not unitary: max |u^dag u - 1| = " + std::to_string(err));
  }
}

std::vector<Configuration> build_basis(const Setting& setting) {
  const int n = setting.num_particles;
  const int d = setting.num_orbitals;
  std::vector<Configuration> basis;
  basis.reserve(static_cast<std::size_t>(setting.basis_size()));

  std::vector<int> occ(n);
  for (int k = 0; k < n; ++k) occ[k] = k + 1;
  while (true) {
    basis.emplace_back(occ);
    // advance to the next combination in lexicographic order
    int k = n - 1;
    while (k >= 0 && occ[k] == d - (n - 1 - k)) --k;
    if (k < 0) break;
    ++occ[k];
    for (int j = k + 1; j < n; ++j) occ[j] = occ[j - 1] + 1;
  }
  return basis;
}

std::optional<SignedConfiguration> apply_creation(const Configuration& c, int p,
                                                  int num_orbitals) {
  if (p < 1 || p > num_orbitals) {
    throw IndexError("orbital index " + std::to_string(p) + " out of range 1.." +
                     std::to_string(num_orbitals));
  }
  const auto& occ = c.occ();
  auto pos = std::lower_bound(occ.begin(), occ.end(), p);
  if (pos != occ.end() && *pos == p) return std::nullopt;  // doubly occupied

  const int below = static_cast<int>(pos - occ.begin());
  std::vector<int> out;
  out.reserve(occ.size() + 1);
  out.insert(out.end(), occ.begin(), pos);
  out.push_back(p);
  out.insert(out.end(), pos, occ.end());
  return SignedConfiguration{Configuration(std::move(out)), (below % 2 == 0) ? 1 : -1};
}

std::optional<SignedConfiguration> apply_annihilation(const Configuration& c, int p,
                                                      int num_orbitals) {
  if (p < 1 || p > num_orbitals) {
    throw IndexError("orbital index " + std::to_string(p) + " out of range 1.." +
                     std::to_string(num_orbitals));
  }
  const auto& occ = c.occ();
  auto pos = std::lower_bound(occ.begin(), occ.end(), p);
  if (pos == occ.end() || *pos != p) return std::nullopt;  // unoccupied

  const int below = static_cast<int>(pos - occ.begin());
  std::vector<int> out;
  out.reserve(occ.size() - 1);
  out.insert(out.end(), occ.begin(), pos);
  out.insert(out.end(), pos + 1, occ.end());
  return SignedConfiguration{Configuration(std::move(out)), (below % 2 == 0) ? 1 : -1};
}

Complex slater_overlap(const OrbitalUnitary& u, const Configuration& bra,
                       const Configuration& ket) {
  if (bra.size() != ket.size()) {
    throw ShapeError("bra and ket must occupy the same particle number");
  }
  const int n = bra.size();
  const int d = u.dim();
  if (n == 0) return Complex(1.0);
  if (bra.occ().back() > d || ket.occ().back() > d) {
    throw ShapeError("configuration index exceeds unitary dimension");
  }
  Matrix sub(n, n);
  for (int r = 0; r < n; ++r) {
    for (int s = 0; s < n; ++s) {
      sub(r, s) = u.matrix()(bra.occ()[r] - 1, ket.occ()[s] - 1);
    }
  }
  if (n == 1) return sub(0, 0);
  if (n == 2) return sub(0, 0) * sub(1, 1) - sub(0, 1) * sub(1, 0);
  const auto det3 = [&sub](int r0, int r1, int r2, int c0, int c1, int c2) {
    return sub(r0, c0) * (sub(r1, c1) * sub(r2, c2) - sub(r1, c2) * sub(r2, c1)) -
           sub(r0, c1) * (sub(r1, c0) * sub(r2, c2) - sub(r1, c2) * sub(r2, c0)) +
           sub(r0, c2) * (sub(r1, c0) * sub(r2, c1) - sub(r1, c1) * sub(r2, c0));
  };
  if (n == 3) return det3(0, 1, 2, 0, 1, 2);
  if (n == 4) {
    return sub(0, 0) * det3(1, 2, 3, 1, 2, 3) - sub(0, 1) * det3(1, 2, 3, 0, 2, 3) +
           sub(0, 2) * det3(1, 2, 3, 0, 1, 3) - sub(0, 3) * det3(1, 2, 3, 0, 1, 2);
  }
  return sub.determinant();
}

Wavefunction apply_orbital_rotation(const Wavefunction& psi, const OrbitalUnitary& u) {
  if (u.dim() != psi.setting.num_orbitals) {
    throw ShapeError("unitary dimension does not match the setting");
  }
  Wavefunction out(psi.setting);
  for (const Configuration& j : build_basis(psi.setting)) {
    Complex acc(0.0);
    for (const auto& [i, ci] : psi.amplitudes) {
      acc += slater_overlap(u, j, i) * ci;
    }
    if (std::abs(acc) > 1e-14) out.amplitudes[j] = acc;
  }
  return out;
}

}  // namespace pin
