// Copyright 2026 The pinspace Authors
// SPDX-License-Identifier: Apache-2.0

#include "pin/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <tuple>
#include <unordered_map>

namespace pin {

namespace {

using TermKey = std::tuple<int, int, int, int>;

void check_index(int p, int d) {
  if (p < 1 || p > d) {
    throw IndexError("two-body index " + std::to_string(p) + " out of range 1.." +
                     std::to_string(d));
  }
}

}  // namespace

ManyBodyOperator make_operator(Matrix one_body, std::vector<TwoBodyTerm> two_body) {
  if (one_body.rows() != one_body.cols()) throw ShapeError("one-body matrix must be square");
  const int d = static_cast<int>(one_body.rows());
  if ((one_body - one_body.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw SymmetryError("one-body matrix is not Hermitian within 1e-10");
  }

  std::map<TermKey, Complex> tensor;
  for (const TwoBodyTerm& t : two_body) {
    check_index(t.p, d);
    check_index(t.q, d);
    check_index(t.r, d);
    check_index(t.s, d);
    tensor[{t.p, t.q, t.r, t.s}] += t.v;
  }

  // Enforce V_pqrs = V_qpsr by averaging the two slots.
  std::map<TermKey, Complex> symmetrized;
  for (const auto& [key, v] : tensor) {
    const auto [p, q, r, s] = key;
    const TermKey partner{q, p, s, r};
    auto it = tensor.find(partner);
    const Complex other = (it == tensor.end()) ? Complex(0.0) : it->second;
    symmetrized[key] = 0.5 * (v + other);
  }
  // Hermiticity of the assembled operator needs V_pqrs = conj(V_rspq).
  for (const auto& [key, v] : symmetrized) {
    const auto [p, q, r, s] = key;
    auto it = symmetrized.find(TermKey{r, s, p, q});
    const Complex other = (it == symmetrized.end()) ? Complex(0.0) : it->second;
    if (std::abs(v - std::conj(other)) > 1e-10) {
      throw SymmetryError("two-body coefficients violate Hermiticity (V_pqrs == conj(V_rspq))");
    }
  }

  ManyBodyOperator op;
  op.one_body = std::move(one_body);
  for (const auto& [key, v] : symmetrized) {
    if (std::abs(v) <= 1e-14) continue;
    const auto [p, q, r, s] = key;
    op.two_body.push_back(TwoBodyTerm{p, q, r, s, v});
  }
  return op;
}

std::vector<int> up_orbitals(SpinOrdering ordering, int sites) {
  if (ordering == SpinOrdering::SiteMajor) {
    std::vector<int> up(sites);
    for (int a = 1; a <= sites; ++a) up[a - 1] = 2 * a - 1;
    return up;
  }
  if (sites != 3) throw std::invalid_argument("TrimerMomentum ordering requires 3 sites");
  return {1, 2, 4};
}

OrbitalUnitary trimer_momentum_unitary() {
  // Momentum orbitals |k sigma> = 3^{-1/2} sum_a exp(2 pi i k a / 3) |a sigma>,
  // placed in columns ordered 0up, 1up, 0dn, 2up, 2dn, 1dn.
  const int sites = 3;
  Matrix u = Matrix::Zero(6, 6);
  const auto column = [&](int k, bool down) {
    Eigen::VectorXcd col = Eigen::VectorXcd::Zero(6);
    for (int a = 1; a <= sites; ++a) {
      const double phase = 2.0 * M_PI * k * a / sites;
      col(2 * (a - 1) + (down ? 1 : 0)) = Complex(std::cos(phase), std::sin(phase)) / std::sqrt(3.0);
    }
    return col;
  };
  u.col(0) = column(0, false);
  u.col(1) = column(1, false);
  u.col(2) = column(0, true);
  u.col(3) = column(2, false);
  u.col(4) = column(2, true);
  u.col(5) = column(1, true);
  return OrbitalUnitary(std::move(u));
}

ManyBodyOperator hubbard_cluster(int sites, double t, double u, bool periodic,
                                 SpinOrdering ordering) {
  if (sites < 2) throw std::invalid_argument("hubbard_cluster requires at least 2 sites");
  if (ordering == SpinOrdering::TrimerMomentum && !(sites == 3 && periodic)) {
    throw std::invalid_argument("TrimerMomentum ordering requires the periodic 3-site cluster");
  }
  const int d = 2 * sites;
  const auto up = [](int a) { return 2 * a - 1; };
  const auto dn = [](int a) { return 2 * a; };

  Matrix h = Matrix::Zero(d, d);
  std::vector<std::pair<int, int>> bonds;
  for (int a = 1; a < sites; ++a) bonds.emplace_back(a, a + 1);
  if (periodic && sites > 2) bonds.emplace_back(sites, 1);
  for (const auto& [a, b] : bonds) {
    for (const auto& [oa, ob] : {std::pair{up(a), up(b)}, std::pair{dn(a), dn(b)}}) {
      h(oa - 1, ob - 1) -= t;
      h(ob - 1, oa - 1) -= t;
    }
  }

  std::vector<TwoBodyTerm> terms;
  for (int a = 1; a <= sites; ++a) {
    // U n_{a up} n_{a down} = 1/2 (V_udud + V_dudu) with V = U on both slots
    terms.push_back(TwoBodyTerm{up(a), dn(a), up(a), dn(a), Complex(u)});
    terms.push_back(TwoBodyTerm{dn(a), up(a), dn(a), up(a), Complex(u)});
  }

  ManyBodyOperator op = make_operator(std::move(h), std::move(terms));
  if (ordering == SpinOrdering::TrimerMomentum) {
    op = rotate_operator(op, trimer_momentum_unitary());
  }
  return op;
}

ManyBodyOperator rotate_operator(const ManyBodyOperator& op, const OrbitalUnitary& u) {
  const int d = op.dim();
  if (u.dim() != d) throw ShapeError("unitary dimension does not match the operator");
  const Matrix& w = u.matrix();

  Matrix h = w.adjoint() * op.one_body * w;

  // Dense four-index transform, one index at a time.
  const auto idx = [d](int a, int b, int c, int e) {
    return ((a * d + b) * d + c) * d + e;
  };
  std::vector<Complex> tensor(static_cast<std::size_t>(d) * d * d * d, Complex(0.0));
  for (const TwoBodyTerm& t : op.two_body) {
    tensor[idx(t.p - 1, t.q - 1, t.r - 1, t.s - 1)] += t.v;
  }
  std::vector<Complex> scratch(tensor.size());
  const auto contract = [&](int position, bool conjugate) {
    std::fill(scratch.begin(), scratch.end(), Complex(0.0));
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; ++c)
          for (int e = 0; e < d; ++e) {
            const Complex v = tensor[idx(a, b, c, e)];
            if (v == Complex(0.0)) continue;
            const int old_index = (position == 0) ? a : (position == 1) ? b : (position == 2) ? c : e;
            for (int n = 0; n < d; ++n) {
              const Complex factor = conjugate ? std::conj(w(old_index, n)) : w(old_index, n);
              int aa = a, bb = b, cc = c, ee = e;
              (position == 0 ? aa : position == 1 ? bb : position == 2 ? cc : ee) = n;
              scratch[idx(aa, bb, cc, ee)] += factor * v;
            }
          }
    tensor.swap(scratch);
  };
  contract(0, true);
  contract(1, true);
  contract(2, false);
  contract(3, false);

  std::vector<TwoBodyTerm> terms;
  for (int p = 0; p < d; ++p)
    for (int q = 0; q < d; ++q)
      for (int r = 0; r < d; ++r)
        for (int s = 0; s < d; ++s) {
          const Complex v = tensor[idx(p, q, r, s)];
          if (std::abs(v) > 1e-14) terms.push_back(TwoBodyTerm{p + 1, q + 1, r + 1, s + 1, v});
        }

  ManyBodyOperator out;
  out.one_body = std::move(h);
  out.two_body = std::move(terms);
  return out;
}

ConfigFilter occupation_count_filter(std::vector<int> orbitals, int count) {
  return [orbitals = std::move(orbitals), count](const Configuration& c) {
    int n = 0;
    for (int p : orbitals) n += c.contains(p) ? 1 : 0;
    return n == count;
  };
}

namespace {

/// H |ket> as a signed sum over configurations, accumulated through a callback.
template <typename Emit>
void apply_to_configuration(const ManyBodyOperator& op, const Configuration& ket,
                            int num_orbitals, const Emit& emit) {
  const int d = num_orbitals;
  for (int q : ket.occ()) {
    const auto a1 = apply_annihilation(ket, q, d);
    for (int p = 1; p <= d; ++p) {
      const Complex hpq = op.one_body(p - 1, q - 1);
      if (hpq == Complex(0.0)) continue;
      const auto c1 = apply_creation(a1->config, p, d);
      if (!c1) continue;
      emit(c1->config, hpq * static_cast<double>(a1->sign * c1->sign));
    }
  }
  for (const TwoBodyTerm& t : op.two_body) {
    const auto a1 = apply_annihilation(ket, t.r, d);
    if (!a1) continue;
    const auto a2 = apply_annihilation(a1->config, t.s, d);
    if (!a2) continue;
    const auto c1 = apply_creation(a2->config, t.q, d);
    if (!c1) continue;
    const auto c2 = apply_creation(c1->config, t.p, d);
    if (!c2) continue;
    emit(c2->config,
         0.5 * t.v * static_cast<double>(a1->sign * a2->sign * c1->sign * c2->sign));
  }
}

}  // namespace

AssembledOperator build_matrix(const ManyBodyOperator& op, const Setting& setting,
                               const ConfigFilter& filter) {
  if (op.dim() != setting.num_orbitals) {
    throw ShapeError("operator dimension does not match the setting");
  }
  AssembledOperator out;
  for (Configuration& c : build_basis(setting)) {
    if (!filter || filter(c)) out.basis.push_back(std::move(c));
  }
  if (out.basis.empty()) throw std::invalid_argument("sector filter selects no configuration");

  std::unordered_map<std::uint64_t, int> index;
  index.reserve(out.basis.size());
  for (std::size_t k = 0; k < out.basis.size(); ++k) {
    index.emplace(out.basis[k].mask(), static_cast<int>(k));
  }

  const int dim = static_cast<int>(out.basis.size());
  out.matrix = Matrix::Zero(dim, dim);
  for (int col = 0; col < dim; ++col) {
    apply_to_configuration(op, out.basis[col], setting.num_orbitals,
                           [&](const Configuration& c, Complex v) {
                             auto it = index.find(c.mask());
                             if (it != index.end()) out.matrix(it->second, col) += v;
                           });
  }

  if ((out.matrix - out.matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw SymmetryError("assembled operator matrix is not Hermitian within 1e-10");
  }
  return out;
}

int SpectrumResult::ground_multiplicity() const {
  int m = 0;
  for (int k = 0; k < eigenvalues.size(); ++k) {
    if (eigenvalues(k) <= eigenvalues(0) + degeneracy_tol) ++m;
  }
  return m;
}

SpectrumResult ground_state(const ManyBodyOperator& op, const Setting& setting,
                            const ConfigFilter& filter, double deg_tol) {
  const AssembledOperator assembled = build_matrix(op, setting, filter);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(assembled.matrix);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigendecomposition failed");
  }

  const Matrix residual =
      assembled.matrix * solver.eigenvectors() -
      solver.eigenvectors() * solver.eigenvalues().asDiagonal().toDenseMatrix().cast<Complex>();
  if (residual.colwise().norm().maxCoeff() > 1e-9) {
    throw ConvergenceError("eigenpair residual exceeds 1e-9");
  }

  SpectrumResult out;
  out.eigenvalues = solver.eigenvalues();
  out.degeneracy_tol = deg_tol;
  out.eigenvectors.reserve(assembled.basis.size());
  for (int k = 0; k < solver.eigenvalues().size(); ++k) {
    Wavefunction psi(setting);
    for (std::size_t j = 0; j < assembled.basis.size(); ++j) {
      const Complex a = solver.eigenvectors()(static_cast<int>(j), k);
      if (std::abs(a) > 1e-15) psi.amplitudes[assembled.basis[j]] = a;
    }
    out.eigenvectors.push_back(std::move(psi));
  }
  return out;
}

double expectation_value(const ManyBodyOperator& op, const Wavefunction& psi) {
  if (op.dim() != psi.setting.num_orbitals) {
    throw ShapeError("operator dimension does not match the state's setting");
  }
  Complex acc(0.0);
  for (const auto& [ket, amp] : psi.amplitudes) {
    const Complex ck = amp;
    apply_to_configuration(op, ket, psi.setting.num_orbitals,
                           [&](const Configuration& c, Complex v) {
                             const Complex cb = psi.amplitude(c);
                             if (cb != Complex(0.0)) acc += std::conj(cb) * v * ck;
                           });
  }
  if (std::abs(acc.imag()) > 1e-10) {
    throw SymmetryError("expectation value has a non-negligible imaginary part");
  }
  return acc.real();
}

}  // namespace pin
