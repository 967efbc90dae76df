// Copyright 2026 The pinspace Authors
// SPDX-License-Identifier: Apache-2.0

#include "pin/mcscf.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace pin {

namespace {

/// exp(G) for anti-Hermitian G via the Hermitian eigendecomposition of iG.
Matrix antihermitian_exp(const Matrix& g) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(Complex(0.0, 1.0) * g);
  if (solver.info() != Eigen::Success) throw std::runtime_error("generator eigensolve failed");
  const int d = static_cast<int>(g.rows());
  Eigen::VectorXcd phases(d);
  for (int k = 0; k < d; ++k) {
    const double lambda = solver.eigenvalues()(k);
    phases(k) = Complex(std::cos(lambda), -std::sin(lambda));
  }
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

Matrix unpack_generator(const AnsatzSpace& ansatz, const Eigen::Ref<const Vector>& gp) {
  const int d = ansatz.active.setting.num_orbitals;
  Matrix g = Matrix::Zero(d, d);
  if (ansatz.mode == RotationMode::Real) {
    int k = 0;
    for (int i = 1; i < d; ++i) {
      for (int j = 0; j < i; ++j, ++k) {
        g(i, j) = gp(k);
        g(j, i) = -gp(k);
      }
    }
  } else {
    int k = 0;
    for (int i = 0; i < d; ++i, ++k) g(i, i) = Complex(0.0, gp(k));
    for (int i = 1; i < d; ++i) {
      for (int j = 0; j < i; ++j, k += 2) {
        g(i, j) = Complex(gp(k), gp(k + 1));
        g(j, i) = Complex(-gp(k), gp(k + 1));
      }
    }
  }
  return g;
}

Eigen::VectorXcd unpack_coefficients(const AnsatzSpace& ansatz,
                                     const Eigen::Ref<const Vector>& params) {
  const int m = ansatz.config_count();
  Eigen::VectorXcd c(m);
  if (ansatz.mode == RotationMode::Real) {
    for (int i = 0; i < m; ++i) c(i) = params(i);
  } else {
    for (int i = 0; i < m; ++i) c(i) = Complex(params(2 * i), params(2 * i + 1));
  }
  const double nrm = c.norm();
  if (nrm < 1e-12) throw NormalizationError("coefficient vector has near-zero norm");
  return c / nrm;
}

void check_params(const AnsatzSpace& ansatz, const Eigen::Ref<const Vector>& params) {
  if (params.size() != ansatz.parameter_count()) {
    throw ShapeError("expected " + std::to_string(ansatz.parameter_count()) +
                     " parameters, got " + std::to_string(params.size()));
  }
}

/// Caches the dense Hamiltonian and the overlap bookkeeping for fast repeated
/// energy evaluations at different parameter points.
class Objective {
 public:
  Objective(const ManyBodyOperator& op, const AnsatzSpace& ansatz)
      : ansatz_(ansatz),
        assembled_(build_matrix(op, ansatz.active.setting)),
        active_(ansatz.active.configurations) {}

  double value(const Eigen::Ref<const Vector>& params) const {
    const Eigen::VectorXcd v = full_vector(params);
    const Complex e = v.dot(assembled_.matrix * v);  // Eigen's dot conjugates the left side
    if (std::abs(e.imag()) > 1e-10) {
      throw SymmetryError("energy expectation has a non-negligible imaginary part");
    }
    return e.real();
  }

  Wavefunction state(const Eigen::Ref<const Vector>& params) const {
    const Eigen::VectorXcd v = full_vector(params);
    Wavefunction psi(ansatz_.active.setting);
    for (std::size_t j = 0; j < assembled_.basis.size(); ++j) {
      const Complex a = v(static_cast<int>(j));
      if (std::abs(a) > 1e-14) psi.amplitudes[assembled_.basis[j]] = a;
    }
    return psi;
  }

  Vector gradient(const Eigen::Ref<const Vector>& params, double step) const {
    Vector g(params.size());
    Vector x = params;
    for (int k = 0; k < params.size(); ++k) {
      const double saved = x(k);
      x(k) = saved + step;
      const double fp = value(x);
      x(k) = saved - step;
      const double fm = value(x);
      x(k) = saved;
      g(k) = (fp - fm) / (2.0 * step);
    }
    return g;
  }

 private:
  Eigen::VectorXcd full_vector(const Eigen::Ref<const Vector>& params) const {
    check_params(ansatz_, params);
    const Eigen::VectorXcd c = unpack_coefficients(ansatz_, params.head(ansatz_.coefficient_count()));
    const Matrix u = antihermitian_exp(
        unpack_generator(ansatz_, params.tail(ansatz_.generator_count())));
    const OrbitalUnitary rot(u, 1e-8);
    Eigen::VectorXcd v(assembled_.basis.size());
    for (std::size_t j = 0; j < assembled_.basis.size(); ++j) {
      Complex acc(0.0);
      for (std::size_t i = 0; i < active_.size(); ++i) {
        acc += slater_overlap(rot, assembled_.basis[j], active_[i]) * c(static_cast<int>(i));
      }
      v(static_cast<int>(j)) = acc;
    }
    return v;
  }

  const AnsatzSpace& ansatz_;
  AssembledOperator assembled_;
  const std::vector<Configuration>& active_;
};

struct LocalResult {
  Vector params;
  double energy = std::numeric_limits<double>::infinity();
  bool converged = false;
  int iterations = 0;
};

/// BFGS with backtracking Armijo line search and central-difference gradients.
LocalResult bfgs_minimize(const Objective& objective, Vector x, const MinimizeOptions& options) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd inv_hessian = Eigen::MatrixXd::Identity(n, n);

  double f = objective.value(x);
  Vector g = objective.gradient(x, options.grad_step);

  LocalResult result;
  for (int iter = 1; iter <= options.max_iter; ++iter) {
    result.iterations = iter;
    if (g.norm() <= options.tol) {
      result.converged = true;
      break;
    }

    Vector direction = -(inv_hessian * g);
    double slope = g.dot(direction);
    if (slope >= 0.0) {  // not a descent direction: reset curvature information
      inv_hessian.setIdentity();
      direction = -g;
      slope = g.dot(direction);
    }

    const auto line_search = [&](const Vector& dir, double dir_slope, double& alpha_out) {
      double alpha = 1.0;
      for (int ls = 0; ls < 50; ++ls) {
        const double trial = objective.value(x + alpha * dir);
        if (trial <= f + 1e-4 * alpha * dir_slope) {
          alpha_out = alpha;
          return trial;
        }
        alpha *= 0.5;
      }
      return std::numeric_limits<double>::quiet_NaN();
    };

    double alpha = 0.0;
    double f_new = line_search(direction, slope, alpha);
    if (std::isnan(f_new)) {  // retry along the raw gradient before giving up
      inv_hessian.setIdentity();
      direction = -g;
      slope = g.dot(direction);
      f_new = line_search(direction, slope, alpha);
    }
    if (std::isnan(f_new) || alpha * direction.norm() < 1e-15) break;  // stalled

    const Vector step = alpha * direction;
    const Vector x_new = x + step;
    const Vector g_new = objective.gradient(x_new, options.grad_step);
    const Vector y = g_new - g;
    const double sy = step.dot(y);
    if (sy > 1e-12 * step.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd outer = step * y.transpose();
      inv_hessian = inv_hessian - rho * (outer * inv_hessian + inv_hessian * outer.transpose()) +
                    rho * rho * (y.dot(inv_hessian * y)) * (step * step.transpose()) +
                    rho * (step * step.transpose());
    }
    x = x_new;
    f = f_new;
    g = g_new;
  }
  result.params = std::move(x);
  result.energy = f;
  return result;
}

}  // namespace

AnsatzSpace build_ansatz(const FaceSpec& face, const ConstraintCatalog& catalog,
                         const Setting& setting, RotationMode mode) {
  ActiveSpace active = selection_rule_configs(face, catalog, setting);
  if (active.configurations.empty()) {
    throw std::invalid_argument("the face selects no configuration; the ansatz is empty");
  }
  return AnsatzSpace{std::move(active), mode};
}

OrbitalUnitary rotation_from_parameters(const AnsatzSpace& ansatz,
                                        const Eigen::Ref<const Vector>& generator_params) {
  if (generator_params.size() != ansatz.generator_count()) {
    throw ShapeError("generator parameter count mismatch");
  }
  return OrbitalUnitary(antihermitian_exp(unpack_generator(ansatz, generator_params)));
}

Wavefunction assemble_state(const AnsatzSpace& ansatz, const Eigen::Ref<const Vector>& params) {
  check_params(ansatz, params);
  const Eigen::VectorXcd c = unpack_coefficients(ansatz, params.head(ansatz.coefficient_count()));
  Wavefunction psi(ansatz.active.setting);
  for (std::size_t i = 0; i < ansatz.active.configurations.size(); ++i) {
    psi.amplitudes[ansatz.active.configurations[i]] = c(static_cast<int>(i));
  }
  const OrbitalUnitary u = rotation_from_parameters(ansatz, params.tail(ansatz.generator_count()));
  return apply_orbital_rotation(psi, u);
}

double energy(const ManyBodyOperator& op, const AnsatzSpace& ansatz,
              const Eigen::Ref<const Vector>& params) {
  return Objective(op, ansatz).value(params);
}

Vector energy_gradient(const ManyBodyOperator& op, const AnsatzSpace& ansatz,
                       const Eigen::Ref<const Vector>& params, double step) {
  return Objective(op, ansatz).gradient(params, step);
}

McscfResult minimize(const ManyBodyOperator& op, const AnsatzSpace& ansatz,
                     const MinimizeOptions& options) {
  if (options.restarts < 1) throw std::invalid_argument("need at least one restart");
  const Objective objective(op, ansatz);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> coeff_draw(0.0, 1.0);
  std::normal_distribution<double> angle_draw(0.0, 0.3);

  LocalResult best;
  int best_restart = -1;
  std::vector<double> energies;
  energies.reserve(options.restarts);

  for (int r = 0; r < options.restarts; ++r) {
    Vector x0(ansatz.parameter_count());
    for (int k = 0; k < ansatz.coefficient_count(); ++k) x0(k) = coeff_draw(rng);
    for (int k = ansatz.coefficient_count(); k < ansatz.parameter_count(); ++k) {
      x0(k) = angle_draw(rng);
    }
    try {
      LocalResult local = bfgs_minimize(objective, std::move(x0), options);
      energies.push_back(local.energy);
      if (local.energy < best.energy) {
        best = std::move(local);
        best_restart = r;
      }
    } catch (const NormalizationError&) {  // a pathological start; skip the restart
      energies.push_back(std::numeric_limits<double>::infinity());
    }
  }
  if (best_restart < 0) throw ConvergenceError("every restart failed");

  McscfResult out{0.0,
                  unpack_coefficients(ansatz, best.params.head(ansatz.coefficient_count())),
                  rotation_from_parameters(ansatz, best.params.tail(ansatz.generator_count())),
                  objective.state(best.params),
                  best.converged,
                  best_restart,
                  best.iterations,
                  std::move(energies)};
  out.energy = expectation_value(op, out.state);
  return out;
}

}  // namespace pin
