// Copyright 2026 The pinspace Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <compare>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pin {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;
using IntVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct SettingError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct IndexError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NormalizationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct UnitarityError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SymmetryError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct UnsupportedSettingError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotPinnedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateNonsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoPermutationFoundError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Setting
// ---------------------------------------------------------------------------

/// Number of fermions N and spin-orbitals d of a fixed-particle-number
/// Hilbert space. Requires 1 <= N <= d.
struct Setting {
  int num_particles = 0;
  int num_orbitals = 0;

  Setting(int n, int d) : num_particles(n), num_orbitals(d) {
    if (n < 1 || d < 1 || n > d) {
      throw SettingError("invalid setting: need 1 <= N <= d, got N=" +
                         std::to_string(n) + ", d=" + std::to_string(d));
    }
  }

  /// binomial(d, N), the configuration-basis dimension.
  std::int64_t basis_size() const;

  friend bool operator==(const Setting&, const Setting&) = default;
};

std::int64_t binomial(int n, int k);

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

/// An occupation pattern: strictly increasing 1-based orbital indices.
/// The default-constructed configuration is the vacuum.
class Configuration {
 public:
  Configuration() = default;

  explicit Configuration(std::vector<int> occ) : occ_(std::move(occ)) {
    for (std::size_t k = 0; k < occ_.size(); ++k) {
      if (occ_[k] < 1 || (k > 0 && occ_[k] <= occ_[k - 1])) {
        throw IndexError("configuration indices must be strictly increasing and >= 1");
      }
    }
  }

  Configuration(std::initializer_list<int> occ)
      : Configuration(std::vector<int>(occ)) {}

  const std::vector<int>& occ() const { return occ_; }
  int size() const { return static_cast<int>(occ_.size()); }
  bool contains(int p) const;

  /// Occupation bitmask, bit p-1 set for occupied orbital p. Needs d <= 64.
  std::uint64_t mask() const;

  /// True if all indices lie in 1..d and exactly N orbitals are occupied.
  bool valid_in(const Setting& s) const {
    return size() == s.num_particles &&
           (occ_.empty() || occ_.back() <= s.num_orbitals);
  }

  std::string to_string() const;

  friend auto operator<=>(const Configuration&, const Configuration&) = default;

 private:
  std::vector<int> occ_;
};

}  // namespace pin
