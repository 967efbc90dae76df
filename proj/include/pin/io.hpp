// Copyright 2026 The pinspace Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include <json.hpp>

#include "pin/hamiltonian.hpp"
#include "pin/mcscf.hpp"
#include "pin/pinning.hpp"

namespace pin::io {

using nlohmann::json;

/// Input errors carrying a human-readable location when available.
struct ParseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Parses a file, translating syntax errors into ParseError with
/// line/column diagnostics.
json load_json_file(const std::string& path);
void save_json_file(const json& j, const std::string& path);

/// Nearest double whose decimal representation has at most `digits`
/// significant digits. Applied to every float we emit so identical inputs
/// give byte-identical files.
double round_sig(double x, int digits = 12);

// Wavefunction files: {"N":3,"d":6,"terms":[{"occ":[1,2,3],"re":0.9,"im":0.0},...]}.
// Unsorted or duplicate "occ" entries are rejected. Unknown fields are ignored.
json wavefunction_to_json(const Wavefunction& psi);
Wavefunction wavefunction_from_json(const json& j);

// Catalog files: {"N":3,"d":8,"constraints":[{"kappa0":9,"kappa":[...],
// "kind":"inequality","label":"..."}],"partial":false,"provenance":[...]}.
json catalog_to_json(const ConstraintCatalog& catalog);
ConstraintCatalog catalog_from_json(const json& j);

// Hamiltonian files: {"d":6,"one_body":[[...]],"two_body":[{"p":1,"q":2,
// "r":2,"s":1,"re":4.0,"im":0.0}]}. one_body entries are numbers or [re,im].
json hamiltonian_to_json(const ManyBodyOperator& op);
ManyBodyOperator hamiltonian_from_json(const json& j);

json report_to_json(const PinningReport& report);

json rdm_to_json(const Matrix& rho, const NaturalBasis& basis, const Setting& setting);

json mcscf_result_to_json(const McscfResult& result, const AnsatzSpace& ansatz);

}  // namespace pin::io
