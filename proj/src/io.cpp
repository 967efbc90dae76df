// Copyright 2026 The pinspace Authors
// SPDX-License-Identifier: Apache-2.0

#include "pin/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace pin::io {

namespace {

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1, column = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

json complex_to_json(const Complex& z) {
  if (z.imag() == 0.0) return round_sig(z.real());
  return json::array({round_sig(z.real()), round_sig(z.imag())});
}

Complex complex_from_json(const json& j, const char* what) {
  if (j.is_number()) return Complex(j.get<double>());
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return Complex(j[0].get<double>(), j[1].get<double>());
  }
  if (j.is_object() && j.contains("re")) {
    return Complex(j["re"].get<double>(), j.value("im", 0.0));
  }
  throw ParseError(std::string(what) + ": expected a number, [re,im] or {\"re\":...,\"im\":...}");
}

json matrix_to_json(const Matrix& m) {
  json re = json::array(), im = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json re_row = json::array(), im_row = json::array();
    for (int c = 0; c < m.cols(); ++c) {
      re_row.push_back(round_sig(m(r, c).real()));
      im_row.push_back(round_sig(m(r, c).imag()));
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (int k = 0; k < v.size(); ++k) out.push_back(round_sig(v(k)));
  return out;
}

json configuration_to_json(const Configuration& c) {
  json out = json::array();
  for (int p : c.occ()) out.push_back(p);
  return out;
}

}  // namespace

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError(path + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " +
                     e.what());
  }
}

void save_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << j.dump(2) << '\n';
}

double round_sig(double x, int digits) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*g", digits, x);
  return std::strtod(buffer, nullptr);
}

json wavefunction_to_json(const Wavefunction& psi) {
  json terms = json::array();
  for (const auto& [config, amp] : psi.amplitudes) {
    terms.push_back(json{{"occ", configuration_to_json(config)},
                         {"re", round_sig(amp.real())},
                         {"im", round_sig(amp.imag())}});
  }
  return json{{"N", psi.setting.num_particles},
              {"d", psi.setting.num_orbitals},
              {"terms", std::move(terms)}};
}

Wavefunction wavefunction_from_json(const json& j) {
  if (!j.is_object() || !j.contains("N") || !j.contains("d") || !j.contains("terms")) {
    throw ParseError("wavefunction JSON needs fields N, d and terms");
  }
  Setting setting(j["N"].get<int>(), j["d"].get<int>());
  Wavefunction psi(setting);
  std::size_t index = 0;
  for (const json& term : j["terms"]) {
    if (!term.contains("occ")) throw ParseError("term " + std::to_string(index) + ": missing occ");
    std::vector<int> occ;
    for (const json& e : term["occ"]) occ.push_back(e.get<int>());
    for (std::size_t k = 1; k < occ.size(); ++k) {
      if (occ[k] <= occ[k - 1]) {
        throw ParseError("term " + std::to_string(index) +
                         ": occ must be strictly increasing (no duplicates)");
      }
    }
    Configuration config(std::move(occ));
    if (!config.valid_in(setting)) {
      throw ParseError("term " + std::to_string(index) + ": configuration " + config.to_string() +
                       " invalid for N=" + std::to_string(setting.num_particles) +
                       ", d=" + std::to_string(setting.num_orbitals));
    }
    const Complex amp(term.value("re", 0.0), term.value("im", 0.0));
    if (psi.amplitudes.count(config)) {
      throw ParseError("term " + std::to_string(index) + ": duplicate configuration " +
                       config.to_string());
    }
    psi.amplitudes[config] = amp;
    ++index;
  }
  return psi;
}

json catalog_to_json(const ConstraintCatalog& catalog) {
  json constraints = json::array();
  for (std::size_t k = 0; k < catalog.constraints.size(); ++k) {
    const LinearConstraint& c = catalog.constraints[k];
    json kappa = json::array();
    for (int j = 0; j < c.dim(); ++j) kappa.push_back(c.kappa(j));
    json entry{{"kappa0", c.kappa0},
               {"kappa", std::move(kappa)},
               {"kind", c.kind == ConstraintKind::Equality ? "equality" : "inequality"}};
    if (!c.label.empty()) entry["label"] = c.label;
    if (k < catalog.provenance.size()) entry["provenance"] = catalog.provenance[k];
    constraints.push_back(std::move(entry));
  }
  return json{{"N", catalog.setting.num_particles},
              {"d", catalog.setting.num_orbitals},
              {"constraints", std::move(constraints)},
              {"partial", catalog.partial}};
}

ConstraintCatalog catalog_from_json(const json& j) {
  if (!j.is_object() || !j.contains("N") || !j.contains("d") || !j.contains("constraints")) {
    throw ParseError("catalog JSON needs fields N, d and constraints");
  }
  Setting setting(j["N"].get<int>(), j["d"].get<int>());
  ConstraintCatalog catalog{setting, {}, {}, j.value("partial", false)};
  for (const json& entry : j["constraints"]) {
    LinearConstraint c;
    c.kappa0 = entry.at("kappa0").get<std::int64_t>();
    const json& kappa = entry.at("kappa");
    if (static_cast<int>(kappa.size()) != setting.num_orbitals) {
      throw ParseError("constraint kappa length must equal d");
    }
    c.kappa = IntVector(setting.num_orbitals);
    for (int k = 0; k < setting.num_orbitals; ++k) c.kappa(k) = kappa[k].get<std::int64_t>();
    const std::string kind = entry.value("kind", "inequality");
    if (kind == "equality") {
      c.kind = ConstraintKind::Equality;
    } else if (kind == "inequality") {
      c.kind = ConstraintKind::Inequality;
    } else {
      throw ParseError("constraint kind must be \"equality\" or \"inequality\"");
    }
    if (c.kappa.cwiseAbs().maxCoeff() == 0) {
      throw ParseError("constraint has an all-zero normal");
    }
    c.label = entry.value("label", "");
    catalog.constraints.push_back(std::move(c));
    catalog.provenance.push_back(entry.value("provenance", "external catalog"));
  }
  return catalog;
}

json hamiltonian_to_json(const ManyBodyOperator& op) {
  const int d = op.dim();
  json rows = json::array();
  for (int r = 0; r < d; ++r) {
    json row = json::array();
    for (int c = 0; c < d; ++c) row.push_back(complex_to_json(op.one_body(r, c)));
    rows.push_back(std::move(row));
  }
  json terms = json::array();
  for (const TwoBodyTerm& t : op.two_body) {
    terms.push_back(json{{"p", t.p},
                         {"q", t.q},
                         {"r", t.r},
                         {"s", t.s},
                         {"re", round_sig(t.v.real())},
                         {"im", round_sig(t.v.imag())}});
  }
  return json{{"d", d}, {"one_body", std::move(rows)}, {"two_body", std::move(terms)}};
}

ManyBodyOperator hamiltonian_from_json(const json& j) {
  if (!j.is_object() || !j.contains("d") || !j.contains("one_body")) {
    throw ParseError("hamiltonian JSON needs fields d and one_body");
  }
  const int d = j["d"].get<int>();
  const json& rows = j["one_body"];
  if (static_cast<int>(rows.size()) != d) throw ParseError("one_body must be a d x d matrix");
  Matrix h(d, d);
  for (int r = 0; r < d; ++r) {
    if (static_cast<int>(rows[r].size()) != d) throw ParseError("one_body must be a d x d matrix");
    for (int c = 0; c < d; ++c) h(r, c) = complex_from_json(rows[r][c], "one_body entry");
  }
  std::vector<TwoBodyTerm> terms;
  for (const json& entry : j.value("two_body", json::array())) {
    terms.push_back(TwoBodyTerm{entry.at("p").get<int>(), entry.at("q").get<int>(),
                                entry.at("r").get<int>(), entry.at("s").get<int>(),
                                Complex(entry.value("re", 0.0), entry.value("im", 0.0))});
  }
  try {
    return make_operator(std::move(h), std::move(terms));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid hamiltonian: ") + e.what());
  }
}

json report_to_json(const PinningReport& report) {
  json constraints = json::array();
  for (const ConstraintReport& cr : report.constraints) {
    json kappa = json::array();
    for (int k = 0; k < cr.constraint.dim(); ++k) kappa.push_back(cr.constraint.kappa(k));
    json entry{{"label", cr.constraint.label},
               {"kind", cr.constraint.kind == ConstraintKind::Equality ? "equality" : "inequality"},
               {"kappa0", cr.constraint.kappa0},
               {"kappa", std::move(kappa)},
               {"value", round_sig(cr.value)},
               {"l1_distance", round_sig(cr.l1)},
               {"saturated", cr.saturated},
               {"quasipinned", cr.quasipinned}};
    entry["residual"] = cr.residual ? json(round_sig(*cr.residual)) : json(nullptr);
    constraints.push_back(std::move(entry));
  }
  json blocks = json::array();
  for (const auto& [lo, hi] : report.degeneracy_blocks) blocks.push_back(json::array({lo, hi}));
  json supp = json::array();
  for (const Configuration& c : report.support) supp.push_back(configuration_to_json(c));
  json out{{"setting",
            {{"N", report.setting.num_particles}, {"d", report.setting.num_orbitals}}},
           {"input_norm", round_sig(report.input_norm)},
           {"nons", vector_to_json(report.nons)},
           {"degeneracy_blocks", std::move(blocks)},
           {"support", std::move(supp)},
           {"constraints", std::move(constraints)},
           {"degenerate_unresolved", report.degenerate_unresolved}};
  if (report.permutation) out["permutation"] = *report.permutation;
  return out;
}

json rdm_to_json(const Matrix& rho, const NaturalBasis& basis, const Setting& setting) {
  json blocks = json::array();
  for (const auto& [lo, hi] : basis.degeneracy_blocks) blocks.push_back(json::array({lo, hi}));
  return json{{"setting", {{"N", setting.num_particles}, {"d", setting.num_orbitals}}},
              {"rho1", matrix_to_json(rho)},
              {"nons", vector_to_json(basis.nons)},
              {"degeneracy_blocks", std::move(blocks)}};
}

json mcscf_result_to_json(const McscfResult& result, const AnsatzSpace& ansatz) {
  json configs = json::array();
  for (const Configuration& c : ansatz.active.configurations) {
    configs.push_back(configuration_to_json(c));
  }
  json coefficients = json::array();
  for (int k = 0; k < result.coefficients.size(); ++k) {
    coefficients.push_back(json{{"re", round_sig(result.coefficients(k).real())},
                                {"im", round_sig(result.coefficients(k).imag())}});
  }
  json energies = json::array();
  for (double e : result.restart_energies) energies.push_back(round_sig(e));
  return json{{"setting",
               {{"N", ansatz.active.setting.num_particles},
                {"d", ansatz.active.setting.num_orbitals}}},
              {"energy", round_sig(result.energy)},
              {"converged", result.converged},
              {"best_restart", result.best_restart},
              {"iterations", result.iterations},
              {"restart_energies", std::move(energies)},
              {"configurations", std::move(configs)},
              {"coefficients", std::move(coefficients)},
              {"rotation", matrix_to_json(result.rotation.matrix())},
              {"state", wavefunction_to_json(result.state)}};
}

}  // namespace pin::io
