// Copyright 2026 The pinspace Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: pinning analysis, selection-rule enumeration,
// natural-orbital tools, Hubbard clusters, face-based MCSCF and the shipped
// reference reproductions.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <random>

#include "pin/io.hpp"
#include "pin/mcscf.hpp"

using namespace pin;

namespace {

#ifndef PINSPACE_DATA_DIR
#define PINSPACE_DATA_DIR "data"
#endif

struct ToleranceFlags {
  Tolerances values;

  void attach(CLI::App* cmd) {
    cmd->add_option("--saturation-tol", values.saturation, "pinned when |value| is below this");
    cmd->add_option("--residual-tol", values.residual, "structural residual threshold");
    cmd->add_option("--deg-tol", values.degeneracy, "degeneracy gap threshold");
    cmd->add_option("--quasipin-tol", values.quasipinning, "quasipinning l1-distance threshold");
    cmd->add_option("--support-tol", values.support, "support amplitude threshold");
  }
};

Setting parse_setting(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw io::ParseError("setting must be written N,d (for example 3,6)");
  }
  try {
    return Setting(std::stoi(text.substr(0, comma)), std::stoi(text.substr(comma + 1)));
  } catch (const std::logic_error&) {
    throw io::ParseError("setting must be written N,d (for example 3,6)");
  }
}

ConstraintCatalog load_catalog(const std::string& path, const Setting& setting) {
  if (path.empty()) return builtin_catalog(setting);
  ConstraintCatalog catalog = io::catalog_from_json(io::load_json_file(path));
  if (!(catalog.setting == setting)) {
    throw io::ParseError("catalog file is for (N=" +
                         std::to_string(catalog.setting.num_particles) + ", d=" +
                         std::to_string(catalog.setting.num_orbitals) +
                         "), not the requested setting");
  }
  return catalog;
}

FaceSpec resolve_face(const std::string& name, const ConstraintCatalog& catalog) {
  FaceSpec face;
  const auto collect = [&](ConstraintKind kind) {
    for (std::size_t k = 0; k < catalog.constraints.size(); ++k) {
      if (catalog.constraints[k].kind == kind) face.indices.push_back(static_cast<int>(k));
    }
  };
  if (name == "trivial") return face;
  if (name == "equalities" || name == "bd-equalities") {
    collect(ConstraintKind::Equality);
    if (face.indices.empty()) throw io::ParseError("the catalog has no equality constraints");
    return face;
  }
  if (name == "bd-full") {
    face.indices.resize(catalog.constraints.size());
    for (std::size_t k = 0; k < catalog.constraints.size(); ++k) {
      face.indices[k] = static_cast<int>(k);
    }
    return face;
  }
  if (name == "gpc38") {
    collect(ConstraintKind::Inequality);
    if (face.indices.size() != 1) {
      throw io::ParseError("gpc38 expects the single-inequality (3,8) catalog");
    }
    return face;
  }
  // otherwise a comma-separated 0-based index list into the catalog
  std::size_t pos = 0;
  try {
    while (pos < name.size()) {
      std::size_t used = 0;
      face.indices.push_back(std::stoi(name.substr(pos), &used));
      pos += used;
      if (pos < name.size() && name[pos] == ',') ++pos;
    }
  } catch (const std::logic_error&) {
    throw io::ParseError("unknown face '" + name +
                         "'; use bd-full, bd-equalities, gpc38, equalities, trivial or a "
                         "comma-separated index list");
  }
  for (int k : face.indices) {
    if (k < 0 || k >= static_cast<int>(catalog.constraints.size())) {
      throw io::ParseError("face index " + std::to_string(k) + " outside the catalog");
    }
  }
  return face;
}

void emit(const io::json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    io::save_json_file(j, out_path);
  }
}

std::string format_config(const Configuration& c) {
  std::string line;
  for (std::size_t k = 0; k < c.occ().size(); ++k) {
    if (k) line += ',';
    line += std::to_string(c.occ()[k]);
  }
  return line;
}

// ---------------------------------------------------------------------------
// reproduce
// ---------------------------------------------------------------------------

class Checker {
 public:
  void check(const std::string& what, bool ok) {
    std::printf("  [%s] %s\n", ok ? "ok" : "MISMATCH", what.c_str());
    ok_ &= ok;
  }
  void value(const std::string& what, double v) {
    std::printf("  %s = %.6f\n", what.c_str(), v);
  }
  bool good() const { return ok_; }

 private:
  bool ok_ = true;
};

int reproduce_ex38(const std::string& data_dir) {
  const io::json j = io::load_json_file(data_dir + "/ex38_state.json");
  const Wavefunction psi = io::wavefunction_from_json(j).normalized();
  const io::json& ref = j.at("reference");

  const ConstraintCatalog catalog = builtin_catalog(Setting(3, 8));
  const LinearConstraint& gpc = catalog.constraints[0];

  Checker c;
  const Matrix rho = one_rdm(psi);
  const NaturalBasis nb = natural_basis(rho);

  double max_dev = 0.0;
  for (int k = 0; k < 8; ++k) {
    max_dev = std::max(max_dev, std::abs(nb.nons(k) - ref.at("nons")[k].get<double>()));
  }
  c.value("max |NON - reference|", max_dev);
  c.check("occupation spectrum matches within 1e-3", max_dev < 1e-3);

  const double dval = evaluate(gpc, nb.nons);
  c.value("D(n)", dval);
  c.check("constraint value matches within 1e-3",
          std::abs(dval - ref.at("constraint_value").get<double>()) < 1e-3);

  c.value("<2|rho1|8>", rho(1, 7).real());
  c.check("orbital 2-8 coupling matches within 1e-3",
          std::abs(rho(1, 7).real() - ref.at("rho_2_8").get<double>()) < 1e-3);

  const PermutationResult perm = find_consistent_permutation(psi, FaceSpec{{0}}, catalog);
  std::string perm_text;
  for (int p : perm.permutation) perm_text += std::to_string(p) + " ";
  std::printf("  permutation: %s\n", perm_text.c_str());

  const double dperm = evaluate(gpc, perm.permuted_nons);
  c.value("D(permuted n)", dperm);
  c.check("permuted value vanishes within 1e-9", std::abs(dperm) <= 1e-9);

  double max_perm_dev = 0.0;
  for (int k = 0; k < 8; ++k) {
    max_perm_dev = std::max(
        max_perm_dev, std::abs(perm.permuted_nons(k) - ref.at("permuted_nons")[k].get<double>()));
  }
  c.check("permuted spectrum matches within 1e-3", max_perm_dev < 1e-3);

  return c.good() ? 0 : 4;
}

int reproduce_bd() {
  const Setting s(3, 6);
  const ConstraintCatalog catalog = builtin_catalog(s);
  Checker c;

  c.check("20 configurations in total", build_basis(s).size() == 20);

  const ActiveSpace eight = selection_rule_configs(FaceSpec{{0, 1, 2}}, catalog, s);
  c.check("8 configurations on the equality face", eight.configurations.size() == 8);

  const ActiveSpace three = selection_rule_configs(FaceSpec{{0, 1, 2, 3}}, catalog, s);
  c.check("3 configurations on the full face",
          three.configurations.size() == 3 &&
              three.configurations[0] == Configuration{1, 2, 3} &&
              three.configurations[1] == Configuration{1, 4, 5} &&
              three.configurations[2] == Configuration{2, 4, 6});

  // pinned states with a degenerate n3 = n4 pair live on six configurations,
  // and rotating the degenerate pair packs them back into three
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const std::vector<Configuration> six{Configuration{1, 2, 3}, Configuration{1, 2, 4},
                                       Configuration{1, 3, 5}, Configuration{1, 4, 5},
                                       Configuration{2, 3, 6}, Configuration{2, 4, 6}};
  bool six_ok = true, rotation_ok = true;
  for (int rep = 0; rep < 100; ++rep) {
    const double split = 0.5 + 0.49 * uniform(rng);
    Wavefunction psi(s);
    psi.amplitudes[Configuration{1, 2, 3}] = std::sqrt(0.5);
    psi.amplitudes[Configuration{1, 4, 5}] = std::sqrt(0.5 * split);
    psi.amplitudes[Configuration{2, 4, 6}] = std::sqrt(0.5 * (1.0 - split));
    const double theta = uniform(rng) * 2.0 * M_PI;
    Matrix u = Matrix::Identity(6, 6);
    u(2, 2) = u(3, 3) = std::cos(theta);
    u(2, 3) = -std::sin(theta);
    u(3, 2) = std::sin(theta);
    const Wavefunction rotated = apply_orbital_rotation(psi, OrbitalUnitary(u));
    for (const Configuration& cfg : support(rotated, 1e-10)) {
      six_ok &= std::find(six.begin(), six.end(), cfg) != six.end();
    }
    const BdRotationResult packed = bd_degenerate_rotation(rotated);
    rotation_ok &= support(packed.state, 1e-10).size() <= 3;
  }
  c.check("pinned degenerate states stay on 6 configurations", six_ok);
  c.check("the degenerate rotation packs them into 3", rotation_ok);

  return c.good() ? 0 : 4;
}

int reproduce_trimer() {
  const Setting s(3, 6);
  const ConstraintCatalog catalog = builtin_catalog(s);
  const LinearConstraint& d36 = catalog.constraints[3];
  const std::vector<int> ups = up_orbitals(SpinOrdering::SiteMajor, 3);
  Checker c;

  // the saturated operator is 1/2 - S_z on the three-particle sector
  {
    const std::vector<int> mups = up_orbitals(SpinOrdering::TrimerMomentum, 3);
    Matrix number_up = Matrix::Zero(6, 6);
    for (int p : mups) number_up(p - 1, p - 1) = 1.0;
    Matrix sz = -0.5 * Matrix::Identity(6, 6);
    for (int p : mups) sz(p - 1, p - 1) = 0.5;
    const Matrix lhs = 2.0 * Matrix::Identity(20, 20) -
                       build_matrix(ManyBodyOperator{number_up, {}}, s).matrix;
    const Matrix rhs = 0.5 * Matrix::Identity(20, 20) -
                       build_matrix(ManyBodyOperator{sz, {}}, s).matrix;
    c.check("operator identity 2 - N_up = 1/2 - S_z on the sector",
            (lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
  }

  for (double u : {1.0, 4.0, 8.0}) {
    const ManyBodyOperator op = hubbard_cluster(3, 1.0, u, true);
    const SpectrumResult spectrum = ground_state(op, s, occupation_count_filter(ups, 2));
    std::printf("  U = %g: E0 = %.10f, ground multiplicity %d\n", u, spectrum.eigenvalues(0),
                spectrum.ground_multiplicity());
    bool pinned = true;
    for (int k = 0; k < spectrum.ground_multiplicity(); ++k) {
      const Vector nons = natural_basis(one_rdm(spectrum.eigenvectors[k])).nons;
      pinned &= evaluate(d36, nons) <= 1e-10;
      pinned &= verify_pinning_structure(spectrum.eigenvectors[k], d36) <= 1e-10;
    }
    c.check("ground vectors pinned at U = " + std::to_string(static_cast<int>(u)), pinned);

    const AnsatzSpace ansatz = build_ansatz(FaceSpec{{0, 1, 2, 3}}, catalog, s);
    const McscfResult mcscf = minimize(op, ansatz);
    c.value("E(three-configuration ansatz)", mcscf.energy);
    c.check("face ansatz recovers the exact energy within 1e-6",
            std::abs(mcscf.energy - spectrum.eigenvalues(0)) < 1e-6);
  }
  return c.good() ? 0 : 4;
}

int reproduce_oldcs4() {
  std::mt19937_64 rng(2027);
  std::normal_distribution<double> draw(0.0, 1.0);
  Checker c;
  int tested = 0;
  double worst = -1.0;
  const auto basis = build_basis(Setting(3, 6));
  for (int rep = 0; rep < 10000; ++rep) {
    Wavefunction psi((Setting(3, 6)));
    for (const Configuration& cfg : basis) {
      psi.amplitudes[cfg] = Complex(draw(rng), draw(rng));
    }
    const NaturalExpansion no = to_natural_expansion(psi.normalized());
    if (no.basis.nons(2) - no.basis.nons(3) <= 1e-3) continue;
    const BdWeightBound bound = bd_weight_bound(no.state);
    worst = std::max(worst, bound.lhs - bound.rhs);
    ++tested;
  }
  std::printf("  %d states tested, worst lhs - rhs = %.3e\n", tested, worst);
  c.check("excitation-weight bound holds on every sampled state", worst <= 1e-9);
  return c.good() ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pinning analysis of natural occupation numbers"};
  app.require_subcommand(1);

  // --- analyze ---
  auto* analyze_cmd = app.add_subcommand("analyze", "evaluate a constraint catalog on a state");
  std::string analyze_state, analyze_catalog, analyze_report, analyze_face;
  bool analyze_normalize = false;
  ToleranceFlags analyze_tols;
  analyze_cmd->add_option("--state", analyze_state, "wavefunction JSON file")->required();
  analyze_cmd->add_option("--catalog", analyze_catalog, "constraint catalog JSON file");
  analyze_cmd->add_option("--report", analyze_report, "write the report JSON here");
  analyze_cmd->add_option("--face", analyze_face,
                          "also run the converse relabeling search for this face");
  analyze_cmd->add_flag("--normalize", analyze_normalize, "accept unnormalized input");
  analyze_tols.attach(analyze_cmd);

  // --- enumerate ---
  auto* enumerate_cmd =
      app.add_subcommand("enumerate", "list the configurations selected by a face");
  std::string enum_setting, enum_face, enum_catalog;
  enumerate_cmd->add_option("setting", enum_setting, "N,d")->required();
  enumerate_cmd->add_option("face", enum_face, "face name or index list")->required();
  enumerate_cmd->add_option("--catalog", enum_catalog, "constraint catalog JSON file");

  // --- rotate-no ---
  auto* rotate_cmd =
      app.add_subcommand("rotate-no", "rewrite a state in its natural-orbital basis");
  std::string rotate_state, rotate_out;
  bool rotate_normalize = false;
  double rotate_deg_tol = 1e-8;
  rotate_cmd->add_option("--state", rotate_state, "wavefunction JSON file")->required();
  rotate_cmd->add_option("--out", rotate_out, "write the rotated state here");
  rotate_cmd->add_option("--deg-tol", rotate_deg_tol, "degeneracy gap threshold");
  rotate_cmd->add_flag("--normalize", rotate_normalize, "accept unnormalized input");

  // --- rdm dump ---
  auto* rdm_cmd = app.add_subcommand("rdm", "one-particle reduced density matrix tools");
  auto* rdm_dump = rdm_cmd->add_subcommand("dump", "emit the 1-RDM and its spectrum as JSON");
  std::string rdm_state, rdm_out;
  bool rdm_normalize = false;
  rdm_dump->add_option("--state", rdm_state, "wavefunction JSON file")->required();
  rdm_dump->add_option("--out", rdm_out, "write the JSON here");
  rdm_dump->add_flag("--normalize", rdm_normalize, "accept unnormalized input");

  // --- ham hubbard ---
  auto* ham_cmd = app.add_subcommand("ham", "Hamiltonian builders");
  auto* hubbard_cmd = ham_cmd->add_subcommand("hubbard", "Fermi-Hubbard cluster");
  int hub_sites = 3;
  double hub_t = 1.0, hub_u = 4.0;
  bool hub_periodic = false;
  std::string hub_ordering = "site", hub_out;
  hubbard_cmd->add_option("--sites", hub_sites, "number of sites")->required();
  hubbard_cmd->add_option("--t", hub_t, "hopping amplitude");
  hubbard_cmd->add_option("--u", hub_u, "on-site interaction");
  hubbard_cmd->add_flag("--periodic", hub_periodic, "periodic boundary");
  hubbard_cmd->add_option("--ordering", hub_ordering, "site | trimer-momentum");
  hubbard_cmd->add_option("--out", hub_out, "write the Hamiltonian JSON here");

  // --- mcscf ---
  auto* mcscf_cmd =
      app.add_subcommand("mcscf", "minimize a Hamiltonian over a face-selected ansatz");
  std::string mcscf_ham, mcscf_setting, mcscf_face, mcscf_catalog, mcscf_out, mcscf_mode = "real";
  MinimizeOptions mcscf_options;
  mcscf_cmd->add_option("--ham", mcscf_ham, "Hamiltonian JSON file")->required();
  mcscf_cmd->add_option("--setting", mcscf_setting, "N,d")->required();
  mcscf_cmd->add_option("--face", mcscf_face, "face name or index list")->required();
  mcscf_cmd->add_option("--catalog", mcscf_catalog, "constraint catalog JSON file");
  mcscf_cmd->add_option("--mode", mcscf_mode, "real | complex");
  mcscf_cmd->add_option("--restarts", mcscf_options.restarts, "number of random restarts");
  mcscf_cmd->add_option("--seed", mcscf_options.seed, "random seed");
  mcscf_cmd->add_option("--max-iter", mcscf_options.max_iter, "iteration cap per restart");
  mcscf_cmd->add_option("--grad-step", mcscf_options.grad_step, "finite-difference step");
  mcscf_cmd->add_option("--tol", mcscf_options.tol, "gradient-norm convergence threshold");
  mcscf_cmd->add_option("--out", mcscf_out, "write the result JSON here");

  // --- constraints list ---
  auto* constraints_cmd = app.add_subcommand("constraints", "constraint catalog tools");
  auto* list_cmd = constraints_cmd->add_subcommand("list", "print a catalog with provenance");
  std::string list_setting, list_catalog;
  list_cmd->add_option("--setting", list_setting, "N,d")->required();
  list_cmd->add_option("--catalog", list_catalog, "constraint catalog JSON file");

  // --- reproduce ---
  auto* reproduce_cmd = app.add_subcommand("reproduce", "re-run a shipped reference example");
  std::string repro_name, repro_data = PINSPACE_DATA_DIR;
  reproduce_cmd->add_option("name", repro_name, "bd | ex38 | trimer | oldcs4")->required();
  reproduce_cmd->add_option("--data", repro_data, "fixture directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*analyze_cmd) {
      Wavefunction psi = io::wavefunction_from_json(io::load_json_file(analyze_state));
      const ConstraintCatalog catalog = load_catalog(analyze_catalog, psi.setting);
      std::optional<FaceSpec> face;
      if (!analyze_face.empty()) face = resolve_face(analyze_face, catalog);
      const PinningReport report = analyze(psi, catalog, analyze_tols.values, analyze_normalize,
                                           face ? &*face : nullptr);
      for (const ConstraintReport& cr : report.constraints) {
        std::printf("%-36s value % .6e  l1 % .6e%s%s\n", cr.constraint.label.c_str(), cr.value,
                    cr.l1, cr.saturated ? "  pinned" : "",
                    (!cr.saturated && cr.quasipinned) ? "  quasipinned" : "");
      }
      if (report.permutation) {
        std::string text;
        for (int p : *report.permutation) text += std::to_string(p) + " ";
        std::printf("consistent relabeling: %s\n", text.c_str());
      }
      if (!analyze_report.empty()) io::save_json_file(io::report_to_json(report), analyze_report);
      return 0;
    }

    if (*enumerate_cmd) {
      const Setting setting = parse_setting(enum_setting);
      const ConstraintCatalog catalog = load_catalog(enum_catalog, setting);
      const ActiveSpace space =
          selection_rule_configs(resolve_face(enum_face, catalog), catalog, setting);
      if (space.empty_warning) std::cerr << "warning: the face selects no configuration\n";
      for (const Configuration& c : space.configurations) {
        std::cout << format_config(c) << '\n';
      }
      return 0;
    }

    if (*rotate_cmd) {
      const Wavefunction psi = io::wavefunction_from_json(io::load_json_file(rotate_state));
      const NaturalExpansion no = to_natural_expansion(psi, rotate_deg_tol, rotate_normalize);
      io::json out = io::wavefunction_to_json(no.state);
      io::json nons = io::json::array();
      for (int k = 0; k < no.basis.nons.size(); ++k) {
        nons.push_back(io::round_sig(no.basis.nons(k)));
      }
      out["nons"] = std::move(nons);
      emit(out, rotate_out);
      return 0;
    }

    if (*rdm_dump) {
      const Wavefunction psi = io::wavefunction_from_json(io::load_json_file(rdm_state));
      const Matrix rho = one_rdm(psi, rdm_normalize);
      const NaturalBasis nb = natural_basis(rho);
      emit(io::rdm_to_json(rho, nb, psi.setting), rdm_out);
      return 0;
    }

    if (*hubbard_cmd) {
      SpinOrdering ordering = SpinOrdering::SiteMajor;
      if (hub_ordering == "trimer-momentum") {
        ordering = SpinOrdering::TrimerMomentum;
      } else if (hub_ordering != "site") {
        throw io::ParseError("--ordering must be site or trimer-momentum");
      }
      const ManyBodyOperator op = hubbard_cluster(hub_sites, hub_t, hub_u, hub_periodic, ordering);
      emit(io::hamiltonian_to_json(op), hub_out);
      return 0;
    }

    if (*mcscf_cmd) {
      const Setting setting = parse_setting(mcscf_setting);
      const ManyBodyOperator op = io::hamiltonian_from_json(io::load_json_file(mcscf_ham));
      const ConstraintCatalog catalog = load_catalog(mcscf_catalog, setting);
      RotationMode mode = RotationMode::Real;
      if (mcscf_mode == "complex") {
        mode = RotationMode::Complex;
      } else if (mcscf_mode != "real") {
        throw io::ParseError("--mode must be real or complex");
      }
      const AnsatzSpace ansatz =
          build_ansatz(resolve_face(mcscf_face, catalog), catalog, setting, mode);
      const McscfResult result = minimize(op, ansatz, mcscf_options);
      std::printf("energy % .12f  (%d configurations, best restart %d, %s)\n", result.energy,
                  ansatz.config_count(), result.best_restart,
                  result.converged ? "converged" : "not converged");
      if (!mcscf_out.empty()) {
        io::save_json_file(io::mcscf_result_to_json(result, ansatz), mcscf_out);
      }
      return 0;
    }

    if (*list_cmd) {
      const Setting setting = parse_setting(list_setting);
      const ConstraintCatalog catalog = load_catalog(list_catalog, setting);
      for (std::size_t k = 0; k < catalog.constraints.size(); ++k) {
        const LinearConstraint& c = catalog.constraints[k];
        std::printf("[%zu] %-12s %-32s kappa0 %+lld  kappa [", k,
                    c.kind == ConstraintKind::Equality ? "equality" : "inequality",
                    c.label.c_str(), static_cast<long long>(c.kappa0));
        for (int j = 0; j < c.dim(); ++j) {
          std::printf("%s%lld", j ? ", " : "", static_cast<long long>(c.kappa(j)));
        }
        std::printf("]  (%s)\n",
                    k < catalog.provenance.size() ? catalog.provenance[k].c_str() : "");
      }
      if (catalog.partial) {
        std::printf("note: this catalog is a known-incomplete subset for its setting\n");
      }
      return 0;
    }

    if (*reproduce_cmd) {
      std::printf("reproduce %s\n", repro_name.c_str());
      int code = 2;
      if (repro_name == "ex38") {
        code = reproduce_ex38(repro_data);
      } else if (repro_name == "bd") {
        code = reproduce_bd();
      } else if (repro_name == "trimer") {
        code = reproduce_trimer();
      } else if (repro_name == "oldcs4") {
        code = reproduce_oldcs4();
      } else {
        throw io::ParseError("unknown example '" + repro_name +
                             "'; choose bd, ex38, trimer or oldcs4");
      }
      std::printf("%s\n", code == 0 ? "all checks passed" : "MISMATCH");
      return code;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
