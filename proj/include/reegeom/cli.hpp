// cli.hpp
// Command-line front end for ree_geom. All file I/O of the toolkit lives here.
//
// Exit codes: 0 ok, 1 a check failed, 2 bad input, 3 unsupported method.

#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "reegeom/core.hpp"
#include "reegeom/css.hpp"
#include "reegeom/geometry.hpp"
#include "reegeom/oracle.hpp"
#include "reegeom/qstate.hpp"
#include "reegeom/ree.hpp"
#include "reegeom/revmap.hpp"
#include "reegeom/verify.hpp"
#include "reegeom/version.hpp"

namespace reegeom::cli {

using json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kInputError = 2, kUnsupported = 3 };

// Thrown for malformed files and flags; maps to exit code 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---- JSON conversions ------------------------------------------------------

inline json to_json(const Vector3& v) { return json::array({v(0), v(1), v(2)}); }

inline json to_json(const Vector4& v) { return json::array({v(0), v(1), v(2), v(3)}); }

template <class M>
json real_rows(const M& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

template <class M>
json complex_matrix(const M& m) {
  return json{{"re", real_rows(m.real().eval())}, {"im", real_rows(m.imag().eval())}};
}

inline std::vector<std::vector<double>> read_rows(const json& j, const char* key, int n, bool required) {
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
  if (!j.contains(key)) {
    if (required) throw InputError(std::string("missing field '") + key + "'");
    return rows;
  }
  const json& a = j.at(key);
  if (!a.is_array() || a.size() != static_cast<std::size_t>(n))
    throw InputError(std::string("field '") + key + "' must be a " + std::to_string(n) + "x" + std::to_string(n) + " array");
  for (int i = 0; i < n; ++i) {
    const json& row = a[static_cast<std::size_t>(i)];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(n))
      throw InputError(std::string("row ") + std::to_string(i) + " of '" + key + "' has the wrong length");
    for (int k = 0; k < n; ++k) {
      if (!row[static_cast<std::size_t>(k)].is_number())
        throw InputError(std::string("non-numeric entry in '") + key + "'");
      rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = row[static_cast<std::size_t>(k)].get<double>();
    }
  }
  return rows;
}

inline Matrix4c matrix_from_json(const json& j) {
  const auto re = read_rows(j, "re", 4, true);
  const auto im = read_rows(j, "im", 4, false);
  Matrix4c m;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) m(i, k) = Complex(re[i][k], im[i][k]);
  return m;
}

inline Vector3 vector3_from_json(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array() || j.at(key).size() != 3)
    throw InputError(std::string("field '") + key + "' must be an array of 3 numbers");
  Vector3 v;
  for (int i = 0; i < 3; ++i) {
    const json& e = j.at(key)[static_cast<std::size_t>(i)];
    if (!e.is_number()) throw InputError(std::string("non-numeric entry in '") + key + "'");
    v(i) = e.get<double>();
  }
  return v;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline DensityMatrix read_state(const std::string& path, double psd_tol) {
  return DensityMatrix::from_matrix(matrix_from_json(read_json_file(path)), psd_tol);
}

// ---- run manifest ----------------------------------------------------------

struct Manifest {
  std::string subcommand;
  std::vector<std::string> inputs;
  json flags = json::object();
  std::optional<unsigned long long> seed;
  std::vector<std::string> outputs;

  json to_json() const {
    json j;
    j["subcommand"] = subcommand;
    j["inputs"] = inputs;
    j["flags"] = flags;
    j["seed"] = seed ? json(*seed) : json(nullptr);
    j["version"] = kVersion;
    j["outputs"] = outputs;
    return j;
  }
};

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

// JSON documents go to `path`, or to `out` when no path is given.
inline void emit_json(const json& doc, const std::string& path, std::ostream& out) {
  const std::string text = doc.dump(2) + "\n";
  if (path.empty())
    out << text;
  else
    write_text(path, text);
}

// ---- subcommands -----------------------------------------------------------

inline json decompose_report(const DensityMatrix& rho) {
  const PauliForm p = to_pauli(rho);
  const Canonicalization c = canonicalize(rho);
  json j;
  j["r"] = to_json(p.r);
  j["s"] = to_json(p.s);
  j["g"] = real_rows(p.g);
  j["canonical"] = {{"r", to_json(c.form.r)},
                    {"s", to_json(c.form.s)},
                    {"q", to_json(c.form.q)},
                    {"rot_a", real_rows(c.rot_a)},
                    {"rot_b", real_rows(c.rot_b)},
                    {"degenerate_frame", c.degenerate_frame}};
  j["local_unitary"] = {{"a", complex_matrix(c.lu.a)}, {"b", complex_matrix(c.lu.b)}};
  j["eigenvalues"] = to_json(eigenvalues(rho.matrix()));
  j["pt_eigenvalues"] = to_json(eigenvalues(partial_transpose(rho)));
  j["concurrence"] = concurrence(rho);
  j["ppt"] = is_ppt(rho);
  j["family"] = std::string(to_string(classify(rho).family));
  return j;
}

inline PauliForm pauli_from_json(const json& j) {
  PauliForm p;
  p.r = vector3_from_json(j, "r");
  p.s = vector3_from_json(j, "s");
  const auto g = read_rows(j, "g", 3, true);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) p.g(i, k) = g[i][k];
  return p;
}

struct CssOptions {
  std::string method = "auto";
  bool bits = false;
  OracleConfig oracle;
};

inline json css_report(const DensityMatrix& rho, const CssOptions& opt) {
  const double unit = opt.bits ? 1.0 / std::numbers::ln2 : 1.0;
  json j;
  j["method"] = opt.method;

  CssResult r;
  std::optional<ReeReport> numeric;
  if (opt.method == "numeric") {
    const Classification cls = classify_detailed(rho);
    numeric = ree_numeric(rho, opt.oracle);
    r.css = numeric->css_numeric;
    r.tau = to_pauli(cls.lu.apply(r.css.matrix())).g.diagonal();
    r.family = cls.tag;
    r.ree = numeric->value;
    r.status = is_ppt(rho) ? CssStatus::AlreadySeparable : CssStatus::Entangled;
    r.geometric = false;
    r.residuals = detail::residuals_for(rho.matrix(), r.css.matrix());
  } else {
    if (opt.method == "geometric") (void)ree_geometric(rho);  // refuses entangled states outside the families
    r = css_auto(rho, opt.oracle);
  }

  j["family"] = std::string(to_string(r.family.family));
  j["lambda"] = r.family.lambda ? to_json(*r.family.lambda) : json(nullptr);
  j["status"] = std::string(to_string(r.status));
  j["geometric"] = r.geometric;
  j["ree"] = r.ree * unit;
  j["units"] = opt.bits ? "bits" : "nats";
  j["tau"] = to_json(r.tau);
  j["css"] = complex_matrix(r.css.matrix());
  json residuals = {{"bloch_gap", r.residuals.bloch_gap}, {"edge_gap", r.residuals.edge_gap}};
  if (r.geometric && r.status == CssStatus::Entangled && r.family.lambda)
    residuals["recovery_gap"] = recovery_gap(r);
  j["residuals"] = residuals;
  if (numeric) {
    j["oracle"] = {{"converged", numeric->converged},
                   {"iterations", numeric->iterations},
                   {"restart_values", numeric->restart_values}};
  }
  return j;
}

inline std::string mesh_csv(const SurfaceMesh& mesh) {
  std::string text = "q1,q2,q3,sheet\n";
  for (const auto& p : mesh.points) {
    text += format_double(p.q(0)) + "," + format_double(p.q(1)) + "," + format_double(p.q(2)) + "," +
            std::string(to_string(p.sheet)) + "\n";
  }
  return text;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string text = "family_id,x,t1,t2,t3,tau1,tau2,tau3,r,s\n";
  for (const auto& row : rows) {
    text += std::to_string(row.family_id) + "," + format_double(row.x);
    for (int i = 0; i < 3; ++i) text += "," + format_double(row.t(i));
    for (int i = 0; i < 3; ++i) text += "," + format_double(row.tau(i));
    text += "," + format_double(row.r) + "," + format_double(row.s) + "\n";
  }
  return text;
}

inline json verify_json(const std::vector<CriterionReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) {
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    arr.push_back({{"criterion", r.id}, {"title", r.title}, {"pass", r.pass()}, {"checks", checks}});
  }
  return arr;
}

inline void print_report(const std::vector<CriterionReport>& reports, std::ostream& out) {
  for (const auto& r : reports) {
    out << (r.pass() ? "[PASS]" : "[FAIL]") << " criterion " << r.id << ": " << r.title << "\n";
    for (const auto& c : r.checks) out << "    " << (c.pass ? "ok   " : "FAIL ") << c.name << "  (" << c.detail << ")\n";
  }
}

inline int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::InvalidState:
    case ErrorCode::InvalidArgument:
    case ErrorCode::OutsideTetrahedron: return kInputError;
    case ErrorCode::NotSolvableFamily: return kUnsupported;
    default: return kCheckFailed;
  }
}

/// Parses argv and runs one subcommand. Output goes to `out`, diagnostics to
/// `err`; the return value is the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Closest separable states and relative entropy of entanglement for two qubits"};
  app.footer("Exit codes: 0 ok, 1 check failed, 2 input error, 3 unsupported method.\n"
             "REE_GEOM_THREADS caps the number of worker threads.");
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  double psd_tol = kPsdTolerance;
  app.add_option("--psd-tol", psd_tol, "Tolerance on negative eigenvalues of input states")
      ->check(CLI::NonNegativeNumber);

  std::string in_path, out_path;

  auto* decompose = app.add_subcommand("decompose", "Pauli data, canonical frame, spectra, concurrence");
  decompose->add_option("state", in_path, "State JSON {\"re\": 4x4, \"im\": 4x4}")->required();
  decompose->add_option("--out", out_path, "Output JSON (stdout when omitted)");

  auto* reconstruct = app.add_subcommand("reconstruct", "Density matrix from Pauli data {r, s, g}");
  reconstruct->add_option("pauli", in_path, "Pauli JSON as written by decompose")->required();
  reconstruct->add_option("--out", out_path, "Output JSON (stdout when omitted)");

  CssOptions css_opt;
  auto* css = app.add_subcommand("css", "Closest separable state and REE");
  css->add_option("state", in_path, "State JSON")->required();
  css->add_option("--method", css_opt.method, "geometric, numeric or auto")
      ->check(CLI::IsMember({"geometric", "numeric", "auto"}));
  css->add_flag("--bits", css_opt.bits, "Report REE in bits instead of nats");
  css->add_option("--seed", css_opt.oracle.seed, "Oracle seed");
  css->add_option("--restarts", css_opt.oracle.restarts, "Oracle restarts")->check(CLI::PositiveNumber);
  css->add_option("--iterations", css_opt.oracle.max_iterations, "Oracle iteration budget")->check(CLI::PositiveNumber);
  css->add_option("--out", out_path, "Output JSON (stdout when omitted)");

  std::string body = "T";
  double r = 0.0, s = 0.0;
  int n = 64;
  auto* surface = app.add_subcommand("surface", "Boundary mesh of the deformed tetrahedron or octahedron");
  surface->add_option("--body", body, "T or L")->check(CLI::IsMember({"T", "L"}))->required();
  surface->add_option("--r", r, "z-Bloch component of qubit A")->check(CLI::Range(-1.0, 1.0))->required();
  surface->add_option("--s", s, "z-Bloch component of qubit B")->check(CLI::Range(-1.0, 1.0))->required();
  surface->add_option("--n", n, "Grid points per axis")->check(CLI::Range(2, 100000));
  surface->add_option("--out", out_path, "Output CSV")->required();

  int families = 8, xsteps = 21;
  unsigned long long seed = 1;
  auto* sweep = app.add_subcommand("sweep", "Lines of states sharing a closest separable state");
  sweep->add_option("--r", r, "z-Bloch component of qubit A")->check(CLI::Range(-1.0, 1.0))->required();
  sweep->add_option("--s", s, "z-Bloch component of qubit B")->check(CLI::Range(-1.0, 1.0))->required();
  sweep->add_option("--families", families, "Number of families")->check(CLI::NonNegativeNumber);
  sweep->add_option("--xsteps", xsteps, "Points per family")->check(CLI::NonNegativeNumber);
  sweep->add_option("--seed", seed, "Sampling seed");
  sweep->add_option("--out", out_path, "Output CSV")->required();

  std::string suite = "all";
  VerifyOptions verify_opt;
  auto* verify = app.add_subcommand("verify", "Run the built-in acceptance checks");
  verify->add_option("--suite", suite, "families, revmap, oracle or all")
      ->check(CLI::IsMember({"families", "revmap", "oracle", "all"}));
  verify->add_option("--seed", verify_opt.seed, "Sampling seed");
  verify->add_option("--iterations", verify_opt.oracle.max_iterations, "Oracle iteration budget")
      ->check(CLI::PositiveNumber);
  verify->add_option("--count", verify_opt.family_count, "States per family")->check(CLI::PositiveNumber);
  verify->add_option("--out", out_path, "JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion& e) {
    out << kVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  Manifest manifest;
  manifest.subcommand = app.get_subcommands().front()->get_name();
  try {
    if (*decompose) {
      manifest.inputs = {in_path};
      manifest.flags = {{"psd_tol", psd_tol}};
      if (!out_path.empty()) manifest.outputs = {out_path};
      json doc = {{"manifest", manifest.to_json()}};
      doc.update(decompose_report(read_state(in_path, psd_tol)));
      emit_json(doc, out_path, out);
    } else if (*reconstruct) {
      manifest.inputs = {in_path};
      manifest.flags = {{"psd_tol", psd_tol}};
      if (!out_path.empty()) manifest.outputs = {out_path};
      const DensityMatrix rho = from_pauli(pauli_from_json(read_json_file(in_path)), psd_tol).state(psd_tol);
      json doc = {{"manifest", manifest.to_json()}};
      doc.update(complex_matrix(rho.matrix()));
      emit_json(doc, out_path, out);
    } else if (*css) {
      manifest.inputs = {in_path};
      manifest.flags = {{"method", css_opt.method},
                        {"bits", css_opt.bits},
                        {"restarts", css_opt.oracle.restarts},
                        {"iterations", css_opt.oracle.max_iterations},
                        {"psd_tol", psd_tol}};
      manifest.seed = css_opt.oracle.seed;
      if (!out_path.empty()) manifest.outputs = {out_path};
      const DensityMatrix rho = read_state(in_path, psd_tol);
      json doc = {{"manifest", manifest.to_json()}};
      doc.update(css_report(rho, css_opt));
      emit_json(doc, out_path, out);
    } else if (*surface) {
      const SurfaceMesh mesh = surface_mesh(body == "T" ? Body::T : Body::L, r, s, n);
      manifest.flags = {{"body", body}, {"r", r}, {"s", s}, {"n", n}};
      manifest.outputs = {out_path};
      write_text(out_path, mesh_csv(mesh));
      write_text(out_path + ".manifest.json", manifest.to_json().dump(2) + "\n");
      out << mesh.points.size() << " points written to " << out_path << "\n";
    } else if (*sweep) {
      const std::vector<SigmaZParams> params = sample_sweep_params(r, s, families, seed);
      const std::vector<SweepRow> rows = css_line_sweep(params, sweep_x_grid(params, xsteps));
      manifest.flags = {{"r", r}, {"s", s}, {"families", families}, {"xsteps", xsteps}};
      manifest.seed = seed;
      manifest.outputs = {out_path};
      write_text(out_path, sweep_csv(rows));
      write_text(out_path + ".manifest.json", manifest.to_json().dump(2) + "\n");
      out << rows.size() << " rows written to " << out_path << "\n";
    } else if (*verify) {
      const std::vector<CriterionReport> reports = run_suite(suite, verify_opt);
      print_report(reports, out);
      bool pass = true;
      for (const auto& rep : reports) pass = pass && rep.pass();
      if (!out_path.empty()) {
        manifest.flags = {{"suite", suite}, {"iterations", verify_opt.oracle.max_iterations}, {"count", verify_opt.family_count}};
        manifest.seed = verify_opt.seed;
        manifest.outputs = {out_path};
        emit_json({{"manifest", manifest.to_json()}, {"pass", pass}, {"criteria", verify_json(reports)}}, out_path, out);
      }
      return pass ? kOk : kCheckFailed;
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    err << "error: " << e.what();
    if (e.magnitude() != 0.0) err << " (magnitude " << format_double(e.magnitude()) << ")";
    err << "\n";
    return exit_code_for(e);
  }
  return kOk;
}

}  // namespace reegeom::cli
