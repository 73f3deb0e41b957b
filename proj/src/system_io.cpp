#include "ssmparam/system_io.hpp"

#include <fstream>
#include <iostream>
#include <set>

namespace ssmparam {

using nlohmann::json;

namespace {

const json& require_field(const json& j, const char* name, const std::string& path) {
  if (!j.is_object()) throw ParseError(path + ": expected an object");
  auto it = j.find(name);
  if (it == j.end()) throw ParseError(path + "." + name + ": missing required field");
  return *it;
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path + ": expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ParseError(path + ": expected an integer");
  return j.get<int>();
}

Cplx as_complex(const json& j, const std::string& path) {
  if (j.is_number()) return Cplx(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return Cplx(j[0].get<double>(), j[1].get<double>());
  throw ParseError(path + ": expected a number or an [re, im] pair");
}

Eigen::MatrixXd as_matrix(const json& j, int rows, int cols, const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    throw ParseError(path + ": expected " + std::to_string(rows) + " rows");
  Eigen::MatrixXd out(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw ParseError(path + "[" + std::to_string(i) + "]: expected " + std::to_string(cols) +
                       " columns");
    for (int k = 0; k < cols; ++k)
      out(i, k) = as_number(row[static_cast<std::size_t>(k)],
                            path + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
  }
  return out;
}

Mat3 as_mat3(const json& j, const std::string& path) { return as_matrix(j, 3, 3, path); }

std::vector<int> as_indices(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ParseError(path + ": expected a nonempty index array");
  std::vector<int> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(as_int(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<MechTerm> parse_mech_terms(const json& j, std::size_t arity, const std::string& path) {
  std::vector<MechTerm> terms;
  if (!j.is_array()) throw ParseError(path + ": expected an array of terms");
  std::set<std::pair<int, std::vector<int>>> seen;
  bool warned = false;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string tpath = path + "[" + std::to_string(i) + "]";
    const json& t = j[i];
    MechTerm term;
    term.row = as_int(require_field(t, "row", tpath), tpath + ".row");
    term.indices = as_indices(require_field(t, "indices", tpath), tpath + ".indices");
    term.value = as_number(require_field(t, "value", tpath), tpath + ".value");
    if (term.indices.size() != arity)
      throw ParseError(tpath + ".indices: expected " + std::to_string(arity) + " indices");
    std::vector<int> canon = term.indices;
    std::sort(canon.begin(), canon.end());
    if (!seen.insert({term.row, canon}).second && !warned) {
      std::cerr << "warning: " << tpath << ": duplicate monomial for row " << term.row
                << "; coefficients are summed under the canonical key\n";
      warned = true;
    }
    terms.push_back(std::move(term));
  }
  return terms;
}

MechSystem parse_mechanical(const json& j) {
  MechSystem mech;
  mech.n2 = as_int(require_field(j, "n2", "$"), "$.n2");
  if (mech.n2 < 1) throw ParseError("$.n2: must be >= 1");
  mech.mass = as_matrix(require_field(j, "mass", "$"), mech.n2, mech.n2, "$.mass");
  mech.stiffness = as_matrix(require_field(j, "stiffness", "$"), mech.n2, mech.n2, "$.stiffness");
  if (j.contains("damping_alpha")) mech.damping_alpha = as_number(j["damping_alpha"], "$.damping_alpha");
  if (j.contains("damping_beta")) mech.damping_beta = as_number(j["damping_beta"], "$.damping_beta");
  if (j.contains("quadratic")) mech.quadratic = parse_mech_terms(j["quadratic"], 2, "$.quadratic");
  if (j.contains("cubic")) mech.cubic = parse_mech_terms(j["cubic"], 3, "$.cubic");
  if (j.contains("forcing")) {
    const json& f = j["forcing"];
    const json& vec = require_field(f, "vector", "$.forcing");
    if (!vec.is_array() || static_cast<int>(vec.size()) != mech.n2)
      throw ParseError("$.forcing.vector: expected length n2");
    mech.forcing_vector = Eigen::VectorXd(mech.n2);
    for (int i = 0; i < mech.n2; ++i)
      mech.forcing_vector(i) = as_number(vec[static_cast<std::size_t>(i)],
                                         "$.forcing.vector[" + std::to_string(i) + "]");
    mech.forcing_omega = as_number(require_field(f, "omega", "$.forcing"), "$.forcing.omega");
  }
  if (j.contains("parameter")) {
    const json& p = j["parameter"];
    if (p.contains("stiffness"))
      mech.parameter_stiffness = as_matrix(p["stiffness"], mech.n2, mech.n2, "$.parameter.stiffness");
    if (p.contains("quadratic"))
      mech.parameter_quadratic = parse_mech_terms(p["quadratic"], 2, "$.parameter.quadratic");
    if (p.contains("cubic"))
      mech.parameter_cubic = parse_mech_terms(p["cubic"], 3, "$.parameter.cubic");
  }
  try {
    mech.validate();
  } catch (const std::exception& e) {
    throw ParseError(std::string("$: ") + e.what());
  }
  return mech;
}

PolySystem parse_polynomial(const json& j) {
  const int n = as_int(require_field(j, "n", "$"), "$.n");
  const json& terms = require_field(j, "terms", "$");
  if (!terms.is_array()) throw ParseError("$.terms: expected an array");
  int max_order = 1;
  for (const auto& t : terms) {
    if (t.contains("indices") && t["indices"].is_array())
      max_order = std::max(max_order, static_cast<int>(t["indices"].size()));
  }
  PolySystem sys(n, max_order);
  std::set<std::pair<int, std::vector<int>>> seen;
  bool warned = false;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string tpath = "$.terms[" + std::to_string(i) + "]";
    const json& t = terms[i];
    const int row = as_int(require_field(t, "row", tpath), tpath + ".row");
    std::vector<int> indices = as_indices(require_field(t, "indices", tpath), tpath + ".indices");
    const Cplx value = as_complex(require_field(t, "value", tpath), tpath + ".value");
    std::vector<int> canon = indices;
    std::sort(canon.begin(), canon.end());
    if (!seen.insert({row, canon}).second && !warned) {
      std::cerr << "warning: " << tpath << ": duplicate monomial for row " << row
                << "; coefficients are summed under the canonical key\n";
      warned = true;
    }
    try {
      sys.add_term(row, std::move(indices), value);
    } catch (const std::exception& e) {
      throw ParseError(tpath + ": " + e.what());
    }
  }
  return sys;
}

}  // namespace

SystemInput parse_system_json(const json& j) {
  const json& kind = require_field(j, "kind", "$");
  if (!kind.is_string()) throw ParseError("$.kind: expected a string");
  SystemInput input;
  const std::string k = kind.get<std::string>();
  if (k == "mechanical") {
    input.mech = parse_mechanical(j);
  } else if (k == "polynomial") {
    input.poly = parse_polynomial(j);
  } else {
    throw ParseError("$.kind: expected \"mechanical\" or \"polynomial\"");
  }
  return input;
}

SystemInput parse_system_file(const std::string& path) {
  return parse_system_json(load_json_file(path));
}

ExpandInput parse_expand_file(const std::string& path) {
  const json j = load_json_file(path);
  ExpandInput input;
  input.morph_gradient = as_mat3(require_field(j, "morph_gradient", "$"), "$.morph_gradient");
  input.order = as_int(require_field(j, "order", "$"), "$.order");
  if (input.order < 0) throw ParseError("$.order: must be >= 0");
  if (j.contains("mu_range")) {
    const json& r = j["mu_range"];
    if (!r.is_array() || r.size() != 2) throw ParseError("$.mu_range: expected [lo, hi]");
    input.mu_lo = as_number(r[0], "$.mu_range[0]");
    input.mu_hi = as_number(r[1], "$.mu_range[1]");
    if (input.mu_hi < input.mu_lo) throw ParseError("$.mu_range: lo must not exceed hi");
  }
  if (j.contains("samples")) {
    input.samples = as_int(j["samples"], "$.samples");
    if (input.samples < 2) throw ParseError("$.samples: must be >= 2");
  }
  return input;
}

IntegrandInput parse_integrand_file(const std::string& path) {
  const json j = load_json_file(path);
  IntegrandInput input;
  const json& e = require_field(j, "elasticity", "$");
  input.elasticity.lame_lambda = as_number(require_field(e, "lame_lambda", "$.elasticity"),
                                           "$.elasticity.lame_lambda");
  input.elasticity.lame_mu = as_number(require_field(e, "lame_mu", "$.elasticity"),
                                       "$.elasticity.lame_mu");
  if (!(input.elasticity.lame_mu > 0))
    throw ParseError("$.elasticity.lame_mu: must be positive");
  if (!(input.elasticity.lame_lambda + 2.0 / 3.0 * input.elasticity.lame_mu > 0))
    throw ParseError("$.elasticity: lambda + 2/3 mu must be positive");
  const json& pts = require_field(j, "points", "$");
  if (!pts.is_array() || pts.empty()) throw ParseError("$.points: expected a nonempty array");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::string ppath = "$.points[" + std::to_string(i) + "]";
    const json& p = pts[i];
    PointState state;
    state.grad_u = as_mat3(require_field(p, "grad_u", ppath), ppath + ".grad_u");
    state.grad_w = as_mat3(require_field(p, "grad_w", ppath), ppath + ".grad_w");
    state.grad_morph = as_mat3(require_field(p, "grad_morph", ppath), ppath + ".grad_morph");
    state.accel_dot_w = as_number(require_field(p, "accel_dot_w", ppath), ppath + ".accel_dot_w");
    state.density = as_number(require_field(p, "density", ppath), ppath + ".density");
    if (!(state.density > 0)) throw ParseError(ppath + ".density: must be positive");
    input.points.push_back(state);
  }
  return input;
}

namespace {

json complex_to_json(Cplx value) { return json::array({value.real(), value.imag()}); }

json cvec_to_json(const CVec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

CVec cvec_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path + ": expected an array of [re, im] pairs");
  CVec out(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = as_complex(j[i], path + "[" + std::to_string(i) + "]");
  return out;
}

}  // namespace

json reduce_result_to_json(const ReduceResult& result) {
  json out;
  out["n"] = result.spectrum.n();
  out["m"] = result.spectrum.m();
  out["completed_order"] = result.completed_order;
  out["outer_resonance"] = result.outer_resonance;
  out["eigenvalues"] = json::array();
  for (int j = 0; j < result.spectrum.n(); ++j)
    out["eigenvalues"].push_back(complex_to_json(result.spectrum.eigenvalues(j)));
  out["masters"] = json::array();
  for (int idx : result.spectrum.master_indices) out["masters"].push_back(idx + 1);
  json w = json::object();
  for (const auto& [nu, column] : result.w.columns) w[nu.key()] = cvec_to_json(column);
  out["W"] = std::move(w);
  json f = json::object();
  for (const auto& [nu, column] : result.f.columns) f[nu.key()] = cvec_to_json(column);
  out["f"] = std::move(f);
  json reports = json::array();
  for (const auto& report : result.reports) {
    json r;
    r["monomial"] = report.monomial.key();
    r["sigma"] = complex_to_json(report.sigma);
    r["eigenvalue"] = complex_to_json(report.eigenvalue);
    r["eigen_index"] = report.eigen_index + 1;
    r["kind"] = report.kind == ResonanceReport::Kind::outer ? "outer" : "inner";
    reports.push_back(std::move(r));
  }
  out["reports"] = std::move(reports);
  return out;
}

RomData rom_from_json(const json& j) {
  RomData rom;
  rom.n = as_int(require_field(j, "n", "$"), "$.n");
  rom.m = as_int(require_field(j, "m", "$"), "$.m");
  rom.eigenvalues = cvec_from_json(require_field(j, "eigenvalues", "$"), "$.eigenvalues");
  for (const auto& idx : require_field(j, "masters", "$"))
    rom.master_indices.push_back(as_int(idx, "$.masters[]") - 1);
  rom.w.m = rom.m;
  rom.w.n = rom.n;
  rom.f.m = rom.m;
  const json& w = require_field(j, "W", "$");
  for (auto it = w.begin(); it != w.end(); ++it) {
    const CVec column = cvec_from_json(it.value(), "$.W." + it.key());
    if (column.size() != rom.n) throw ParseError("$.W." + it.key() + ": expected length n");
    rom.w.columns[Monomial::parse_key(it.key())] = column;
  }
  const json& f = require_field(j, "f", "$");
  for (auto it = f.begin(); it != f.end(); ++it) {
    const CVec column = cvec_from_json(it.value(), "$.f." + it.key());
    if (column.size() != rom.m) throw ParseError("$.f." + it.key() + ": expected length m");
    rom.f.columns[Monomial::parse_key(it.key())] = column;
  }
  return rom;
}

RomData rom_from_file(const std::string& path) { return rom_from_json(load_json_file(path)); }

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return j;
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open file for writing");
  out << j.dump(2) << '\n';
}

}  // namespace ssmparam
