#pragma once

#include "gps/analysis.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

namespace gps {

// Optional assertions carried by fixture documents.
struct Expectations {
  std::optional<Scalar> prefactor;  // computed tensors = prefactor * reference tensors
  std::optional<Poly> minpoly;
  std::optional<std::vector<std::string>> blocks;
  std::optional<bool> minimal;
  std::vector<std::pair<std::string, GenVector>> frame;  // named frame, file order
};

struct InputDocument {
  std::string name;
  size_t dim = 0;
  LiePresentation g;
  Endo phi;
  std::vector<std::array<std::string, 4>> bracket_text;  // echo of the bracket entries
  Expectations expect;
};

namespace detail {

inline std::string location(const std::string& text, size_t byte) {
  size_t line = 1, col = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

using ojson = nlohmann::ordered_json;

inline void reject_unknown(const ojson& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) throw ValidationError(where + ": unknown field \"" + k + "\"");
}

inline const ojson& field(const ojson& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(where + ": missing field \"" + key + "\"");
  return *it;
}

inline Scalar scalar_at(const ojson& v, const std::string& where) {
  if (!v.is_string()) throw ValidationError(where + ": expected a scalar string");
  try {
    return Scalar::parse(v.get<std::string>());
  } catch (const ParseError& e) {
    throw ValidationError(where + ": " + e.what());
  }
}

inline std::vector<Scalar> scalar_list(const ojson& v, size_t len, const std::string& where) {
  if (!v.is_array() || (len && v.size() != len))
    throw ValidationError(where + ": expected a list of " + (len ? std::to_string(len) + " " : "") + "scalar strings");
  std::vector<Scalar> out;
  for (size_t i = 0; i < v.size(); ++i) out.push_back(scalar_at(v[i], where + "/" + std::to_string(i)));
  return out;
}

inline Expectations parse_expect(const ojson& e, size_t dim) {
  const std::string where = "/expect";
  if (!e.is_object()) throw ValidationError(where + ": expected an object");
  reject_unknown(e, {"prefactor", "minpoly", "blocks", "minimal", "frame"}, where);
  Expectations x;
  if (e.contains("prefactor")) {
    x.prefactor = scalar_at(e["prefactor"], where + "/prefactor");
    if (x.prefactor->is_zero()) throw ValidationError(where + "/prefactor: must be nonzero");
  }
  if (e.contains("minpoly")) x.minpoly = Poly(scalar_list(e["minpoly"], 0, where + "/minpoly"));
  if (e.contains("blocks")) {
    const auto& b = e["blocks"];
    if (!b.is_array()) throw ValidationError(where + "/blocks: expected a list of labels");
    x.blocks.emplace();
    for (const auto& s : b) {
      if (!s.is_string()) throw ValidationError(where + "/blocks: expected a list of labels");
      x.blocks->push_back(s.get<std::string>());
    }
  }
  if (e.contains("minimal")) {
    if (!e["minimal"].is_boolean()) throw ValidationError(where + "/minimal: expected a boolean");
    x.minimal = e["minimal"].get<bool>();
  }
  if (e.contains("frame")) {
    if (!e["frame"].is_object()) throw ValidationError(where + "/frame: expected an object");
    for (const auto& [k, v] : e["frame"].items())
      x.frame.emplace_back(k, scalar_list(v, 2 * dim, where + "/frame/" + k));
  }
  return x;
}

}  // namespace detail

// Parses and validates an input document. Syntax errors carry line/column, schema errors a JSON path.
inline InputDocument parse_document(const std::string& text) {
  using detail::ojson;
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::string msg = e.what();
    auto col = msg.find("column ");
    auto pos = col == std::string::npos ? col : msg.find(": ", col);
    throw ValidationError("malformed JSON at " + detail::location(text, e.byte ? e.byte - 1 : 0) + ": " +
                          (pos == std::string::npos ? msg : msg.substr(pos + 2)));
  }
  if (!j.is_object()) throw ValidationError("/: expected an object");
  detail::reject_unknown(j, {"name", "dim", "bracket", "phi", "expect"}, "/");

  InputDocument doc;
  const auto& name = detail::field(j, "name", "/");
  if (!name.is_string()) throw ValidationError("/name: expected a string");
  doc.name = name.get<std::string>();

  const auto& dim = detail::field(j, "dim", "/");
  if (!dim.is_number_integer() || dim.get<long long>() < 1 || dim.get<long long>() > 16)
    throw ValidationError("/dim: expected an integer in 1..16");
  doc.dim = static_cast<size_t>(dim.get<long long>());
  size_t n = doc.dim;

  const auto& br = detail::field(j, "bracket", "/");
  if (!br.is_array()) throw ValidationError("/bracket: expected a list");
  doc.g = LiePresentation(n);
  std::set<std::pair<long long, long long>> seen;
  std::map<std::pair<long long, long long>, std::set<long long>> seen_k;
  for (size_t e = 0; e < br.size(); ++e) {
    std::string where = "/bracket/" + std::to_string(e);
    const auto& row = br[e];
    if (!row.is_array() || row.size() != 4) throw ValidationError(where + ": expected [i, j, k, scalar]");
    long long idx[3];
    for (int t = 0; t < 3; ++t) {
      if (!row[t].is_number_integer()) throw ValidationError(where + "/" + std::to_string(t) + ": expected an integer");
      idx[t] = row[t].get<long long>();
      if (idx[t] < 1 || idx[t] > static_cast<long long>(n))
        throw ValidationError(where + "/" + std::to_string(t) + ": index out of range 1.." + std::to_string(n));
    }
    if (idx[0] >= idx[1]) throw ValidationError(where + ": requires i < j");
    if (!seen_k[{idx[0], idx[1]}].insert(idx[2]).second) throw ValidationError(where + ": duplicate entry");
    Scalar c = detail::scalar_at(row[3], where + "/3");
    doc.g.set(idx[0] - 1, idx[1] - 1, idx[2] - 1, c);
    doc.bracket_text.push_back({std::to_string(idx[0]), std::to_string(idx[1]), std::to_string(idx[2]), c.str()});
  }

  const auto& ph = detail::field(j, "phi", "/");
  if (!ph.is_array() || ph.size() != 2 * n) throw ValidationError("/phi: expected " + std::to_string(2 * n) + " rows");
  doc.phi = Endo(2 * n, 2 * n);
  for (size_t r = 0; r < 2 * n; ++r) {
    auto row = detail::scalar_list(ph[r], 2 * n, "/phi/" + std::to_string(r));
    for (size_t c = 0; c < 2 * n; ++c) doc.phi(r, c) = row[c];
  }
  if (j.contains("expect")) doc.expect = detail::parse_expect(j["expect"], n);
  return doc;
}

inline InputDocument load_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str());
}

// ---------------------------------------------------------------------------------------------
// Report

struct BracketEcho {
  int i = 0, j = 0, k = 0;
  std::string coefficient;
  bool operator==(const BracketEcho&) const = default;
};

struct SpectrumEntry {
  std::string lambda;
  int multiplicity = 0;
  int rank = 0;
  bool operator==(const SpectrumEntry&) const = default;
};

struct BlockEntry {
  std::string type;
  int degree = 0;
  std::vector<std::string> eigenvalues;
  int epsilon = 0;
  std::vector<int> signature;
  bool operator==(const BlockEntry&) const = default;
};

struct TensorEntry {
  std::vector<std::string> indices;
  std::string value;
  bool operator==(const TensorEntry&) const = default;
};

struct TorsionRow {
  int order = 0;
  bool t_vanishes = true;
  bool s_vanishes = true;
  std::vector<TensorEntry> t_witness;  // first nonzero entry, empty when vanishing
  std::vector<TensorEntry> s_witness;
  bool operator==(const TorsionRow&) const = default;
};

struct WeakWitness {
  std::string mu, nu;
  int x_index = 0, y_index = 0;
  std::vector<std::string> bracket;
  bool operator==(const WeakWitness&) const = default;
};

struct VerdictReport {
  bool minimal = false;
  bool non_resonant = false;
  bool weak_nijenhuis = false;
  bool generalized_nijenhuis = false;
  std::vector<std::string> courant_witness;    // frame names of a nonzero minimal-torsion entry
  std::vector<std::string> resonance_witness;  // eigenvalues (l, m, n)
  std::vector<WeakWitness> weak_witness;
  bool operator==(const VerdictReport&) const = default;
};

struct DLambdaEntry {
  std::string lambda;
  int multiplicity = 0;
  bool criterion = false;
  bool operator==(const DLambdaEntry&) const = default;
};

struct AnalysisReport {
  std::string name;
  int dim = 0;
  std::vector<BracketEcho> bracket;
  std::vector<std::vector<std::string>> phi;
  std::vector<std::string> minpoly;  // coefficients, degree 0 first
  std::string minpoly_text;
  std::vector<SpectrumEntry> spectrum;
  std::vector<std::string> sigma_plus;
  std::vector<BlockEntry> blocks;
  std::string block_type;
  int torsion_max = 0;
  std::vector<TorsionRow> torsions;
  bool torsion_closed_forms_agree = false;
  std::vector<TensorEntry> minimal_torsion;
  bool routes_agree = false;
  VerdictReport verdicts;
  std::vector<DLambdaEntry> dlambda;
  bool dlambda_sum_is_d = false;
  std::vector<std::string> spectral_failures;
  std::vector<std::string> block_failures;
  bool operator==(const AnalysisReport&) const = default;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(BracketEcho, i, j, k, coefficient)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SpectrumEntry, lambda, multiplicity, rank)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(BlockEntry, type, degree, eigenvalues, epsilon, signature)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(TensorEntry, indices, value)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(TorsionRow, order, t_vanishes, s_vanishes, t_witness, s_witness)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(WeakWitness, mu, nu, x_index, y_index, bracket)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(VerdictReport, minimal, non_resonant, weak_nijenhuis, generalized_nijenhuis,
                                   courant_witness, resonance_witness, weak_witness)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(DLambdaEntry, lambda, multiplicity, criterion)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(AnalysisReport, name, dim, bracket, phi, minpoly, minpoly_text, spectrum,
                                   sigma_plus, blocks, block_type, torsion_max, torsions, torsion_closed_forms_agree,
                                   minimal_torsion, routes_agree, verdicts, dlambda, dlambda_sum_is_d,
                                   spectral_failures, block_failures)

inline std::vector<TensorEntry> tensor_entries(const Tensor3& t, size_t n, size_t limit = SIZE_MAX) {
  std::vector<TensorEntry> out;
  for (const auto& [k, v] : t.entries()) {
    if (out.size() >= limit) break;
    out.push_back({{frame_name(n, k[0]), frame_name(n, k[1]), frame_name(n, k[2])}, v.str()});
  }
  return out;
}

inline AnalysisReport make_report(const InputDocument& doc, const Analysis& a) {
  AnalysisReport r;
  size_t n = doc.dim;
  r.name = doc.name;
  r.dim = static_cast<int>(n);
  for (const auto& b : doc.bracket_text) r.bracket.push_back({std::stoi(b[0]), std::stoi(b[1]), std::stoi(b[2]), b[3]});
  for (size_t i = 0; i < a.phi.rows(); ++i) {
    std::vector<std::string> row;
    for (size_t j = 0; j < a.phi.cols(); ++j) row.push_back(a.phi(i, j).str());
    r.phi.push_back(std::move(row));
  }
  for (const auto& c : a.spectral.minpoly.coeffs()) r.minpoly.push_back(c.str());
  r.minpoly_text = a.spectral.minpoly.str();
  for (const auto& e : a.spectral.spaces)
    r.spectrum.push_back({e.lambda.str(), e.mult, static_cast<int>(e.basis.size())});
  for (const auto& l : a.spectral.sigma_plus) r.sigma_plus.push_back(l.str());
  for (const auto& b : a.blocks.blocks) {
    BlockEntry be{b.label(), b.degree, {}, b.epsilon, {b.signature.first, b.signature.second}};
    for (const auto& l : b.eigenvalues) be.eigenvalues.push_back(l.str());
    r.blocks.push_back(std::move(be));
  }
  r.block_type = a.blocks.type_string();
  r.torsion_max = static_cast<int>(a.torsions.max_order);
  for (unsigned k = 1; k <= a.torsions.max_order; ++k)
    r.torsions.push_back({static_cast<int>(k), a.torsions.t_zero[k], a.torsions.s_zero[k],
                          tensor_entries(a.torsions.t_hat[k], n, 1), tensor_entries(a.torsions.s_hat[k], n, 1)});
  r.torsion_closed_forms_agree = a.torsions.tower_matches_closed;
  r.minimal_torsion = tensor_entries(a.minimal.multinomial, n);
  r.routes_agree = a.minimal.routes_agree();
  const Verdicts& v = a.verdicts;
  r.verdicts.minimal = v.minimal;
  r.verdicts.non_resonant = v.non_resonant;
  r.verdicts.weak_nijenhuis = v.weak_nijenhuis_semisimple;
  r.verdicts.generalized_nijenhuis = v.generalized_nijenhuis;
  if (v.courant_witness)
    for (size_t s : *v.courant_witness) r.verdicts.courant_witness.push_back(frame_name(n, s));
  if (v.resonance) r.verdicts.resonance_witness = {v.resonance->l.str(), v.resonance->m.str(), v.resonance->n.str()};
  if (v.weak_witness) {
    WeakWitness w{v.weak_witness->mu.str(), v.weak_witness->nu.str(), static_cast<int>(v.weak_witness->x_index),
                  static_cast<int>(v.weak_witness->y_index), {}};
    for (const auto& c : v.weak_witness->bracket) w.bracket.push_back(c.str());
    r.verdicts.weak_witness.push_back(std::move(w));
  }
  for (const auto& d : a.dlambda) r.dlambda.push_back({d.lambda.str(), d.mult, d.criterion});
  r.dlambda_sum_is_d = a.dlambda_sums_to_d;
  r.spectral_failures = a.spectral.failures;
  r.block_failures = a.blocks.failures;
  return r;
}

inline std::string print_report(const AnalysisReport& r) { return nlohmann::json(r).dump(2) + "\n"; }

inline AnalysisReport parse_report(const std::string& text) { return nlohmann::json::parse(text).get<AnalysisReport>(); }

}  // namespace gps
