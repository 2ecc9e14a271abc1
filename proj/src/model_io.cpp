#include "sbf/model_io.hpp"

#include <cmath>
#include <fstream>

namespace sbf {

namespace {

using nlohmann::json;

double number_field(const json& v, const std::string& where) {
  if (!v.is_number()) throw ModelSchemaError("model file: " + where + " must be a number");
  double x = v.get<double>();
  if (!std::isfinite(x)) throw ModelSchemaError("model file: " + where + " must be finite");
  return x;
}

std::vector<double> vector_field(const json& v, int n, const std::string& name) {
  if (!v.is_array() || static_cast<int>(v.size()) != n)
    throw ModelSchemaError("model file: " + name + " must be an array of length n");
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = number_field(v[i], name + "[" + std::to_string(i) + "]");
  return out;
}

Mat matrix_field(const json& v, int n, const std::string& name) {
  if (!v.is_array() || static_cast<int>(v.size()) != n)
    throw ModelSchemaError("model file: " + name + " must be an n x n array");
  Mat out(n);
  for (int i = 0; i < n; ++i) {
    const json& row = v[i];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw ModelSchemaError("model file: " + name + "[" + std::to_string(i) + "] must have length n");
    for (int j = 0; j < n; ++j)
      out(i, j) = number_field(row[j], name + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
  }
  return out;
}

}  // namespace

FiniteModel model_from_json(const json& j) {
  if (!j.is_object()) throw ModelSchemaError("model file: top level must be an object");
  if (!j.contains("n") || !j["n"].is_number_integer())
    throw ModelSchemaError("model file: field n must be an integer");
  int n = j["n"].get<int>();
  if (n < 1) throw ModelSchemaError("model file: field n must be >= 1");

  if (!j.contains("m")) throw ModelSchemaError("model file: field m is required");
  std::vector<double> m = vector_field(j["m"], n, "m");
  for (int i = 0; i < n; ++i)
    if (!(m[i] > 0.0)) throw ModelSchemaError("model file: m[" + std::to_string(i) + "] must be positive");

  bool has_L = j.contains("L");
  bool has_J = j.contains("J") || j.contains("kappa");
  if (has_L && has_J)
    throw ModelSchemaError("model file: give either L or (J, kappa), not both");
  if (!has_L && !(j.contains("J") && j.contains("kappa")))
    throw ModelSchemaError("model file: give either L or both J and kappa");

  FiniteModel model;
  if (has_L) {
    model.n = n;
    model.m = m;
    model.L = matrix_field(j["L"], n, "L");
  } else {
    BeurlingDenyData bd;
    bd.n = n;
    bd.J = matrix_field(j["J"], n, "J");
    bd.kappa = vector_field(j["kappa"], n, "kappa");
    model = assemble(bd, m);
  }

  if (j.contains("labels")) {
    const json& labels = j["labels"];
    if (!labels.is_array() || static_cast<int>(labels.size()) != n)
      throw ModelSchemaError("model file: labels must be an array of n strings");
    for (int i = 0; i < n; ++i) {
      if (!labels[i].is_string())
        throw ModelSchemaError("model file: labels[" + std::to_string(i) + "] must be a string");
      model.labels.push_back(labels[i].get<std::string>());
    }
  }

  ValidationReport rep = validate_model(model);
  if (!rep.ok()) throw ModelInvariantError("model file violates model invariants\n" + rep.summary());
  return model;
}

json model_to_json(const FiniteModel& model) {
  json j;
  j["n"] = model.n;
  j["m"] = model.m;
  json L = json::array();
  for (int i = 0; i < model.n; ++i) {
    json row = json::array();
    for (int k = 0; k < model.n; ++k) row.push_back(model.L(i, k));
    L.push_back(row);
  }
  j["L"] = L;
  if (!model.labels.empty()) j["labels"] = model.labels;
  return j;
}

FiniteModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelParseError("cannot open model file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ModelParseError("malformed model file " + path + ": " + e.what());
  }
  return model_from_json(j);
}

void save_model(const FiniteModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out << model_to_json(model).dump(2) << "\n";
}

}  // namespace sbf
