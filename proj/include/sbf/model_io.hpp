#pragma once

#include <stdexcept>
#include <string>

#include "sbf/model.hpp"

#include <json.hpp>

namespace sbf {

struct ModelParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ModelSchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Model file schema: {"n": int, "m": [..], "L": [[..]]} or
/// {"n": int, "m": [..], "J": [[..]], "kappa": [..]}, optional "labels".
/// Exactly one of L or (J, kappa) may be present.
FiniteModel model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const FiniteModel& model);

/// Throws ModelParseError / ModelSchemaError / ModelInvariantError.
FiniteModel load_model(const std::string& path);
void save_model(const FiniteModel& model, const std::string& path);

}  // namespace sbf
