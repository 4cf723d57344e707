#pragma once

#include <nlohmann/json.hpp>

#include <string>

#include "isokernel/isolation.hpp"

namespace isokernel {

// Versioned JSON record of a fitted model: (dim, psi, t, seed) plus every
// centre and radius. Round trips are bit-exact.
nlohmann::json model_to_json(const IsolationModel& model);
IsolationModel model_from_json(const nlohmann::json& j);

void save_model(const std::string& path, const IsolationModel& model);
IsolationModel load_model(const std::string& path);

}  // namespace isokernel
