#include "isokernel/model_io.hpp"

#include <fstream>
#include <stdexcept>

namespace isokernel {

namespace {
constexpr const char* kFormat = "isokernel-model";
constexpr int kVersion = 1;
}  // namespace

nlohmann::json model_to_json(const IsolationModel& model) {
  nlohmann::json parts = nlohmann::json::array();
  for (const Partitioning& part : model.parts) {
    nlohmann::json centers = nlohmann::json::array();
    for (Index r = 0; r < part.centers.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (Index c = 0; c < part.centers.cols(); ++c) row.push_back(part.centers(r, c));
      centers.push_back(std::move(row));
    }
    nlohmann::json radii = nlohmann::json::array();
    for (Index r = 0; r < part.radii.size(); ++r) radii.push_back(part.radii[r]);
    parts.push_back({{"centers", std::move(centers)}, {"radii", std::move(radii)}});
  }
  return {{"format", kFormat}, {"version", kVersion},     {"dim", model.dim},
          {"psi", model.psi},  {"t", model.t},            {"seed", model.seed},
          {"partitionings", std::move(parts)}};
}

IsolationModel model_from_json(const nlohmann::json& j) {
  if (j.value("format", "") != kFormat) {
    throw std::runtime_error("model_from_json: unrecognized format field");
  }
  if (j.value("version", -1) != kVersion) {
    throw std::runtime_error("model_from_json: unsupported version");
  }
  IsolationModel model;
  model.dim = j.at("dim").get<Index>();
  model.psi = j.at("psi").get<Index>();
  model.t = j.at("t").get<Index>();
  model.seed = j.at("seed").get<std::uint64_t>();
  const auto& parts = j.at("partitionings");
  if (static_cast<Index>(parts.size()) != model.t) {
    throw std::runtime_error("model_from_json: partitioning count differs from t");
  }
  model.parts.reserve(parts.size());
  for (const auto& pj : parts) {
    const auto& centers = pj.at("centers");
    const auto& radii = pj.at("radii");
    if (static_cast<Index>(centers.size()) != model.psi ||
        static_cast<Index>(radii.size()) != model.psi) {
      throw std::runtime_error("model_from_json: partitioning size differs from psi");
    }
    Partitioning part;
    part.centers.resize(model.psi, model.dim);
    part.radii.resize(model.psi);
    for (Index r = 0; r < model.psi; ++r) {
      const auto& row = centers.at(static_cast<std::size_t>(r));
      if (static_cast<Index>(row.size()) != model.dim) {
        throw std::runtime_error("model_from_json: centre dimension differs from dim");
      }
      for (Index c = 0; c < model.dim; ++c) {
        part.centers(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
      }
      part.radii[r] = radii.at(static_cast<std::size_t>(r)).get<double>();
    }
    model.parts.push_back(std::move(part));
  }
  return model;
}

void save_model(const std::string& path, const IsolationModel& model) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_model: cannot open '" + path + "' for writing");
  out << model_to_json(model).dump();
  out << '\n';
  if (!out) throw std::runtime_error("save_model: write to '" + path + "' failed");
}

IsolationModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_model: cannot open '" + path + "'");
  nlohmann::json j;
  in >> j;
  return model_from_json(j);
}

}  // namespace isokernel
