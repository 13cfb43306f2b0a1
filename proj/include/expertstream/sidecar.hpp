#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "expertstream/adversary.hpp"

namespace expertstream {

// One-line JSON companion to the matrix file; carries the instance metadata
// the matrix format cannot.
inline void write_instance_sidecar(std::ostream& out, const BiasDetectInstance& inst) {
  nlohmann::json j;
  j["label"] = std::string(label_name(inst.label));
  if (inst.planted_column)
    j["L"] = *inst.planted_column;
  else
    j["L"] = nullptr;
  j["epsilonBias"] = inst.epsilon_bias;
  j["seed"] = inst.seed.value;
  out << j.dump() << '\n';
}

inline void apply_instance_sidecar(std::istream& in, BiasDetectInstance& inst) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("sidecar: malformed JSON: ") + e.what());
  }
  const std::string label = j.at("label").get<std::string>();
  if (label == "YES")
    inst.label = InstanceLabel::Yes;
  else if (label == "NO")
    inst.label = InstanceLabel::No;
  else
    throw std::invalid_argument("sidecar: label must be YES or NO");
  if (j.at("L").is_null())
    inst.planted_column.reset();
  else
    inst.planted_column = j.at("L").get<std::uint32_t>();
  inst.epsilon_bias = j.at("epsilonBias").get<double>();
  inst.seed = Seed{j.at("seed").get<std::uint64_t>()};
  inst.validate();
}

}  // namespace expertstream
