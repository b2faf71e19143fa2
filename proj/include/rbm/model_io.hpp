#pragma once

#include <string>

#include "rbm/model.hpp"

namespace rbm {

struct ModelFile {
    bool is_cone = false;
    QuadrantParams quadrant;  // converted from the cone form when is_cone
    ConeParams cone;          // derived from the quadrant form otherwise
};

// JSON schema: quadrant models carry sigma [s11, s12, s22], mu [2],
// refl [r11, r12, r21, r22], z0 [2]; cone models carry beta, delta,
// epsilon, theta, mu_norm, z0 [2].
ModelFile load_model(const std::string& path);
ModelFile parse_model(const std::string& json_text);

std::string quadrant_to_json(const QuadrantParams& p);
std::string cone_to_json(const ConeParams& c);

// FNV-1a hash of the canonical serialization, hex-encoded.
std::string model_hash(const QuadrantParams& p);

}  // namespace rbm
