#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "lipreach/nnkit/model.hpp"

namespace lipreach::nnkit {

inline constexpr int kWeightFormatVersion = 1;

/// Reads a weight file. Malformed content throws ParseError naming the field,
/// inconsistent dimensions throw ValidationError naming the layer.
Model load_model(const std::filesystem::path& path);
Model parse_model(std::string_view json_text);

/// Canonical serialization: fixed key order, shortest round-trip numbers.
std::string serialize_model(const Model& model, int indent = 1);
void save_model(const Model& model, const std::filesystem::path& path);

}  // namespace lipreach::nnkit
