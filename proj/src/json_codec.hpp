#pragma once

// JSON forms shared by session files and the HTTP API.

#include <json.hpp>

#include "vst/correspondence.hpp"
#include "vst/graph.hpp"
#include "vst/style.hpp"
#include "vst/transfer.hpp"

namespace vst::json_codec {

using nlohmann::json;

bool is_numeric(AttributeName name);

// Numbers for numeric attributes, canonical strings otherwise.
json value_to_json(AttributeName name, const AttributeValue& value);
// Throws Error(InvalidValue).
AttributeValue value_from_json(AttributeName name, const json& j);

json weights_to_json(const SimilarityWeights& w);
// Missing keys keep their defaults. Throws Error(InvalidValue).
SimilarityWeights weights_from_json(const json& j, SimilarityWeights base = {});

json graph_config_to_json(const GraphConfig& cfg);
// Missing keys keep their defaults. Throws Error(InvalidValue).
GraphConfig graph_config_from_json(const json& j, GraphConfig base = {});

json style_to_json(const StyleAttributes& style);
json state_to_json(const std::string& target, AttributeName attribute, const AttributeState& state);

}  // namespace vst::json_codec
