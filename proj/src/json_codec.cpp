#include "json_codec.hpp"

#include "vst/error.hpp"

namespace vst::json_codec {

namespace {

double number_field(const json& j, const char* key, double fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number()) throw Error(ErrorCode::InvalidValue, std::string(key) + " must be a number");
  return it->get<double>();
}

}  // namespace

bool is_numeric(AttributeName name) {
  switch (name) {
    case AttributeName::StrokeWidth:
    case AttributeName::LineHeight:
    case AttributeName::FontSize:
    case AttributeName::Opacity:
    case AttributeName::Padding: return true;
    default: return false;
  }
}

json value_to_json(AttributeName name, const AttributeValue& value) {
  if (is_numeric(name)) return std::get<double>(value);
  return format_attribute_value(value);
}

AttributeValue value_from_json(AttributeName name, const json& j) {
  if (is_numeric(name)) {
    if (!j.is_number()) {
      throw Error(ErrorCode::InvalidValue, std::string(attribute_name(name)) + " value must be a number");
    }
    return j.get<double>();
  }
  if (!j.is_string()) {
    throw Error(ErrorCode::InvalidValue, std::string(attribute_name(name)) + " value must be a string");
  }
  return parse_attribute_value(name, j.get<std::string>());
}

json weights_to_json(const SimilarityWeights& w) {
  return json{{"color", w.color}, {"shape", w.shape}, {"size", w.size}, {"structure", w.structure},
              {"text", w.text}};
}

SimilarityWeights weights_from_json(const json& j, SimilarityWeights w) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidValue, "weights must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "color" && key != "shape" && key != "size" && key != "text" && key != "structure") {
      throw Error(ErrorCode::InvalidValue, "unknown weight: " + key);
    }
  }
  w.color = number_field(j, "color", w.color);
  w.shape = number_field(j, "shape", w.shape);
  w.size = number_field(j, "size", w.size);
  w.text = number_field(j, "text", w.text);
  w.structure = number_field(j, "structure", w.structure);
  w.validate();
  return w;
}

json graph_config_to_json(const GraphConfig& cfg) {
  json kinds = json::array();
  for (size_t k = 0; k < kEdgeKindCount; ++k) {
    if (cfg.enabled_kinds.test(k)) kinds.push_back(edge_kind_name(static_cast<EdgeKind>(k)));
  }
  return json{{"alignEpsilon", cfg.align_epsilon},
              {"containMargin", cfg.contain_margin},
              {"enabledKinds", kinds}};
}

GraphConfig graph_config_from_json(const json& j, GraphConfig cfg) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidValue, "graphConfig must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "alignEpsilon" && key != "containMargin" && key != "enabledKinds") {
      throw Error(ErrorCode::InvalidValue, "unknown graphConfig field: " + key);
    }
  }
  cfg.align_epsilon = number_field(j, "alignEpsilon", cfg.align_epsilon);
  cfg.contain_margin = number_field(j, "containMargin", cfg.contain_margin);
  if (auto it = j.find("enabledKinds"); it != j.end()) {
    if (!it->is_array()) throw Error(ErrorCode::InvalidValue, "enabledKinds must be an array");
    cfg.enabled_kinds.reset();
    for (const json& k : *it) {
      auto kind = k.is_string() ? parse_edge_kind(k.get<std::string>()) : std::nullopt;
      if (!kind) throw Error(ErrorCode::InvalidValue, "unknown edge kind: " + k.dump());
      cfg.enabled_kinds.set(static_cast<size_t>(*kind));
    }
  }
  cfg.validate();
  return cfg;
}

json style_to_json(const StyleAttributes& style) {
  json out = json::object();
  for (AttributeName a : kAllAttributes) {
    if (auto v = get_attribute(style, a)) out[std::string(attribute_name(a))] = value_to_json(a, *v);
  }
  return out;
}

json state_to_json(const std::string& target, AttributeName attribute, const AttributeState& state) {
  json out{{"target", target},
           {"attribute", std::string(attribute_name(attribute))},
           {"state", std::string(state_kind_name(state.kind))}};
  if (state.kind == StateKind::Custom) out["value"] = value_to_json(attribute, *state.value);
  return out;
}

}  // namespace vst::json_codec
