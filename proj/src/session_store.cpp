#include "vst/session_store.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json_codec.hpp"
#include "vst/error.hpp"
#include "vst/hash.hpp"

namespace vst {

namespace {

using json_codec::json;

const std::set<std::string> kTopLevelKeys = {
    "baseMatch", "formatVersion", "graphConfig", "overrides", "script", "sourceHash",
    "sourcePath", "targetHash", "targetPath", "weights",
};

[[noreturn]] void schema_error(const std::string& message) {
  throw Error(ErrorCode::SchemaError, "session file: " + message);
}

const json& field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(std::string("missing field ") + key);
  return *it;
}

std::string string_field(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_string()) schema_error(std::string(key) + " must be a string");
  return v.get<std::string>();
}

std::uint64_t hash_field(const json& obj, const char* key) {
  std::uint64_t h = 0;
  if (!hex_to_hash(string_field(obj, key), h)) schema_error(std::string(key) + " must be 16 hex digits");
  return h;
}

const json& array_field(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_array()) schema_error(std::string(key) + " must be an array");
  return v;
}

json parse_json(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    schema_error(std::string("not valid JSON: ") + e.what());
  }
  if (!root.is_object()) schema_error("top level must be an object");
  return root;
}

json pair_json(const std::string& target, const std::string& source) {
  return json{{"source", source}, {"target", target}};
}

std::pair<std::string, std::string> read_pair(const json& entry, const char* what) {
  if (!entry.is_object() || entry.size() != 2) schema_error(std::string(what) + " entries need target and source");
  return {string_field(entry, "target"), string_field(entry, "source")};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string session_to_json(const TransferSession& session) {
  const Correspondence& c = session.correspondence;
  json root = json::object();
  root["formatVersion"] = kSessionFormatVersion;
  root["sourcePath"] = session.source_path;
  root["targetPath"] = session.target_path;
  root["sourceHash"] = hash_to_hex(c.source_hash);
  root["targetHash"] = hash_to_hex(c.target_hash);

  json base = json::array();
  for (const MatchEntry& m : c.base) base.push_back(pair_json(m.target, m.source));
  root["baseMatch"] = std::move(base);

  json overrides = json::array();
  for (const Override& o : c.overrides) overrides.push_back(pair_json(o.target, o.source));
  root["overrides"] = std::move(overrides);

  // Target paint order, then attribute declaration order.
  std::vector<std::pair<size_t, const std::pair<const ScriptKey, AttributeState>*>> entries;
  for (const auto& entry : session.script.entries()) {
    auto idx = session.target->index_of(entry.first.target);
    entries.emplace_back(idx.value_or(session.target->elements.size()), &entry);
  }
  std::stable_sort(entries.begin(), entries.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first < y.first;
    return x.second->first.attribute < y.second->first.attribute;
  });
  json script = json::array();
  for (const auto& [idx, entry] : entries) {
    script.push_back(json_codec::state_to_json(entry->first.target, entry->first.attribute, entry->second));
  }
  root["script"] = std::move(script);

  root["weights"] = json_codec::weights_to_json(session.weights);
  root["graphConfig"] = json_codec::graph_config_to_json(session.graph_config);
  return root.dump(2) + "\n";
}

void save_session(const TransferSession& session, const std::string& path) {
  const std::string text = session_to_json(session);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << text;
  out.close();
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path);
}

TransferSession restore_session(std::string_view json_text, std::shared_ptr<const DesignDocument> source,
                                std::shared_ptr<const DesignDocument> target) {
  const json root = parse_json(json_text);

  const json& version = field(root, "formatVersion");
  if (!version.is_number_integer()) schema_error("formatVersion must be an integer");
  if (version.get<long long>() != kSessionFormatVersion) {
    throw Error(ErrorCode::VersionUnsupported,
                "session format version " + version.dump() + " is not supported");
  }
  for (const auto& [key, value] : root.items()) {
    if (!kTopLevelKeys.count(key)) schema_error("unknown field " + key);
  }

  TransferSession session;
  session.source_path = string_field(root, "sourcePath");
  session.target_path = string_field(root, "targetPath");
  const std::uint64_t source_hash = hash_field(root, "sourceHash");
  const std::uint64_t target_hash = hash_field(root, "targetHash");
  if (source_hash != source->source_hash) {
    throw Error(ErrorCode::HashMismatch, "source document changed since the session was saved");
  }
  if (target_hash != target->source_hash) {
    throw Error(ErrorCode::HashMismatch, "target document changed since the session was saved");
  }

  try {
    session.weights = json_codec::weights_from_json(field(root, "weights"));
    session.graph_config = json_codec::graph_config_from_json(field(root, "graphConfig"));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SchemaError) throw;
    schema_error(e.what());
  }

  Correspondence& c = session.correspondence;
  c.source_hash = source_hash;
  c.target_hash = target_hash;
  for (const Element& e : source->elements) c.source_ids.push_back(e.id);

  const json& base = array_field(root, "baseMatch");
  if (base.size() != target->elements.size()) schema_error("baseMatch must cover every target element");
  for (size_t i = 0; i < base.size(); ++i) {
    auto [t, s] = read_pair(base[i], "baseMatch");
    if (t != target->elements[i].id) schema_error("baseMatch entry " + std::to_string(i) + " is not " +
                                                  target->elements[i].id);
    if (!source->find(s)) schema_error("baseMatch names unknown source element " + s);
    c.base.push_back({t, s, std::nullopt});
  }
  for (const json& entry : array_field(root, "overrides")) {
    auto [t, s] = read_pair(entry, "overrides");
    if (!target->find(t)) schema_error("overrides names unknown target element " + t);
    if (!source->find(s)) schema_error("overrides names unknown source element " + s);
    c.overrides.push_back({t, s});
  }

  session.source = std::move(source);
  session.target = std::move(target);

  std::set<std::pair<std::string, std::string>> seen;
  for (const json& entry : array_field(root, "script")) {
    if (!entry.is_object()) schema_error("script entries must be objects");
    for (const auto& [key, value] : entry.items()) {
      if (key != "target" && key != "attribute" && key != "state" && key != "value") {
        schema_error("unknown script field " + key);
      }
    }
    const std::string t = string_field(entry, "target");
    const std::string attr_text = string_field(entry, "attribute");
    const std::string state_text = string_field(entry, "state");
    auto attr = parse_attribute_name(attr_text);
    if (!attr) schema_error("unknown attribute " + attr_text);
    auto kind = parse_state_kind(state_text);
    if (!kind) schema_error("unknown state " + state_text);
    if (!seen.insert({t, attr_text}).second) schema_error("duplicate script entry " + t + "." + attr_text);
    const bool has_value = entry.contains("value");
    if ((*kind == StateKind::Custom) != has_value) {
      schema_error("script entry " + t + "." + attr_text + ": value is required for custom and only for custom");
    }
    const Element* e = session.target->find(t);
    if (!e) schema_error("script names unknown target element " + t);
    AttributeState state{*kind, std::nullopt};
    try {
      if (has_value) state.value = json_codec::value_from_json(*attr, entry["value"]);
      session.script.set(t, *attr, check_state(*e, *attr, state));
    } catch (const Error& e) {
      schema_error("script entry " + t + "." + attr_text + ": " + e.what());
    }
  }
  return session;
}

TransferSession load_session(const std::string& path, std::string_view source_bytes,
                             std::string_view target_bytes) {
  const std::string text = read_file(path);
  auto source = std::make_shared<const DesignDocument>(parse_svg(source_bytes));
  auto target = std::make_shared<const DesignDocument>(parse_svg(target_bytes));
  return restore_session(text, std::move(source), std::move(target));
}

SessionInputs read_session_inputs(std::string_view json_text) {
  const json root = parse_json(json_text);
  return {string_field(root, "sourcePath"), string_field(root, "targetPath")};
}

}  // namespace vst
