#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "vst/correspondence.hpp"
#include "vst/document.hpp"
#include "vst/graph.hpp"
#include "vst/style.hpp"

namespace vst {

enum class StateKind { Copied, Original, Custom };

std::string_view state_kind_name(StateKind kind);  // "copied", "original", "custom"
std::optional<StateKind> parse_state_kind(std::string_view text);

struct AttributeState {
  StateKind kind = StateKind::Original;
  std::optional<AttributeValue> value;  // Custom only

  static AttributeState copied() { return {StateKind::Copied, std::nullopt}; }
  static AttributeState original() { return {StateKind::Original, std::nullopt}; }
  static AttributeState custom(AttributeValue v) { return {StateKind::Custom, std::move(v)}; }

  friend bool operator==(const AttributeState&, const AttributeState&) = default;
};

struct ScriptKey {
  std::string target;
  AttributeName attribute = AttributeName::Fill;

  friend auto operator<=>(const ScriptKey&, const ScriptKey&) = default;
};

// Per (target element, attribute) transfer state. Absent keys are Original,
// and setting Original removes the key.
class EditScript {
 public:
  AttributeState get(std::string_view target, AttributeName attribute) const;
  void set(const std::string& target, AttributeName attribute, AttributeState state);
  void clear() { states_.clear(); }
  bool empty() const { return states_.empty(); }
  size_t size() const { return states_.size(); }
  const std::map<ScriptKey, AttributeState>& entries() const { return states_; }

  friend bool operator==(const EditScript&, const EditScript&) = default;

 private:
  std::map<ScriptKey, AttributeState> states_;
};

struct TransferSession {
  std::shared_ptr<const DesignDocument> source;
  std::shared_ptr<const DesignDocument> target;
  Correspondence correspondence;
  EditScript script;
  SimilarityWeights weights;
  GraphConfig graph_config;
  // Where the documents were read from; recorded in session files.
  std::string source_path;
  std::string target_path;
};

// Matches target against source and returns a session with an empty script.
TransferSession make_session(std::shared_ptr<const DesignDocument> source,
                             std::shared_ptr<const DesignDocument> target,
                             const SimilarityWeights& weights = {}, const GraphConfig& cfg = {},
                             const ProgressFn& progress = {});

// Every applicable attribute the matched source element has becomes Copied,
// except text content. Replaces the whole script.
TransferSession copy_all(const TransferSession& session);
TransferSession copy_none(const TransferSession& session);

// Validates `state` for one target element and returns it in canonical form
// (Custom values quantized, other states without a value).
// Throws Error(InapplicableAttribute | InvalidValue).
AttributeState check_state(const Element& target, AttributeName attribute, const AttributeState& state);

// Throws Error(UnknownElementId | InapplicableAttribute | InvalidValue).
TransferSession set_state(const TransferSession& session, const std::vector<std::string>& targets,
                          AttributeName attribute, const AttributeState& state);

// Redirects targets to `source` and marks their applicable attributes that
// the source element has (text content excepted) as Copied.
// Throws Error(UnknownElementId).
TransferSession transfer_source_style(const TransferSession& session,
                                      const std::vector<std::string>& targets,
                                      const std::string& source);

struct TransferWarning {
  std::string target;
  AttributeName attribute;
  std::string source;
};

// Output document: the target with the script resolved. Only styles change;
// ids, kinds, geometry, bboxes and order are those of the target.
DesignDocument apply_transfer(const TransferSession& session, std::vector<TransferWarning>* warnings = nullptr);

enum class GroupFilter { All, ModifiedOnly };

struct StateSummary {
  size_t copied = 0;
  size_t original = 0;
  size_t custom = 0;

  friend bool operator==(const StateSummary&, const StateSummary&) = default;
};

struct AttributeGroup {
  AttributeName attribute;
  AttributeValue value;
  std::vector<std::string> element_ids;  // target paint order
  StateSummary states;
};

// Groups output attribute values by (attribute, value), sorted by attribute
// name then value. `scope` limits the elements considered; ModifiedOnly keeps
// elements whose output value differs from the target's own.
std::vector<AttributeGroup> group_attribute_values(const TransferSession& session,
                                                   const DesignDocument& output,
                                                   const std::optional<std::set<std::string>>& scope,
                                                   GroupFilter filter);
std::vector<AttributeGroup> group_attribute_values(const TransferSession& session,
                                                   const std::optional<std::set<std::string>>& scope,
                                                   GroupFilter filter);

}  // namespace vst
