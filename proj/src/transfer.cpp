#include "vst/transfer.hpp"

#include <algorithm>
#include <tuple>

#include "vst/error.hpp"

namespace vst {

namespace {

const Element& require_target(const TransferSession& session, const std::string& id) {
  const Element* e = session.target->find(id);
  if (!e) throw Error(ErrorCode::UnknownElementId, "unknown target element id: " + id);
  return *e;
}

// Drops unmodeled paint left over from parsing (e.g. a gradient reference)
// once the modeled paint is set explicitly.
void drop_passthrough_paint(Element& e, AttributeName attribute) {
  const char* key = nullptr;
  const char* opacity_key = nullptr;
  if (attribute == AttributeName::Fill) {
    key = "fill";
    opacity_key = "fill-opacity";
  } else if (attribute == AttributeName::Stroke) {
    key = "stroke";
    opacity_key = "stroke-opacity";
  } else {
    return;
  }
  std::erase_if(e.passthrough, [&](const auto& kv) { return kv.first == key || kv.first == opacity_key; });
}

void mark_copied(const TransferSession& session, EditScript& script, const Element& target,
                 const std::string& source_id) {
  const Element* source = session.source->find(source_id);
  for (AttributeName a : kAllAttributes) {
    if (a == AttributeName::Text) continue;
    if (!is_applicable(target.style, a)) continue;
    if (!source || !get_attribute(source->style, a)) continue;
    script.set(target.id, a, AttributeState::copied());
  }
}

}  // namespace

std::string_view state_kind_name(StateKind kind) {
  switch (kind) {
    case StateKind::Copied: return "copied";
    case StateKind::Original: return "original";
    case StateKind::Custom: return "custom";
  }
  return "original";
}

std::optional<StateKind> parse_state_kind(std::string_view text) {
  if (text == "copied") return StateKind::Copied;
  if (text == "original") return StateKind::Original;
  if (text == "custom") return StateKind::Custom;
  return std::nullopt;
}

AttributeState EditScript::get(std::string_view target, AttributeName attribute) const {
  auto it = states_.find(ScriptKey{std::string(target), attribute});
  return it == states_.end() ? AttributeState::original() : it->second;
}

void EditScript::set(const std::string& target, AttributeName attribute, AttributeState state) {
  ScriptKey key{target, attribute};
  if (state.kind == StateKind::Original) {
    states_.erase(key);
  } else {
    states_[key] = std::move(state);
  }
}

TransferSession make_session(std::shared_ptr<const DesignDocument> source,
                             std::shared_ptr<const DesignDocument> target,
                             const SimilarityWeights& weights, const GraphConfig& cfg,
                             const ProgressFn& progress) {
  TransferSession session;
  AnalyzedDocument src = analyze(*source, cfg);
  AnalyzedDocument tgt = analyze(*target, cfg);
  session.correspondence = compute_correspondence(src, tgt, weights, progress);
  session.source = std::move(source);
  session.target = std::move(target);
  session.weights = weights;
  session.graph_config = cfg;
  return session;
}

TransferSession copy_all(const TransferSession& session) {
  TransferSession out = session;
  out.script.clear();
  for (const Element& t : session.target->elements) {
    mark_copied(session, out.script, t, session.correspondence.effective(t.id));
  }
  return out;
}

TransferSession copy_none(const TransferSession& session) {
  TransferSession out = session;
  out.script.clear();
  return out;
}

AttributeState check_state(const Element& target, AttributeName attribute, const AttributeState& state) {
  if (!is_applicable(target.style, attribute)) {
    throw Error(ErrorCode::InapplicableAttribute,
                std::string(attribute_name(attribute)) + " does not apply to element " + target.id);
  }
  if (state.kind != StateKind::Custom) return {state.kind, std::nullopt};
  if (!state.value) throw Error(ErrorCode::InvalidValue, "custom state needs a value");
  // Type and range check through a scratch style; reading back gives the
  // canonical (quantized) value.
  StyleAttributes probe = target.style;
  set_attribute(probe, attribute, *state.value);
  return AttributeState::custom(*get_attribute(probe, attribute));
}

TransferSession set_state(const TransferSession& session, const std::vector<std::string>& targets,
                          AttributeName attribute, const AttributeState& state) {
  TransferSession out = session;
  for (const std::string& id : targets) {
    out.script.set(id, attribute, check_state(require_target(session, id), attribute, state));
  }
  return out;
}

TransferSession transfer_source_style(const TransferSession& session,
                                      const std::vector<std::string>& targets,
                                      const std::string& source) {
  TransferSession out = session;
  out.correspondence = retarget(session.correspondence, targets, source);
  for (const std::string& id : targets) {
    mark_copied(session, out.script, require_target(session, id), source);
  }
  return out;
}

DesignDocument apply_transfer(const TransferSession& session, std::vector<TransferWarning>* warnings) {
  DesignDocument out = *session.target;
  for (Element& e : out.elements) {
    for (AttributeName a : kAllAttributes) {
      const AttributeState state = session.script.get(e.id, a);
      if (state.kind == StateKind::Original || !is_applicable(e.style, a)) continue;
      if (state.kind == StateKind::Custom) {
        set_attribute(e.style, a, *state.value);
        drop_passthrough_paint(e, a);
        continue;
      }
      const std::string& source_id = session.correspondence.effective(e.id);
      const Element* source = session.source->find(source_id);
      std::optional<AttributeValue> value = source ? get_attribute(source->style, a) : std::nullopt;
      if (!value) {
        if (warnings) warnings->push_back({e.id, a, source_id});
        continue;
      }
      set_attribute(e.style, a, *value);
      drop_passthrough_paint(e, a);
    }
  }
  return out;
}

std::vector<AttributeGroup> group_attribute_values(const TransferSession& session,
                                                   const DesignDocument& output,
                                                   const std::optional<std::set<std::string>>& scope,
                                                   GroupFilter filter) {
  if (scope) {
    for (const std::string& id : *scope) require_target(session, id);
  }
  std::vector<AttributeGroup> groups;
  const auto& originals = session.target->elements;
  for (size_t i = 0; i < output.elements.size(); ++i) {
    const Element& e = output.elements[i];
    if (scope && !scope->count(e.id)) continue;
    for (AttributeName a : kAllAttributes) {
      std::optional<AttributeValue> value = get_attribute(e.style, a);
      if (!value) continue;
      if (filter == GroupFilter::ModifiedOnly && get_attribute(originals[i].style, a) == value) continue;
      auto it = std::find_if(groups.begin(), groups.end(), [&](const AttributeGroup& g) {
        return g.attribute == a && g.value == *value;
      });
      if (it == groups.end()) {
        groups.push_back({a, *value, {}, {}});
        it = groups.end() - 1;
      }
      it->element_ids.push_back(e.id);
      switch (session.script.get(e.id, a).kind) {
        case StateKind::Copied: ++it->states.copied; break;
        case StateKind::Original: ++it->states.original; break;
        case StateKind::Custom: ++it->states.custom; break;
      }
    }
  }
  std::stable_sort(groups.begin(), groups.end(), [](const AttributeGroup& x, const AttributeGroup& y) {
    return std::forward_as_tuple(attribute_name(x.attribute), x.value) <
           std::forward_as_tuple(attribute_name(y.attribute), y.value);
  });
  return groups;
}

std::vector<AttributeGroup> group_attribute_values(const TransferSession& session,
                                                   const std::optional<std::set<std::string>>& scope,
                                                   GroupFilter filter) {
  return group_attribute_values(session, apply_transfer(session), scope, filter);
}

}  // namespace vst
