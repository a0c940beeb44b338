#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "vst/document.hpp"
#include "vst/graph.hpp"

namespace vst {

struct SimilarityWeights {
  double color = 1.0;
  double shape = 1.0;
  double size = 1.0;
  double text = 1.0;
  double structure = 1.0;

  // Throws Error(InvalidValue) for negative weights or a zero sum.
  void validate() const;

  friend bool operator==(const SimilarityWeights&, const SimilarityWeights&) = default;
};

struct FeatureKey {
  std::uint8_t iteration = 0;
  EdgeKind kind = EdgeKind::SameFill;
  std::uint64_t label = 0;

  friend auto operator<=>(const FeatureKey&, const FeatureKey&) = default;
};

// Sparse histogram over (iteration, edge kind, neighbor label).
using StructuralFeatures = std::map<FeatureKey, std::uint32_t>;

inline constexpr int kRelabelIterations = 2;

// Iteration-0 label inputs.
int size_bucket(double area, double view_box_area);
std::uint64_t initial_label(const Element& element, double view_box_area);

// Weisfeiler-Lehman style relabeling; one histogram per element in paint
// order.
std::vector<StructuralFeatures> structural_features(const DesignDocument& doc,
                                                    const DesignGraph& graph);

struct DimensionScores {
  double color = 0.0;
  double shape = 0.0;
  double size = 0.0;
  std::optional<double> text;  // only when both elements are text
  double structure = 0.0;
  double combined = 0.0;

  friend bool operator==(const DimensionScores&, const DimensionScores&) = default;
};

double paint_similarity(const Paint& a, const Paint& b);
double cosine_similarity(const StructuralFeatures& a, const StructuralFeatures& b);

DimensionScores element_similarity(const Element& a, const StructuralFeatures& fa, const Element& b,
                                   const StructuralFeatures& fb, const SimilarityWeights& w);

// A document with its graph and per-element features, computed once.
struct AnalyzedDocument {
  const DesignDocument* doc = nullptr;
  DesignGraph graph;
  std::vector<StructuralFeatures> features;
};

AnalyzedDocument analyze(const DesignDocument& doc, const GraphConfig& cfg = {});

struct MatchEntry {
  std::string target;
  std::string source;
  std::optional<DimensionScores> scores;  // absent after loading a session
};

struct Override {
  std::string target;
  std::string source;

  friend bool operator==(const Override&, const Override&) = default;
};

struct Correspondence {
  std::uint64_t source_hash = 0;
  std::uint64_t target_hash = 0;
  std::vector<std::string> source_ids;  // source paint order
  std::vector<MatchEntry> base;         // target paint order
  std::vector<Override> overrides;      // append-only, last writer wins

  // Throws Error(UnknownElementId).
  const std::string& effective(std::string_view target) const;
  // (target, source) in target paint order.
  std::vector<Override> effective_match() const;
  const MatchEntry* base_entry(std::string_view target) const;
};

using ProgressFn = std::function<void(double)>;

// Throws Error(EmptySource | EmptyTarget).
Correspondence compute_correspondence(const AnalyzedDocument& src, const AnalyzedDocument& tgt,
                                      const SimilarityWeights& w, const ProgressFn& progress = {});

// Throws Error(UnknownElementId).
Correspondence retarget(const Correspondence& c, const std::vector<std::string>& targets,
                        const std::string& source);
Correspondence clear_overrides(const Correspondence& c);

// Throws Error(UnknownElementId).
std::set<std::string> matched_targets(const Correspondence& c, std::string_view source);

// Within-document score of every element against a selection: the best
// combined similarity to any selected element.
std::vector<double> selection_scores(const AnalyzedDocument& doc, const std::set<std::string>& current,
                                     const SimilarityWeights& w);

// Throws Error(EmptySelection | UnknownElementId).
std::set<std::string> expand_selection(const AnalyzedDocument& doc, const std::set<std::string>& current,
                                       const SimilarityWeights& w);
std::set<std::string> threshold_selection(const AnalyzedDocument& doc, const std::set<std::string>& seed,
                                          double tau, const SimilarityWeights& w);

inline constexpr double kThresholdStep = 0.05;
// Moves tau by `steps` increments of kThresholdStep, clamped to [0, 1].
double step_threshold(double tau, int steps);

// "targetId,sourceId,color,shape,size,text,structure,combined" rows for the
// full score matrix; text is empty when not applicable.
std::string score_matrix_csv(const AnalyzedDocument& src, const AnalyzedDocument& tgt,
                             const SimilarityWeights& w);

}  // namespace vst
