#include "vst/correspondence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "vst/error.hpp"
#include "vst/hash.hpp"
#include "vst/numeric.hpp"

namespace vst {

namespace {

constexpr double kTieTolerance = 1e-9;
constexpr int kMaxSizeBucket = 16;

double ratio(double a, double b) {
  const double hi = std::max(a, b);
  if (hi <= 0.0) return 1.0;
  return std::min(a, b) / hi;
}

double aspect_ratio(const BBox& box) {
  if (box.width == 0.0 && box.height == 0.0) return 1.0;
  if (box.height == 0.0) return std::numeric_limits<double>::infinity();
  return box.width / box.height;
}

double aspect_similarity(const BBox& a, const BBox& b) {
  const double ra = aspect_ratio(a);
  const double rb = aspect_ratio(b);
  if (std::isinf(ra) || std::isinf(rb)) return std::isinf(ra) && std::isinf(rb) ? 1.0 : 0.0;
  return ratio(ra, rb);
}

double text_similarity(const TextStyle& a, const TextStyle& b) {
  const bool family = a.font_family == b.font_family;
  const bool weight = a.font_weight.value_or(FontWeight{}) == b.font_weight.value_or(FontWeight{});
  const bool style =
      a.font_style.value_or(FontStyle::Normal) == b.font_style.value_or(FontStyle::Normal);
  return 0.5 * (family ? 1.0 : 0.0) + 0.25 * ratio(a.font_size, b.font_size) +
         0.25 * (weight && style ? 1.0 : 0.0);
}

void check_id(const DesignDocument& doc, const std::string& id) {
  if (!doc.find(id)) throw Error(ErrorCode::UnknownElementId, "unknown element id: " + id);
}

size_t argmax_with_tiebreak(const std::vector<double>& scores) {
  double best = -std::numeric_limits<double>::infinity();
  for (double s : scores) best = std::max(best, s);
  for (size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] >= best - kTieTolerance) return i;
  }
  return 0;
}

}  // namespace

void SimilarityWeights::validate() const {
  const double all[] = {color, shape, size, text, structure};
  double sum = 0.0;
  for (double v : all) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidValue, "similarity weights must be finite and >= 0");
    }
    sum += v;
  }
  if (sum <= 0.0) throw Error(ErrorCode::InvalidValue, "similarity weights must not all be zero");
}

int size_bucket(double area, double view_box_area) {
  if (!(area > 0.0)) return 0;
  const double vb = view_box_area > 0.0 ? view_box_area : 1.0;
  const double bucket = std::floor(std::log2(area / vb * 65536.0));
  return static_cast<int>(std::clamp(bucket, 0.0, static_cast<double>(kMaxSizeBucket)));
}

std::uint64_t initial_label(const Element& element, double view_box_area) {
  HashEncoder enc;
  enc.u8(static_cast<std::uint8_t>(element.kind));
  enc.u8(static_cast<std::uint8_t>(size_bucket(element.bbox.area(), view_box_area)));
  if (element.style.fill) {
    enc.u8(1).u8(element.style.fill->r >> 6).u8(element.style.fill->g >> 6).u8(element.style.fill->b >> 6);
  } else {
    enc.u8(0);
  }
  return enc.digest();
}

std::vector<StructuralFeatures> structural_features(const DesignDocument& doc,
                                                    const DesignGraph& graph) {
  const size_t n = doc.elements.size();
  std::vector<StructuralFeatures> features(n);
  std::vector<std::uint64_t> labels(n);
  for (size_t v = 0; v < n; ++v) labels[v] = initial_label(doc.elements[v], doc.view_box.area());

  using Neighbor = std::pair<EdgeKind, std::uint64_t>;
  for (int iter = 0; iter <= kRelabelIterations; ++iter) {
    std::vector<std::uint64_t> next(n);
    for (size_t v = 0; v < n; ++v) {
      std::vector<Neighbor> neighbors;
      neighbors.reserve(graph.adjacency[v].size());
      for (size_t idx : graph.adjacency[v]) {
        const Edge& e = graph.edges[idx];
        const size_t other = e.a == v ? e.b : e.a;
        neighbors.emplace_back(e.kind, labels[other]);
        ++features[v][FeatureKey{static_cast<std::uint8_t>(iter), e.kind, labels[other]}];
      }
      if (iter == kRelabelIterations) continue;
      std::sort(neighbors.begin(), neighbors.end());
      HashEncoder enc;
      enc.u64(labels[v]).u32(static_cast<std::uint32_t>(neighbors.size()));
      for (const auto& [kind, label] : neighbors) enc.u8(static_cast<std::uint8_t>(kind)).u64(label);
      next[v] = enc.digest();
    }
    labels = std::move(next);
  }
  return features;
}

double paint_similarity(const Paint& a, const Paint& b) {
  if (!a && !b) return 1.0;
  if (!a || !b) return 0.0;
  const double dr = double(a->r) - double(b->r);
  const double dg = double(a->g) - double(b->g);
  const double db = double(a->b) - double(b->b);
  // Distance over the RGB cube diagonal, as one sqrt so the extremes are exact.
  const double dist = std::sqrt((dr * dr + dg * dg + db * db) / (3.0 * 255.0 * 255.0));
  return std::clamp((1.0 - dist) * (1.0 - std::abs(a->a - b->a)), 0.0, 1.0);
}

double cosine_similarity(const StructuralFeatures& a, const StructuralFeatures& b) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (const auto& [key, count] : a) na += double(count) * count;
  for (const auto& [key, count] : b) nb += double(count) * count;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      dot += double(ia->second) * ib->second;
      ++ia;
      ++ib;
    }
  }
  // Counts are integers, so na*nb is exact and sqrt of a perfect square is
  // exact; identical histograms give exactly 1.
  return std::clamp(dot / std::sqrt(na * nb), 0.0, 1.0);
}

DimensionScores element_similarity(const Element& a, const StructuralFeatures& fa, const Element& b,
                                   const StructuralFeatures& fb, const SimilarityWeights& w) {
  DimensionScores s;
  s.color = 0.5 * (paint_similarity(a.style.fill, b.style.fill) +
                   paint_similarity(a.style.stroke, b.style.stroke));
  s.shape = 0.5 * ((a.kind == b.kind ? 1.0 : 0.0) + aspect_similarity(a.bbox, b.bbox));
  s.size = ratio(a.bbox.area(), b.bbox.area());
  if (a.style.text && b.style.text) s.text = text_similarity(*a.style.text, *b.style.text);
  s.structure = cosine_similarity(fa, fb);

  double num = w.color * s.color + w.shape * s.shape + w.size * s.size + w.structure * s.structure;
  double den = w.color + w.shape + w.size + w.structure;
  if (s.text) {
    num += w.text * *s.text;
    den += w.text;
  }
  s.combined = den > 0.0 ? std::clamp(num / den, 0.0, 1.0) : 0.0;
  return s;
}

AnalyzedDocument analyze(const DesignDocument& doc, const GraphConfig& cfg) {
  AnalyzedDocument out;
  out.doc = &doc;
  out.graph = build_graph(doc, cfg);
  out.features = structural_features(doc, out.graph);
  return out;
}

const MatchEntry* Correspondence::base_entry(std::string_view target) const {
  for (const MatchEntry& entry : base) {
    if (entry.target == target) return &entry;
  }
  return nullptr;
}

const std::string& Correspondence::effective(std::string_view target) const {
  for (auto it = overrides.rbegin(); it != overrides.rend(); ++it) {
    if (it->target == target) return it->source;
  }
  const MatchEntry* entry = base_entry(target);
  if (!entry) throw Error(ErrorCode::UnknownElementId, "unknown target element id: " + std::string(target));
  return entry->source;
}

std::vector<Override> Correspondence::effective_match() const {
  std::unordered_map<std::string, std::string> latest;
  for (const Override& o : overrides) latest[o.target] = o.source;
  std::vector<Override> out;
  out.reserve(base.size());
  for (const MatchEntry& entry : base) {
    auto it = latest.find(entry.target);
    out.push_back({entry.target, it == latest.end() ? entry.source : it->second});
  }
  return out;
}

Correspondence compute_correspondence(const AnalyzedDocument& src, const AnalyzedDocument& tgt,
                                      const SimilarityWeights& w, const ProgressFn& progress) {
  w.validate();
  const DesignDocument& sd = *src.doc;
  const DesignDocument& td = *tgt.doc;
  if (sd.elements.empty()) throw Error(ErrorCode::EmptySource, "source design has no elements");
  if (td.elements.empty()) throw Error(ErrorCode::EmptyTarget, "target design has no elements");

  Correspondence c;
  c.source_hash = sd.source_hash;
  c.target_hash = td.source_hash;
  for (const Element& e : sd.elements) c.source_ids.push_back(e.id);
  c.base.reserve(td.elements.size());

  std::vector<DimensionScores> row(sd.elements.size());
  std::vector<double> combined(sd.elements.size());
  for (size_t t = 0; t < td.elements.size(); ++t) {
    for (size_t s = 0; s < sd.elements.size(); ++s) {
      row[s] = element_similarity(td.elements[t], tgt.features[t], sd.elements[s], src.features[s], w);
      combined[s] = row[s].combined;
    }
    const size_t best = argmax_with_tiebreak(combined);
    c.base.push_back({td.elements[t].id, sd.elements[best].id, row[best]});
    if (progress) progress(double(t + 1) / double(td.elements.size()));
  }
  return c;
}

Correspondence retarget(const Correspondence& c, const std::vector<std::string>& targets,
                        const std::string& source) {
  if (std::find(c.source_ids.begin(), c.source_ids.end(), source) == c.source_ids.end()) {
    throw Error(ErrorCode::UnknownElementId, "unknown source element id: " + source);
  }
  for (const std::string& t : targets) {
    if (!c.base_entry(t)) throw Error(ErrorCode::UnknownElementId, "unknown target element id: " + t);
  }
  Correspondence out = c;
  for (const std::string& t : targets) out.overrides.push_back({t, source});
  return out;
}

Correspondence clear_overrides(const Correspondence& c) {
  Correspondence out = c;
  out.overrides.clear();
  return out;
}

std::set<std::string> matched_targets(const Correspondence& c, std::string_view source) {
  if (std::find(c.source_ids.begin(), c.source_ids.end(), source) == c.source_ids.end()) {
    throw Error(ErrorCode::UnknownElementId, "unknown source element id: " + std::string(source));
  }
  std::set<std::string> out;
  for (const Override& m : c.effective_match()) {
    if (m.source == source) out.insert(m.target);
  }
  return out;
}

std::vector<double> selection_scores(const AnalyzedDocument& doc, const std::set<std::string>& current,
                                     const SimilarityWeights& w) {
  const DesignDocument& d = *doc.doc;
  if (current.empty()) throw Error(ErrorCode::EmptySelection, "selection is empty");
  std::vector<size_t> selected;
  for (const std::string& id : current) {
    check_id(d, id);
    selected.push_back(*d.index_of(id));
  }
  std::vector<double> scores(d.elements.size(), 0.0);
  for (size_t e = 0; e < d.elements.size(); ++e) {
    double best = 0.0;
    for (size_t s : selected) {
      best = std::max(best, element_similarity(d.elements[e], doc.features[e], d.elements[s],
                                               doc.features[s], w)
                                .combined);
    }
    scores[e] = best;
  }
  return scores;
}

std::set<std::string> expand_selection(const AnalyzedDocument& doc, const std::set<std::string>& current,
                                       const SimilarityWeights& w) {
  w.validate();
  const std::vector<double> scores = selection_scores(doc, current, w);
  const auto& elements = doc.doc->elements;
  double best = -1.0;
  for (size_t e = 0; e < elements.size(); ++e) {
    if (!current.count(elements[e].id)) best = std::max(best, scores[e]);
  }
  std::set<std::string> out = current;
  if (best < 0.0) return out;
  for (size_t e = 0; e < elements.size(); ++e) {
    if (!current.count(elements[e].id) && scores[e] >= best - kTieTolerance) out.insert(elements[e].id);
  }
  return out;
}

std::set<std::string> threshold_selection(const AnalyzedDocument& doc, const std::set<std::string>& seed,
                                          double tau, const SimilarityWeights& w) {
  w.validate();
  const std::vector<double> scores = selection_scores(doc, seed, w);
  std::set<std::string> out = seed;
  const auto& elements = doc.doc->elements;
  for (size_t e = 0; e < elements.size(); ++e) {
    if (scores[e] >= tau) out.insert(elements[e].id);
  }
  return out;
}

double step_threshold(double tau, int steps) {
  return std::clamp(quantize(tau + steps * kThresholdStep), 0.0, 1.0);
}

std::string score_matrix_csv(const AnalyzedDocument& src, const AnalyzedDocument& tgt,
                             const SimilarityWeights& w) {
  w.validate();
  std::string out = "targetId,sourceId,color,shape,size,text,structure,combined\n";
  const auto& se = src.doc->elements;
  const auto& te = tgt.doc->elements;
  for (size_t t = 0; t < te.size(); ++t) {
    for (size_t s = 0; s < se.size(); ++s) {
      DimensionScores d = element_similarity(te[t], tgt.features[t], se[s], src.features[s], w);
      out += te[t].id + "," + se[s].id + "," + format_number(d.color) + "," + format_number(d.shape) +
             "," + format_number(d.size) + "," + (d.text ? format_number(*d.text) : "") + "," +
             format_number(d.structure) + "," + format_number(d.combined) + "\n";
    }
  }
  return out;
}

}  // namespace vst
