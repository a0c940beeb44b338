#include <gtest/gtest.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "support/edit_sequences.hpp"
#include "support/generators.hpp"
#include "vst/error.hpp"
#include "vst/hash.hpp"
#include "vst/session_store.hpp"

namespace vst {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path data_dir() { return fs::path(VST_TEST_DATA_DIR); }

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::shared_ptr<const DesignDocument> load(std::string_view svg) {
  return std::make_shared<const DesignDocument>(parse_svg(svg));
}

ErrorCode error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::IoError;
}

// The session behind the committed golden file.
TransferSession fixture_session() {
  auto src = load(read_file(data_dir() / "transfer" / "source.svg"));
  auto tgt = load(read_file(data_dir() / "transfer" / "target.svg"));
  TransferSession s = make_session(src, tgt);
  s.source_path = "source.svg";
  s.target_path = "target.svg";
  s = copy_all(s);
  s = transfer_source_style(s, {"t_note", "t_sub"}, "s_body");
  s = set_state(s, {"t_head"}, AttributeName::FontSize, AttributeState::original());
  s = set_state(s, {"t_badge"}, AttributeName::Fill, AttributeState::custom(Paint{Color{0, 0, 255, 0.5}}));
  s = set_state(s, {"t_badge"}, AttributeName::StrokeWidth, AttributeState::custom(2.5));
  s = set_state(s, {"t_sub"}, AttributeName::TextAlign, AttributeState::custom(TextAlign::Center));
  s = set_state(s, {"t_note"}, AttributeName::Text, AttributeState::custom(std::string("limited\nstock")));
  return s;
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("vst_session_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(TempDir, SaveLoadSaveIsByteIdentical) {
  TransferSession s = fixture_session();
  const fs::path first = dir_ / "a.vst.json";
  const fs::path second = dir_ / "b.vst.json";
  save_session(s, first.string());
  TransferSession loaded = load_session(first.string(), read_file(data_dir() / "transfer" / "source.svg"),
                                        read_file(data_dir() / "transfer" / "target.svg"));
  save_session(loaded, second.string());
  EXPECT_EQ(read_file(first), read_file(second));
}

TEST_F(TempDir, RandomSessionsRoundTrip) {
  std::mt19937 rng(2025);
  for (int round = 0; round < 100; ++round) {
    std::string src_svg = testing::random_svg(rng, 4 + round % 6);
    std::string tgt_svg = testing::random_svg(rng, 5 + round % 7);
    auto src = load(src_svg);
    auto tgt = load(tgt_svg);
    SimilarityWeights w{1.0, 0.5 + round % 3, 2.0, 0.0, 1.25};
    GraphConfig cfg;
    cfg.align_epsilon = 0.5 * (round % 5);
    if (round % 4 == 0) cfg.enabled_kinds.reset(static_cast<size_t>(EdgeKind::AlignCenterY));
    TransferSession s = make_session(src, tgt, w, cfg);
    for (int k = 0; k < 8; ++k) s = testing::random_edit(rng, s);

    const std::string text = session_to_json(s);
    TransferSession back = restore_session(text, load(src_svg), load(tgt_svg));
    ASSERT_EQ(session_to_json(back), text);
    EXPECT_EQ(back.script, s.script);
    EXPECT_EQ(back.correspondence.overrides, s.correspondence.overrides);
    EXPECT_EQ(back.correspondence.effective_match(), s.correspondence.effective_match());
    EXPECT_EQ(back.weights, s.weights);
    EXPECT_EQ(back.graph_config, s.graph_config);
    EXPECT_EQ(serialize_svg(apply_transfer(back)), serialize_svg(apply_transfer(s)));
  }
}

TEST(SessionJson, EmptyScriptCoversEveryTarget) {
  std::mt19937 rng(3);
  auto src = load(testing::random_svg(rng, 4));
  auto tgt = load(testing::random_svg(rng, 9));
  json j = json::parse(session_to_json(make_session(src, tgt)));
  EXPECT_TRUE(j["script"].empty());
  EXPECT_EQ(j["baseMatch"].size(), 9u);
  EXPECT_EQ(j["formatVersion"], 1);
  EXPECT_EQ(j["targetHash"], hash_to_hex(tgt->source_hash));
}

TEST(SessionJson, MatchesGoldenFile) {
  const fs::path golden = data_dir() / "golden" / "session_fixture.vst.json";
  const std::string text = session_to_json(fixture_session());
  if (std::getenv("VST_UPDATE_GOLDEN")) write_file(golden, text);
  EXPECT_EQ(text, read_file(golden));
}

TEST(SessionJson, PriorBuildFixtureLoads) {
  // Hand-written in a different layout (compact, unsorted keys) to stand in
  // for a file from an earlier writer.
  const std::string src = read_file(data_dir() / "transfer" / "source.svg");
  const std::string tgt = read_file(data_dir() / "transfer" / "target.svg");
  TransferSession s = load_session((data_dir() / "golden" / "session_v1_prior.vst.json").string(), src, tgt);
  EXPECT_EQ(s.correspondence.effective("t_head"), "s_title");
  EXPECT_EQ(s.correspondence.effective("t_card"), "s_title");
  EXPECT_EQ(s.correspondence.base_entry("t_card")->source, "s_box");
  EXPECT_EQ(s.script.size(), 3u);
  EXPECT_EQ(s.weights, (SimilarityWeights{1, 1, 1, 1, 0}));

  DesignDocument out = apply_transfer(s);
  EXPECT_EQ(out.find("t_head")->style.fill, (Color{0x1d, 0x35, 0x57, 1.0}));
  EXPECT_EQ(out.find("t_card")->style.fill, (Color{0x1d, 0x35, 0x57, 1.0}));
  EXPECT_EQ(out.find("t_sub")->style.text->font_size, 18.0);
  EXPECT_EQ(serialize_svg(out), read_file(data_dir() / "golden" / "session_v1_prior_output.svg"));
}

TEST(SessionJson, LoadDoesNotRematch) {
  auto src = load(read_file(data_dir() / "transfer" / "source.svg"));
  auto tgt = load(read_file(data_dir() / "transfer" / "target.svg"));
  TransferSession s = make_session(src, tgt);
  json j = json::parse(session_to_json(s));
  // Point every target at a source that is not its argmax.
  std::vector<std::string> picked;
  for (auto& entry : j["baseMatch"]) {
    std::string current = entry["source"];
    std::string other = current == "s_box" ? "s_title" : "s_box";
    entry["source"] = other;
    picked.push_back(other);
  }
  TransferSession back = restore_session(j.dump(), src, tgt);
  for (size_t i = 0; i < picked.size(); ++i) {
    EXPECT_EQ(back.correspondence.base[i].source, picked[i]);
    EXPECT_NE(back.correspondence.base[i].source, s.correspondence.base[i].source);
    EXPECT_FALSE(back.correspondence.base[i].scores.has_value());
  }
}

TEST(SessionJson, LoadTimeIndependentOfMatching) {
  std::mt19937 rng(185);
  auto src = load(testing::random_svg(rng, 92));
  auto tgt = load(testing::random_svg(rng, 93));
  TransferSession s = copy_all(make_session(src, tgt));
  const std::string text = session_to_json(s);
  auto start = std::chrono::steady_clock::now();
  TransferSession back = restore_session(text, src, tgt);
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(ms, 50.0);
  EXPECT_EQ(session_to_json(back), text);
}

class SessionErrors : public ::testing::Test {
 protected:
  void SetUp() override {
    src_ = load(read_file(data_dir() / "transfer" / "source.svg"));
    tgt_ = load(read_file(data_dir() / "transfer" / "target.svg"));
    good_ = json::parse(session_to_json(fixture_session()));
  }
  ErrorCode restore(const json& j) {
    return error_of([&] { restore_session(j.dump(), src_, tgt_); });
  }
  std::shared_ptr<const DesignDocument> src_;
  std::shared_ptr<const DesignDocument> tgt_;
  json good_;
};

TEST_F(SessionErrors, TamperedHash) {
  json j = good_;
  j["targetHash"] = "0123456789abcdef";
  EXPECT_EQ(restore(j), ErrorCode::HashMismatch);
  j = good_;
  j["sourceHash"] = "0123456789abcdef";
  EXPECT_EQ(restore(j), ErrorCode::HashMismatch);
}

TEST_F(SessionErrors, ChangedInputBytes) {
  std::string changed = read_file(data_dir() / "transfer" / "target.svg") + "\n";
  EXPECT_EQ(error_of([&] { restore_session(good_.dump(), src_, load(changed)); }), ErrorCode::HashMismatch);
}

TEST_F(SessionErrors, UnsupportedVersion) {
  json j = good_;
  j["formatVersion"] = 2;
  EXPECT_EQ(restore(j), ErrorCode::VersionUnsupported);
}

TEST_F(SessionErrors, SchemaViolations) {
  std::vector<std::function<void(json&)>> edits = {
      [](json& j) { j.erase("weights"); },
      [](json& j) { j["formatVersion"] = "1"; },
      [](json& j) { j["extra"] = 1; },
      [](json& j) { j["targetHash"] = "xyz"; },
      [](json& j) { j["baseMatch"].erase(0); },
      [](json& j) { j["baseMatch"][0]["source"] = "nope"; },
      [](json& j) { std::swap(j["baseMatch"][0], j["baseMatch"][1]); },
      [](json& j) { j["overrides"].push_back({{"target", "ghost"}, {"source", "s_box"}}); },
      [](json& j) { j["script"].push_back({{"target", "t_card"}, {"attribute", "fontSize"}, {"state", "copied"}}); },
      [](json& j) { j["script"].push_back({{"target", "t_card"}, {"attribute", "glow"}, {"state", "copied"}}); },
      [](json& j) { j["script"].push_back({{"target", "t_card"}, {"attribute", "fill"}, {"state", "custom"}}); },
      [](json& j) {
        j["script"].push_back({{"target", "t_card"}, {"attribute", "stroke"}, {"state", "copied"}, {"value", "red"}});
      },
      [](json& j) {
        j["script"].push_back({{"target", "t_card"}, {"attribute", "opacity"}, {"state", "custom"}, {"value", "0.5"}});
      },
      [](json& j) { j["script"].push_back(j["script"][0]); },
      [](json& j) { j["weights"]["color"] = -1; },
      [](json& j) { j["graphConfig"]["enabledKinds"].push_back("SameColor"); },
  };
  for (size_t i = 0; i < edits.size(); ++i) {
    json j = good_;
    edits[i](j);
    EXPECT_EQ(restore(j), ErrorCode::SchemaError) << "edit " << i;
  }
  EXPECT_EQ(error_of([&] { restore_session("{not json", src_, tgt_); }), ErrorCode::SchemaError);
  EXPECT_EQ(error_of([&] { restore_session("[]", src_, tgt_); }), ErrorCode::SchemaError);
}

TEST(SessionIo, UnwritablePath) {
  EXPECT_EQ(error_of([] { save_session(fixture_session(), "/nonexistent-dir/x.vst.json"); }), ErrorCode::IoError);
  EXPECT_EQ(error_of([] { load_session("/nonexistent-dir/x.vst.json", "", ""); }), ErrorCode::IoError);
}

TEST(SessionIo, ReadInputs) {
  SessionInputs in = read_session_inputs(session_to_json(fixture_session()));
  EXPECT_EQ(in.source_path, "source.svg");
  EXPECT_EQ(in.target_path, "target.svg");
}

}  // namespace
}  // namespace vst
