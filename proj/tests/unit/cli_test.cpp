#include <gtest/gtest.h>

#include <json.hpp>
#include <sstream>

#include "cli.hpp"
#include "support/edit_sequences.hpp"
#include "support/files.hpp"
#include "support/generators.hpp"
#include "vst/service.hpp"
#include "vst/session_store.hpp"

namespace vst {
namespace {

using nlohmann::json;
using testing::read_file;
using testing::ScratchDir;
using testing::write_file;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun vst_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "vst");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

const char* kOneRect =
    R"(<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 100 100"><rect id="r" x="10" y="10" width="50" height="30" fill="#ff0000"/></svg>)";

class CliTest : public ::testing::Test {
 protected:
  CliTest() : dir_("vst_cli_test") {}

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Copies the transfer fixtures into the scratch directory.
  void stage_fixtures() {
    write_file(dir_ / "source.svg", read_file(testing::data_dir() / "transfer" / "source.svg"));
    write_file(dir_ / "target.svg", read_file(testing::data_dir() / "transfer" / "target.svg"));
  }

  ScratchDir dir_;
};

TEST_F(CliTest, MatchOneRectPair) {
  write_file(dir_ / "a.svg", kOneRect);
  write_file(dir_ / "b.svg", kOneRect);
  CliRun r = vst_cli({"match", path("a.svg"), path("b.svg"), "-o", path("s.vst.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  json s = json::parse(read_file(dir_ / "s.vst.json"));
  ASSERT_EQ(s["baseMatch"].size(), 1u);
  EXPECT_EQ(s["baseMatch"][0]["source"], "r");
  EXPECT_TRUE(s["script"].empty());
  EXPECT_EQ(s["sourcePath"], "a.svg");
  EXPECT_NE(r.out.find("1 elements"), std::string::npos);
}

TEST_F(CliTest, WeightOverrideIsRecorded) {
  stage_fixtures();
  CliRun r = vst_cli({"match", path("source.svg"), path("target.svg"), "-o", path("s.vst.json"), "--weights",
                   "structure=0,color=2", "--align-epsilon", "3", "--edges", "SameFill,Containment"});
  ASSERT_EQ(r.code, 0) << r.err;
  json s = json::parse(read_file(dir_ / "s.vst.json"));
  EXPECT_EQ(s["weights"]["structure"], 0.0);
  EXPECT_EQ(s["weights"]["color"], 2.0);
  EXPECT_EQ(s["graphConfig"]["alignEpsilon"], 3.0);
  EXPECT_EQ(s["graphConfig"]["enabledKinds"], json::parse(R"(["SameFill","Containment"])"));
}

TEST_F(CliTest, TwentyElementPairUnderOneSecond) {
  std::mt19937 rng(20);
  write_file(dir_ / "a.svg", testing::random_svg(rng, 10));
  write_file(dir_ / "b.svg", testing::random_svg(rng, 10));
  CliRun r = vst_cli({"match", path("a.svg"), path("b.svg"), "-o", path("s.vst.json"), "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  ASSERT_EQ(r.out.find('\n'), r.out.size() - 1) << "summary must be one line";
  json summary = json::parse(r.out);
  EXPECT_EQ(summary["sourceElements"], 10);
  EXPECT_LT(summary["milliseconds"].get<double>(), 1000.0);
}

TEST_F(CliTest, MatchIsDeterministic) {
  stage_fixtures();
  ASSERT_EQ(vst_cli({"match", path("source.svg"), path("target.svg"), "-o", path("a.vst.json")}).code, 0);
  ASSERT_EQ(vst_cli({"match", path("source.svg"), path("target.svg"), "-o", path("b.vst.json")}).code, 0);
  EXPECT_EQ(read_file(dir_ / "a.vst.json"), read_file(dir_ / "b.vst.json"));
}

TEST_F(CliTest, CopyNoneReproducesTarget) {
  stage_fixtures();
  ASSERT_EQ(vst_cli({"match", path("source.svg"), path("target.svg"), "-o", path("s.vst.json")}).code, 0);
  CliRun r = vst_cli({"transfer", path("s.vst.json"), "--copy-all", "--copy-none", "-o", path("out.svg")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_file(dir_ / "out.svg"), serialize_svg(parse_svg(read_file(dir_ / "target.svg"))));
  EXPECT_TRUE(json::parse(read_file(dir_ / "s.vst.json"))["script"].empty());
}

TEST_F(CliTest, CopyAllOnSelfMatchGivesSource) {
  stage_fixtures();
  ASSERT_EQ(vst_cli({"match", path("source.svg"), path("source.svg"), "-o", path("s.vst.json")}).code, 0);
  ASSERT_EQ(vst_cli({"transfer", path("s.vst.json"), "--copy-all", "-o", path("out.svg")}).code, 0);
  DesignDocument out = parse_svg(read_file(dir_ / "out.svg"));
  EXPECT_EQ(compare_documents(out, parse_svg(read_file(dir_ / "source.svg"))), std::nullopt);
}

TEST_F(CliTest, EditsApplyLeftToRight) {
  stage_fixtures();
  ASSERT_EQ(vst_cli({"match", path("source.svg"), path("target.svg"), "-o", path("s.vst.json")}).code, 0);
  ASSERT_EQ(vst_cli({"transfer", path("s.vst.json"), "--copy-none", "--copy-all", "--session-out",
                     path("a.vst.json")})
                .code,
            0);
  ASSERT_EQ(vst_cli({"transfer", path("s.vst.json"), "--copy-all", "--copy-none", "--session-out",
                     path("b.vst.json")})
                .code,
            0);
  EXPECT_FALSE(json::parse(read_file(dir_ / "a.vst.json"))["script"].empty());
  EXPECT_TRUE(json::parse(read_file(dir_ / "b.vst.json"))["script"].empty());

  // A set followed by copy-none is wiped; the reverse order keeps it.
  ASSERT_EQ(vst_cli({"transfer", path("s.vst.json"), "--set", "t_card", "fill", "custom,#00ff00", "--copy-none",
                     "--session-out", path("c.vst.json")})
                .code,
            0);
  EXPECT_TRUE(json::parse(read_file(dir_ / "c.vst.json"))["script"].empty());
  ASSERT_EQ(vst_cli({"transfer", path("s.vst.json"), "--copy-none", "--set", "t_card", "fill", "custom,#00ff00",
                     "--session-out", path("d.vst.json")})
                .code,
            0);
  EXPECT_EQ(json::parse(read_file(dir_ / "d.vst.json"))["script"].size(), 1u);
}

TEST_F(CliTest, TransferUpdatesSessionInPlace) {
  stage_fixtures();
  ASSERT_EQ(vst_cli({"match", path("source.svg"), path("target.svg"), "-o", path("s.vst.json")}).code, 0);
  ASSERT_EQ(vst_cli({"transfer", path("s.vst.json"), "--set", "t_card", "fill", "copied"}).code, 0);
  ASSERT_EQ(vst_cli({"transfer", path("s.vst.json"), "--set", "t_head", "fill", "copied"}).code, 0);
  EXPECT_EQ(json::parse(read_file(dir_ / "s.vst.json"))["script"].size(), 2u);
}

TEST_F(CliTest, SessionInputsResolveRelativeToSessionFile) {
  stage_fixtures();
  std::filesystem::create_directories(dir_ / "out");
  ASSERT_EQ(vst_cli({"match", path("source.svg"), path("target.svg"), "-o", path("out/s.vst.json")}).code, 0);
  json s = json::parse(read_file(dir_ / "out" / "s.vst.json"));
  EXPECT_EQ(s["sourcePath"], "../source.svg");
  CliRun r = vst_cli({"transfer", path("out/s.vst.json"), "--copy-all", "-o", path("out.svg"), "--session-out",
                   path("s2.vst.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(read_file(dir_ / "s2.vst.json"))["sourcePath"], "source.svg");
}

// Random edit transcripts through the CLI against the same calls made on
// the library directly.
TEST_F(CliTest, MatchesDirectLibraryUse) {
  std::mt19937 rng(77);
  for (int round = 0; round < 12; ++round) {
    const std::string src_svg = testing::random_svg(rng, 3 + round % 5);
    const std::string tgt_svg = testing::random_svg(rng, 4 + round % 6);
    write_file(dir_ / "source.svg", src_svg);
    write_file(dir_ / "target.svg", tgt_svg);
    ASSERT_EQ(vst_cli({"match", path("source.svg"), path("target.svg"), "-o", path("s.vst.json"), "--weights",
                       "shape=2"})
                  .code,
              0);

    SimilarityWeights w;
    w.shape = 2;
    TransferSession lib = make_session(std::make_shared<const DesignDocument>(parse_svg(src_svg)),
                                       std::make_shared<const DesignDocument>(parse_svg(tgt_svg)), w);
    lib.source_path = "source.svg";
    lib.target_path = "target.svg";

    std::vector<std::string> args = {"transfer", path("s.vst.json"), "-o", path("out.svg")};
    const auto& targets = lib.target->elements;
    const auto& sources = lib.source->elements;
    std::uniform_int_distribution<size_t> tpick(0, targets.size() - 1);
    std::uniform_int_distribution<size_t> spick(0, sources.size() - 1);
    std::uniform_int_distribution<size_t> apick(0, kAllAttributes.size() - 1);
    std::uniform_int_distribution<int> op(0, 5);
    for (int k = 0; k < 6; ++k) {
      switch (op(rng)) {
        case 0:
          args.push_back("--copy-all");
          lib = copy_all(lib);
          break;
        case 1:
          args.push_back("--copy-none");
          lib = copy_none(lib);
          break;
        case 2: {
          const std::string& t1 = targets[tpick(rng)].id;
          const std::string& t2 = targets[tpick(rng)].id;
          const std::string& s = sources[spick(rng)].id;
          args.push_back("--retarget");
          args.push_back(t1 + "," + t2 + "=" + s);
          lib = transfer_source_style(lib, {t1, t2}, s);
          break;
        }
        default: {
          const Element& t = targets[tpick(rng)];
          AttributeName a = kAllAttributes[apick(rng)];
          while (!is_applicable(t.style, a) || a == AttributeName::Text) a = kAllAttributes[apick(rng)];
          args.insert(args.end(), {"--set", t.id, std::string(attribute_name(a))});
          if (op(rng) % 2) {
            args.push_back("copied");
            lib = set_state(lib, {t.id}, a, AttributeState::copied());
          } else {
            AttributeValue v = testing::random_value(rng, a);
            args.push_back("custom," + format_attribute_value(v));
            lib = set_state(lib, {t.id}, a, AttributeState::custom(v));
          }
        }
      }
    }
    CliRun r = vst_cli(args);
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(read_file(dir_ / "out.svg"), serialize_svg(apply_transfer(lib))) << "round " << round;
    EXPECT_EQ(read_file(dir_ / "s.vst.json"), session_to_json(lib)) << "round " << round;
  }
}

TEST_F(CliTest, ExitCodes) {
  stage_fixtures();
  write_file(dir_ / "broken.svg", "<svg xmlns=\"http://www.w3.org/2000/svg\"><rect");
  write_file(dir_ / "empty.svg", "<svg xmlns=\"http://www.w3.org/2000/svg\"><g/></svg>");
  EXPECT_EQ(vst_cli({"match", path("broken.svg"), path("target.svg"), "-o", path("x.json")}).code, 1);
  EXPECT_EQ(vst_cli({"match", path("missing.svg"), path("target.svg"), "-o", path("x.json")}).code, 1);
  EXPECT_EQ(vst_cli({"match", path("source.svg"), path("empty.svg"), "-o", path("x.json")}).code, 2);
  EXPECT_EQ(vst_cli({"match", path("source.svg"), path("target.svg")}).code, 1);
  EXPECT_EQ(vst_cli({"match", path("source.svg"), path("target.svg"), "-o", path("x.json"), "--weights", "glow=1"})
                .code,
            1);
  EXPECT_EQ(vst_cli({"match", path("source.svg"), path("target.svg"), "-o", path("x.json"), "--weights", "color=-1"})
                .code,
            1);
  EXPECT_EQ(vst_cli({"frobnicate"}).code, 1);
  EXPECT_EQ(vst_cli({"--help"}).code, 0);

  ASSERT_EQ(vst_cli({"match", path("source.svg"), path("target.svg"), "-o", path("s.vst.json")}).code, 0);
  const std::string before = read_file(dir_ / "s.vst.json");
  const std::vector<std::vector<std::string>> bad_edits = {
      {"--set", "t_card", "fill"},
      {"--set", "t_card", "glow", "copied"},
      {"--set", "t_card", "fill", "borrowed"},
      {"--set", "t_card", "fill", "custom"},
      {"--set", "t_card", "fill", "custom,notacolor"},
      {"--set", "t_card", "fill", "copied,#ffffff"},
      {"--set", "t_card", "fontSize", "copied"},
      {"--set", "t_card", "opacity", "custom,2"},
      {"--set", "ghost", "fill", "copied"},
      {"--set", "t_card,", "fill", "copied"},
      {"--retarget", "t_card"},
      {"--retarget", "t_card=ghost"},
      {"--retarget", "ghost=s_box"},
  };
  for (const auto& edit : bad_edits) {
    std::vector<std::string> args = {"transfer", path("s.vst.json"), "--copy-all"};
    args.insert(args.end(), edit.begin(), edit.end());
    CliRun r = vst_cli(args);
    EXPECT_EQ(r.code, 4) << edit[0] << " " << edit[1];
    EXPECT_FALSE(r.err.empty());
  }
  EXPECT_EQ(read_file(dir_ / "s.vst.json"), before) << "failed edits must not touch the session";

  write_file(dir_ / "target.svg", read_file(dir_ / "target.svg") + "<!-- edited -->\n");
  EXPECT_EQ(vst_cli({"transfer", path("s.vst.json"), "-o", path("o.svg")}).code, 3);
  EXPECT_EQ(vst_cli({"transfer", path("nope.vst.json")}).code, 1);
}

TEST_F(CliTest, ServeBindFailure) {
  SessionService holder;
  int port = holder.bind("127.0.0.1", 0);
  CliRun r = vst_cli({"serve", "--port", std::to_string(port)});
  EXPECT_EQ(r.code, 5);
  EXPECT_EQ(vst_cli({"serve", "--port", "0", "--static-dir", path("no-such-dir")}).code, 1);
}

TEST_F(CliTest, DebugCommands) {
  stage_fixtures();
  CliRun scores = vst_cli({"scores", path("source.svg"), path("target.svg")});
  ASSERT_EQ(scores.code, 0);
  EXPECT_EQ(scores.out.substr(0, scores.out.find('\n')), "targetId,sourceId,color,shape,size,text,structure,combined");
  EXPECT_EQ(std::count(scores.out.begin(), scores.out.end(), '\n'), 1 + 3 * 5);

  CliRun graph = vst_cli({"graph", path("target.svg"), "--edges", "SameFontFamily"});
  ASSERT_EQ(graph.code, 0);
  EXPECT_EQ(graph.out, "SameFontFamily\tt_head\tt_sub\n");
}

}  // namespace
}  // namespace vst
