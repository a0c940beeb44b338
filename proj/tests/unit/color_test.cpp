#include <gtest/gtest.h>

#include <random>

#include "vst/color.hpp"
#include "vst/error.hpp"

namespace vst {
namespace {

TEST(NormalizeColor, HexForms) {
  EXPECT_EQ(normalize_color("#FF0000"), (Color{255, 0, 0, 1.0}));
  EXPECT_EQ(normalize_color("#f00"), (Color{255, 0, 0, 1.0}));
  EXPECT_EQ(normalize_color("#11223380"), (Color{0x11, 0x22, 0x33, 0.501961}));
  EXPECT_EQ(normalize_color("  #abcdef "), (Color{0xab, 0xcd, 0xef, 1.0}));
}

TEST(NormalizeColor, FunctionalNotation) {
  EXPECT_EQ(normalize_color("rgba(0,0,0,0.5)"), (Color{0, 0, 0, 0.5}));
  EXPECT_EQ(normalize_color("rgb(10, 20, 30)"), (Color{10, 20, 30, 1.0}));
  EXPECT_EQ(normalize_color("rgb(100%, 0%, 50%)"), (Color{255, 0, 128, 1.0}));
  EXPECT_EQ(normalize_color("rgb(1 2 3 / 25%)"), (Color{1, 2, 3, 0.25}));
  EXPECT_EQ(normalize_color("RGB(300,-5,0)"), (Color{255, 0, 0, 1.0}));
}

TEST(NormalizeColor, NamedColors) {
  // Values from the CSS Color 4 named-color table.
  EXPECT_EQ(normalize_color("rebeccapurple"), (Color{102, 51, 153, 1.0}));
  EXPECT_EQ(normalize_color("CornflowerBlue"), (Color{100, 149, 237, 1.0}));
  EXPECT_EQ(normalize_color("aliceblue"), (Color{240, 248, 255, 1.0}));
  EXPECT_EQ(normalize_color("yellowgreen"), (Color{154, 205, 50, 1.0}));
  EXPECT_EQ(normalize_color("transparent"), (Color{0, 0, 0, 0.0}));
}

TEST(NormalizeColor, NoneIsTheNoneVariant) {
  EXPECT_EQ(normalize_color("none"), std::nullopt);
  EXPECT_EQ(normalize_color("NONE"), std::nullopt);
}

TEST(NormalizeColor, UnknownLiteralsThrow) {
  for (const char* bad : {"", "#12", "#ggg", "blurple", "rgb(1,2)", "hsl(0,0%,0%)",
                          "url(#grad)", "rgb(1,2,3,4,5)"}) {
    try {
      normalize_color(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::UnknownColor) << bad;
    }
  }
}

TEST(FormatColor, Canonical) {
  EXPECT_EQ(format_color({255, 0, 0, 1.0}), "#ff0000");
  EXPECT_EQ(format_color({0, 0, 0, 0.5}), "rgba(0,0,0,0.5)");
  EXPECT_EQ(format_paint(std::nullopt), "none");
}

// Normalizing, formatting and normalizing again is a fixed point.
TEST(FormatColor, IdempotentAfterFirstNormalization) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> channel(0, 255);
  std::uniform_real_distribution<double> alpha(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    char literal[96];
    std::snprintf(literal, sizeof literal, "rgba(%d,%d,%d,%.9f)", channel(rng), channel(rng),
                  channel(rng), i % 3 == 0 ? 1.0 : alpha(rng));
    Paint first = normalize_color(literal);
    ASSERT_TRUE(first);
    std::string text = format_color(*first);
    Paint second = normalize_color(text);
    ASSERT_EQ(first, second) << literal << " -> " << text;
    EXPECT_EQ(format_color(*second), text);
    EXPECT_GE(first->a, 0.0);
    EXPECT_LE(first->a, 1.0);
  }
}

}  // namespace
}  // namespace vst
