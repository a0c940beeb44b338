#include "vst/numeric.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace vst {

double quantize(double value) {
  if (!std::isfinite(value)) return 0.0;
  double scaled = std::round(value * 1e6);
  double out = scaled / 1e6;
  return out == 0.0 ? 0.0 : out;
}

std::string format_number(double value) {
  double q = quantize(value);
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), q,
                                 std::chars_format::fixed, kDecimalPlaces);
  if (ec != std::errc()) return "0";
  std::string out(buf.data(), end);
  if (auto dot = out.find('.'); dot != std::string::npos) {
    while (out.back() == '0') out.pop_back();
    if (out.back() == '.') out.pop_back();
  }
  if (out == "-0") out = "0";
  return out;
}

std::string_view trim(std::string_view text) {
  constexpr std::string_view ws = " \t\r\n\f";
  auto first = text.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  auto last = text.find_last_not_of(ws);
  return text.substr(first, last - first + 1);
}

std::optional<double> consume_number(std::string_view& text) {
  size_t i = 0;
  while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\n' ||
                             text[i] == '\r' || text[i] == ','))
    ++i;
  size_t start = i;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) ++i;
  bool digits = false;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    ++i;
    digits = true;
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      ++i;
      digits = true;
    }
  }
  if (!digits) return std::nullopt;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    size_t j = i + 1;
    if (j < text.size() && (text[j] == '+' || text[j] == '-')) ++j;
    size_t exp_start = j;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    if (j > exp_start) i = j;
  }
  // from_chars rejects a leading '+'.
  size_t parse_from = (text[start] == '+') ? start + 1 : start;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data() + parse_from, text.data() + i, value);
  if (ec != std::errc() || ptr != text.data() + i) return std::nullopt;
  text.remove_prefix(i);
  return value;
}

std::optional<double> parse_number(std::string_view text) {
  text = trim(text);
  auto value = consume_number(text);
  if (!value || !text.empty()) return std::nullopt;
  return value;
}

}  // namespace vst
