#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "vst/document.hpp"

namespace vst::xml {

struct Node;

// Child content: either a nested element or a run of character data.
struct Content {
  std::unique_ptr<Node> node;
  std::string text;
};

struct Node {
  std::string name;
  AttributeList attributes;
  std::vector<Content> children;

  const std::string* attribute(std::string_view key) const;
  // Name with any namespace prefix removed.
  std::string_view local_name() const;
};

// Throws Error(MalformedXml) with expat's message and line number.
std::unique_ptr<Node> parse(std::string_view bytes);

std::string escape_attribute(std::string_view value);
std::string escape_text(std::string_view value);

// Re-serializes a subtree with attributes in source order.
void write(const Node& node, std::string& out);

}  // namespace vst::xml
