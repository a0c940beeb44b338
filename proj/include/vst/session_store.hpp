#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "vst/transfer.hpp"

namespace vst {

inline constexpr int kSessionFormatVersion = 1;

// Canonical session text: UTF-8 JSON, keys sorted, arrays in document order,
// two-space indent, trailing newline. Documents are referenced by path and
// hash, never embedded; similarity scores are not stored.
std::string session_to_json(const TransferSession& session);

// Throws Error(IoError).
void save_session(const TransferSession& session, const std::string& path);

// Rebuilds a session from session text and already parsed documents. The
// base correspondence is taken from the file as is; nothing is rematched.
// Throws Error(HashMismatch | VersionUnsupported | SchemaError).
TransferSession restore_session(std::string_view json_text, std::shared_ptr<const DesignDocument> source,
                                std::shared_ptr<const DesignDocument> target);

// Reads `path` and parses the two documents from the given bytes.
// Throws Error(IoError) plus everything parse_svg and restore_session throw.
TransferSession load_session(const std::string& path, std::string_view source_bytes,
                             std::string_view target_bytes);

struct SessionInputs {
  std::string source_path;
  std::string target_path;
};

// Document paths recorded in session text. Throws Error(SchemaError).
SessionInputs read_session_inputs(std::string_view json_text);

}  // namespace vst
