#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vst {

enum class ErrorCode {
  MalformedXml,
  UnsupportedRoot,
  EmptyDocument,
  UnknownColor,
  InvalidValue,
  EmptySource,
  EmptyTarget,
  EmptySelection,
  UnknownElementId,
  InapplicableAttribute,
  UnknownAttribute,
  HashMismatch,
  VersionUnsupported,
  SchemaError,
  IoError,
};

std::string_view error_code_name(ErrorCode code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace vst
