#include "vst/error.hpp"

namespace vst {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedXml: return "MalformedXml";
    case ErrorCode::UnsupportedRoot: return "UnsupportedRoot";
    case ErrorCode::EmptyDocument: return "EmptyDocument";
    case ErrorCode::UnknownColor: return "UnknownColor";
    case ErrorCode::InvalidValue: return "InvalidValue";
    case ErrorCode::EmptySource: return "EmptySource";
    case ErrorCode::EmptyTarget: return "EmptyTarget";
    case ErrorCode::EmptySelection: return "EmptySelection";
    case ErrorCode::UnknownElementId: return "UnknownElementId";
    case ErrorCode::InapplicableAttribute: return "InapplicableAttribute";
    case ErrorCode::UnknownAttribute: return "UnknownAttribute";
    case ErrorCode::HashMismatch: return "HashMismatch";
    case ErrorCode::VersionUnsupported: return "VersionUnsupported";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace vst
