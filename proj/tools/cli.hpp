#pragma once

#include <iosfwd>

namespace vst::cli {

enum ExitCode {
  kOk = 0,
  kFailure = 1,        // parse failure, bad arguments, I/O, session schema
  kEmptyDocument = 2,
  kHashMismatch = 3,
  kInvalidEdit = 4,    // bad --set or --retarget
  kBindFailure = 5,
};

// Entry point behind the `vst` executable; writes summaries to `out` and
// diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vst::cli
