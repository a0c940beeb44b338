#pragma once

#include <memory>
#include <string>

namespace vst {

struct ServiceOptions {
  // Directory served at "/" when non-empty.
  std::string static_dir;
  std::string cors_origin = "*";
  // Worker threads for the HTTP server. Each keep-alive connection holds
  // one while open.
  int threads = 32;
};

// In-memory session registry behind an HTTP API. Matching runs on a
// background thread per session; mutations of one session are serialized.
class SessionService {
 public:
  explicit SessionService(ServiceOptions options = {});
  ~SessionService();

  SessionService(const SessionService&) = delete;
  SessionService& operator=(const SessionService&) = delete;

  // Binds the listening socket; port 0 picks a free port. Returns the bound
  // port. Throws Error(IoError) when the socket cannot be bound or the static
  // directory does not exist.
  int bind(const std::string& host, int port);
  // Serves until stop(). Requires a successful bind().
  void run();
  // Callable from any thread, before or during run().
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace vst
