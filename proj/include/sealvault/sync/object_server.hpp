#pragma once

#include <memory>
#include <string>

#include "sealvault/sync/store.hpp"

namespace sealvault::sync {

/// Reference server for the HTTP object protocol, backed by a LocalDirStore.
/// Serves on 127.0.0.1 from a background thread.
class ObjectServer {
 public:
  ObjectServer(fs::path storage, std::string token);
  ~ObjectServer();
  ObjectServer(const ObjectServer&) = delete;
  ObjectServer& operator=(const ObjectServer&) = delete;

  /// Binds (port 0 picks a free port) and starts serving. Returns the port.
  int start(const std::string& host = "127.0.0.1", int port = 0);
  /// Blocks serving on the calling thread until stop() is called.
  void serve_forever(const std::string& host, int port);
  void stop();

  int port() const;
  std::string base_url() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sealvault::sync
