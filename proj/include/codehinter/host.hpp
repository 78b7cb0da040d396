// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

// The local HTTP service. JSON in, JSON out; errors are
// {"code", "message", "details"} with a status derived from the code.

#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "codehinter/error.hpp"
#include "codehinter/workbench.hpp"

namespace codehinter::host {

inline constexpr std::string_view kDefaultBind = "127.0.0.1";
inline constexpr int kDefaultPort = 8765;

int http_status(ErrorCode code);
nlohmann::json error_body(const Error& error);

struct ServerOptions {
  std::string bind = std::string(kDefaultBind);
  int port = kDefaultPort;  // 0: any free port
  std::optional<std::filesystem::path> ui_dir;  // served under /ui
};

class Server {
 public:
  Server(Workbench& workbench, ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Throws BindFailure. Returns the bound port.
  int bind();
  /// Blocks until stop().
  void serve();
  /// Returns once serve() is accepting connections.
  void wait_ready() const;
  void stop();
  int port() const { return port_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  ServerOptions options_;
  int port_ = 0;
};

}  // namespace codehinter::host
