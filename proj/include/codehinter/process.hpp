// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace codehinter {

struct ProcessResult {
  int exit_code = -1;  // -1 when killed or not started
  bool timed_out = false;
  std::string output;  // combined stdout + stderr, tail-truncated
};

struct ProcessOptions {
  std::filesystem::path cwd;
  std::map<std::string, std::string> extra_env;
  std::chrono::milliseconds timeout{60'000};
  std::size_t max_output = 16 * 1024;
};

/// Runs argv[0] (looked up on PATH when it has no slash) in its own process
/// group and waits at most `timeout`; on expiry the whole group is killed.
/// Never throws for child failures; a program that cannot be executed
/// reports exit code 127.
ProcessResult run_process(const std::vector<std::string>& argv, const ProcessOptions& options);

/// Absolute path of the running executable, or empty if unknown.
std::filesystem::path current_executable();

}  // namespace codehinter
