// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "codehinter/coverage.hpp"
#include "codehinter/error.hpp"
#include "codehinter/process.hpp"
#include "codehinter/util.hpp"

using namespace codehinter;
namespace fs = std::filesystem;

TEST_SUITE("util") {
  TEST_CASE("sha256 matches the standard test vectors") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  }

  TEST_CASE("normalized paths") {
    CHECK(is_normalized_path("a.py"));
    CHECK(is_normalized_path("pkg/sub/a.py"));
    CHECK_FALSE(is_normalized_path(""));
    CHECK_FALSE(is_normalized_path("/abs.py"));
    CHECK_FALSE(is_normalized_path("./a.py"));
    CHECK_FALSE(is_normalized_path("pkg/../a.py"));
    CHECK_FALSE(is_normalized_path("pkg//a.py"));
    CHECK_FALSE(is_normalized_path("pkg\\a.py"));
    CHECK(to_string(SourceLocation{"a.py", 3}) == "a.py:3");
  }

  TEST_CASE("files and temp dirs") {
    fs::path kept;
    {
      TempDir dir("codehinter-test");
      kept = dir.path();
      CHECK(fs::is_directory(kept));
      write_file_atomic(dir.path() / "x.txt", "one\n");
      write_file_atomic(dir.path() / "x.txt", "two\n");
      CHECK(read_file(dir.path() / "x.txt") == "two\n");
      try {
        read_file(dir.path() / "missing");
        FAIL("expected IoError");
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IoError);
      }
    }
    CHECK_FALSE(fs::exists(kept));
  }

  TEST_CASE("subprocesses: exit codes, output and timeouts") {
    ProcessOptions options;
    options.cwd = fs::temp_directory_path();
    auto ok = run_process({"sh", "-c", "echo hi; echo err >&2; exit 3"}, options);
    CHECK(ok.exit_code == 3);
    CHECK(ok.output.find("hi") != std::string::npos);
    CHECK(ok.output.find("err") != std::string::npos);

    options.extra_env = {{"CODEHINTER_PROBE", "42"}};
    CHECK(run_process({"sh", "-c", "printf %s \"$CODEHINTER_PROBE\""}, options).output == "42");

    options.timeout = std::chrono::milliseconds(200);
    auto slow = run_process({"sh", "-c", "sleep 5"}, options);
    CHECK(slow.timed_out);
    CHECK(slow.exit_code == -1);

    CHECK(run_process({"/nonexistent/program"}, options).exit_code == 127);
    CHECK_FALSE(current_executable().empty());
  }
}
