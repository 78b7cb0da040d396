// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <thread>

#include <doctest.h>
#include <httplib.h>

#include "codehinter/assist.hpp"
#include "codehinter/error.hpp"
#include "codehinter/provider.hpp"
#include "support.hpp"

using namespace codehinter;
using namespace codehinter::assist;
using namespace codehinter::testing;
using nlohmann::json;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::IoError;
}

// A chat-completion endpoint whose reply the test scripts.
struct FakeEndpoint {
  httplib::Server http;
  std::thread thread;
  int port = 0;
  std::mutex m;
  int status = 200;
  std::string raw;  // full body, overrides content when set
  std::string content;
  std::vector<json> requests;
  std::vector<std::string> auth;

  FakeEndpoint() {
    http.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(m);
      requests.push_back(json::parse(req.body));
      auth.push_back(req.get_header_value("Authorization"));
      res.status = status;
      res.set_content(!raw.empty() ? raw : json{{"choices", {{{"message", {{"content", content}}}}}}}.dump(),
                      "application/json");
    });
    port = http.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { http.listen_after_bind(); });
    http.wait_until_ready();
  }
  ~FakeEndpoint() {
    http.stop();
    thread.join();
  }

  void reply(const json& j) {
    std::lock_guard lock(m);
    content = j.dump();
  }

  LiveProviderConfig config(const std::string& key = "") const {
    return {"http://127.0.0.1:" + std::to_string(port) + "/v1/", "tutor-model", key, 5};
  }
};

struct Fixture {
  runner::SourceSnapshot snapshot = runner::make_snapshot({{"a.py", "def f(x):\n    y = x - 1\n    return y\n"}});
  CoverageSpectrum spectrum;

  Fixture() {
    spectrum.subject_files = {"a.py"};
    spectrum.records = {record("test_f_one", Outcome::Fail, {{"a.py", 1}, {"a.py", 2}, {"a.py", 3}}),
                        record("test_f_zero", Outcome::Pass, {{"a.py", 1}, {"a.py", 3}})};
  }

  ProviderContext context() const { return build_context(spectrum, snapshot, "Add one to x."); }
};

}  // namespace

TEST_SUITE("provider") {
  TEST_CASE("requests carry the model, a JSON reply format and the key") {
    FakeEndpoint ep;
    Fixture fx;
    LiveProvider live(ep.config("sk-test"));
    CHECK(live.name() == "live:tutor-model");
    ep.reply({{"explanations", {"a.py:2 subtracts.", "a.py:1 is fine.", "a.py:3 returns y."}}});
    auto out = live.explain_locations(fx.context());
    CHECK(out.size() == 3);
    CHECK(out[0] == "a.py:2 subtracts.");
    REQUIRE(ep.requests.size() == 1);
    const json& req = ep.requests[0];
    CHECK(req["model"] == "tutor-model");
    CHECK(req["response_format"]["type"] == "json_object");
    CHECK(req["messages"].size() == 2);
    CHECK(req["messages"][0]["role"] == "system");
    CHECK(req["messages"][1]["content"].get<std::string>().find("\"a.py\"") != std::string::npos);
    CHECK(ep.auth[0] == "Bearer sk-test");

    {
      std::lock_guard lock(ep.m);
      ep.content = "Look at line 2.";
    }
    CHECK(live.chat("why?", fx.context()) == "Look at line 2.");
    CHECK_FALSE(ep.requests.back().contains("response_format"));
  }

  TEST_CASE("fixes, prints and pseudo-code parse") {
    FakeEndpoint ep;
    Fixture fx;
    LiveProvider live(ep.config());
    ep.reply({{"fixes",
               {{{"file", "a.py"}, {"line", 2}, {"old_text", "    y = x - 1"}, {"new_text", "    y = x + 1"},
                 {"explanation", "adds"}},
                {{"file", "../etc/passwd"}, {"line", 1}, {"old_text", "x"}, {"new_text", "y"}},
                {{"file", "a.py"}, {"line", 3}, {"old_text", "    return y"}, {"new_text", nullptr}}}}});
    auto fixes = live.propose_fixes(fx.context());
    REQUIRE(fixes.size() == 2);
    CHECK(fixes[0].edit.new_lines == std::vector<std::string>{"    y = x + 1"});
    CHECK(fixes[0].explanation == "adds");
    CHECK(fixes[1].edit.new_lines.empty());

    ep.reply({{"prints", {{{"file", "a.py"}, {"line", 2}, {"variable", "y"}, {"reason", "watch y"}}}}});
    auto prints = live.propose_prints(fx.context());
    REQUIRE(prints.size() == 1);
    CHECK(prints[0].variable == "y");

    ep.reply({{"steps", {"Read x.", "Return x plus one."}}});
    runner::ExerciseSpec spec;
    spec.statement = "Add one.";
    CHECK(live.pseudocode(spec) == std::vector<std::string>{"Read x.", "Return x plus one."});
  }

  TEST_CASE("every failure mode is ProviderUnavailable") {
    FakeEndpoint ep;
    Fixture fx;
    LiveProvider live(ep.config());
    auto ctx = fx.context();

    ep.reply({{"explanations", {"only one"}}});
    CHECK(code_of([&] { live.explain_locations(ctx); }) == ErrorCode::ProviderUnavailable);
    ep.reply({{"fixes", "nope"}});
    CHECK(code_of([&] { live.propose_fixes(ctx); }) == ErrorCode::ProviderUnavailable);
    ep.reply({{"steps", json::array()}});
    CHECK(code_of([&] { live.pseudocode({}); }) == ErrorCode::ProviderUnavailable);
    {
      std::lock_guard lock(ep.m);
      ep.content = "not json at all";
    }
    CHECK(code_of([&] { live.propose_prints(ctx); }) == ErrorCode::ProviderUnavailable);
    {
      std::lock_guard lock(ep.m);
      ep.raw = R"({"choices": []})";
    }
    CHECK(code_of([&] { live.chat("hi", ctx); }) == ErrorCode::ProviderUnavailable);
    {
      std::lock_guard lock(ep.m);
      ep.raw = "{}";
      ep.status = 500;
    }
    CHECK(code_of([&] { live.chat("hi", ctx); }) == ErrorCode::ProviderUnavailable);

    int closed_port = 0;
    {
      httplib::Server probe;
      closed_port = probe.bind_to_any_port("127.0.0.1");
    }
    LiveProvider down({"http://127.0.0.1:" + std::to_string(closed_port), "m", "", 2});
    CHECK(code_of([&] { down.chat("hi", ctx); }) == ErrorCode::ProviderUnavailable);
  }

  TEST_CASE("a failing live provider degrades to templates") {
    FakeEndpoint ep;
    Fixture fx;
    LiveProvider live(ep.config());
    ep.reply({{"explanations", {"just one"}}});
    auto result = locate_and_explain(fx.spectrum, fx.snapshot, live);
    CHECK(result.fallback);
    REQUIRE(result.lines.size() == 3);
    CHECK(result.lines[0].location == SourceLocation{"a.py", 2});
    CHECK(result.lines[0].explanation.find("covered by 1 failing / 0 passing tests") != std::string::npos);

    ep.reply({{"explanations", {"Line a.py:2 flips the sign.", "a.py:1 is the header.", "a.py:3 returns."}}});
    auto grounded = locate_and_explain(fx.spectrum, fx.snapshot, live);
    CHECK_FALSE(grounded.fallback);
    CHECK(grounded.lines[0].explanation == "Line a.py:2 flips the sign.");
  }

  TEST_CASE("environment selects the provider") {
    unsetenv("CODEHINTER_LLM_URL");
    CHECK_FALSE(LiveProvider::config_from_env().has_value());
    CHECK(provider_from_env()->name() == "stub");
    setenv("CODEHINTER_LLM_URL", "http://127.0.0.1:9/v1", 1);
    setenv("CODEHINTER_LLM_MODEL", "m1", 1);
    setenv("CODEHINTER_LLM_KEY", "k1", 1);
    auto c = LiveProvider::config_from_env();
    REQUIRE(c.has_value());
    CHECK(c->base_url == "http://127.0.0.1:9/v1");
    CHECK(c->model == "m1");
    CHECK(c->api_key == "k1");
    CHECK(provider_from_env()->name() == "live:m1");
    unsetenv("CODEHINTER_LLM_URL");
    unsetenv("CODEHINTER_LLM_MODEL");
    unsetenv("CODEHINTER_LLM_KEY");
  }

  TEST_CASE("the stub answers every request deterministically") {
    Fixture fx;
    StubProvider a, b;
    auto ctx = fx.context();
    CHECK(a.explain_locations(ctx) == b.explain_locations(ctx));
    CHECK(a.explain_locations(ctx).size() == ctx.locations.size());
    CHECK(a.chat("help", ctx) == b.chat("help", ctx));
    CHECK_FALSE(a.chat("help", ctx).empty());
    CHECK(to_json(ctx) == to_json(fx.context()));
  }
}
