// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

#include "codehinter/host.hpp"

#include <httplib.h>

#include "codehinter/runner.hpp"

namespace codehinter::host {

using nlohmann::json;

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::BadRequest:
    case ErrorCode::ConfigInvalid:
    case ErrorCode::ValidationError:
    case ErrorCode::SchemaMismatch:
    case ErrorCode::SubjectMismatch:
    case ErrorCode::MalformedLocation:
    case ErrorCode::UnknownFormula:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::PreconditionViolated:
    case ErrorCode::EmptySpectrum: return 400;
    case ErrorCode::RevealGated: return 403;
    case ErrorCode::NotFound:
    case ErrorCode::SessionNotFound:
    case ErrorCode::UnknownProposal: return 404;
    case ErrorCode::IllegalTransition:
    case ErrorCode::SnapshotDrift:
    case ErrorCode::StaleProposal:
    case ErrorCode::NoFailingTests: return 409;
    case ErrorCode::NoValidatedFix:
    case ErrorCode::ValidationBudgetExceeded:
    case ErrorCode::InsufficientDistractors:
    case ErrorCode::SourceTooLarge:
    case ErrorCode::NoReferenceSolution:
    case ErrorCode::NoOpReveal: return 422;
    case ErrorCode::AdapterFailure:
    case ErrorCode::TraceInvalid: return 502;
    case ErrorCode::ProviderUnavailable: return 503;
    case ErrorCode::Timeout: return 504;
    case ErrorCode::IoError:
    case ErrorCode::CorruptLog:
    case ErrorCode::CorpusInvalid:
    case ErrorCode::BindFailure: return 500;
  }
  return 500;
}

json error_body(const Error& e) {
  return {{"code", error_code_name(e.code())}, {"message", e.what()}, {"details", e.details()}};
}

struct Server::Impl {
  httplib::Server http;
};

namespace {

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  json j = json::parse(req.body, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::BadRequest, "the request body is not JSON");
  if (!j.is_object()) throw Error(ErrorCode::BadRequest, "the request body must be a JSON object");
  return j;
}

using Action = std::function<json(const httplib::Request&, const std::string& id)>;

// Runs `action` and maps domain errors onto the JSON error envelope.
httplib::Server::Handler wrap(Action action, int ok_status = 200) {
  return [action = std::move(action), ok_status](const httplib::Request& req, httplib::Response& res) {
    try {
      std::string id = req.matches.size() > 1 ? req.matches[1].str() : "";
      reply(res, ok_status, action(req, id));
    } catch (const Error& e) {
      reply(res, http_status(e.code()), error_body(e));
    } catch (const json::exception& e) {
      reply(res, 400, error_body(Error(ErrorCode::BadRequest, e.what())));
    } catch (const std::exception& e) {
      reply(res, 500, {{"code", "internal"}, {"message", e.what()}, {"details", nullptr}});
    }
  };
}

}  // namespace

Server::Server(Workbench& wb, ServerOptions options)
    : impl_(std::make_unique<Impl>()), options_(std::move(options)) {
  auto& http = impl_->http;
  // Address reuse only; port sharing would let a second server start silently.
  http.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });
  const std::string s = R"(/sessions/([0-9a-f]+))";

  http.Get("/healthz", wrap([](const auto&, const auto&) { return json{{"status", "ok"}, {"version", kVersion}}; }));

  http.Post("/sessions", wrap(
                             [&wb](const httplib::Request& req, const std::string&) {
                               json body = parse_body(req);
                               runner::ProjectConfig config;
                               if (body.contains("project")) {
                                 config = runner::load_project_config(body["project"].get<std::string>());
                               } else {
                                 config = runner::config_from_json(body.contains("config") ? body["config"] : body,
                                                                   std::filesystem::current_path());
                               }
                               std::string id = wb.create_session(config);
                               return json{{"session_id", id}, {"state", "CREATED"}};
                             },
                             201));
  http.Get("/sessions", wrap([&wb](const auto&, const auto&) { return json{{"sessions", wb.store().list()}}; }));
  http.Get(s, wrap([&wb](const auto&, const std::string& id) { return wb.view(id); }));

  http.Post(s + "/e2e", wrap([&wb](const auto&, const std::string& id) { return wb.run_e2e(id); }));
  http.Post(s + "/helpers/locate", wrap([&wb](const httplib::Request& req, const std::string& id) {
              json body = parse_body(req);
              auto formula = spectrum::parse_formula(body.value("formula", std::string("ochiai")));
              int top = body.value("top", static_cast<int>(spectrum::kDefaultTopK));
              if (top < 1) throw Error(ErrorCode::BadRequest, "top must be at least 1");
              return wb.locate(id, formula, static_cast<std::size_t>(top));
            }));
  http.Post(s + "/helpers/quiz", wrap([&wb](const auto&, const std::string& id) { return wb.quiz(id); }));
  http.Post(s + "/quiz/answer", wrap([&wb](const httplib::Request& req, const std::string& id) {
              json body = parse_body(req);
              if (!body.contains("choice") || !body["choice"].is_number_integer()) {
                throw Error(ErrorCode::BadRequest, "choice must be an integer");
              }
              return wb.answer(id, body["choice"].get<int>());
            }));
  http.Post(s + "/helpers/prints", wrap([&wb](const auto&, const std::string& id) { return wb.prints(id); }));
  http.Post(s + "/helpers/prints/run", wrap([&wb](const auto&, const std::string& id) { return wb.run_prints(id); }));
  http.Post(s + "/patch", wrap([&wb](const httplib::Request& req, const std::string& id) {
              return wb.apply_patch(id, parse_body(req));
            }));
  http.Post(s + "/solution", wrap([&wb](const auto&, const std::string& id) { return wb.solution(id); }));

  // GET previews log nothing; POST records that the student opened the tool.
  http.Get(s + "/pseudocode", wrap([&wb](const auto&, const std::string& id) { return wb.pseudocode(id, false); }));
  http.Post(s + "/pseudocode", wrap([&wb](const auto&, const std::string& id) { return wb.pseudocode(id, true); }));
  auto file_param = [](const httplib::Request& req) -> std::optional<std::string> {
    if (req.has_param("file")) return req.get_param_value("file");
    return std::nullopt;
  };
  http.Get(s + "/visualizer-url", wrap([&wb, file_param](const httplib::Request& req, const std::string& id) {
             return wb.visualizer(id, file_param(req), false);
           }));
  http.Post(s + "/visualizer-url", wrap([&wb, file_param](const httplib::Request& req, const std::string& id) {
              json body = parse_body(req);
              auto file = file_param(req);
              if (body.contains("file")) file = body["file"].get<std::string>();
              return wb.visualizer(id, file, true);
            }));

  http.Get(s + "/events", wrap([&wb](const auto&, const std::string& id) { return json{{"events", wb.events(id)}}; }));
  http.Get(s + "/report/usage", wrap([&wb](const auto&, const std::string& id) { return wb.usage(id); }));
  http.Post(s + "/chat", wrap([&wb](const httplib::Request& req, const std::string& id) {
              json body = parse_body(req);
              if (!body.contains("text") || !body["text"].is_string()) {
                throw Error(ErrorCode::BadRequest, "text must be a string");
              }
              return wb.chat(id, body["text"].get<std::string>());
            }));

  http.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (res.status == 404 && res.body.empty()) {
      reply(res, 404, error_body(Error(ErrorCode::NotFound, "no route for " + req.method + " " + req.path)));
    }
  });
  if (options_.ui_dir) http.set_mount_point("/ui", options_.ui_dir->string());
}

Server::~Server() { stop(); }

int Server::bind() {
  auto& http = impl_->http;
  bool ok;
  if (options_.port == 0) {
    port_ = http.bind_to_any_port(options_.bind);
    ok = port_ > 0;
  } else {
    ok = http.bind_to_port(options_.bind, options_.port);
    port_ = options_.port;
  }
  if (!ok) {
    throw Error(ErrorCode::BindFailure, "cannot listen on " + options_.bind + ":" + std::to_string(options_.port),
                {{"bind", options_.bind}, {"port", options_.port}});
  }
  return port_;
}

void Server::serve() { impl_->http.listen_after_bind(); }

void Server::wait_ready() const { impl_->http.wait_until_ready(); }

void Server::stop() {
  if (impl_ && impl_->http.is_running()) impl_->http.stop();
}

}  // namespace codehinter::host
