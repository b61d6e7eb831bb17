//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <csignal>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <pthread.h>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "convmol/fingerprint.hpp"
#include "convmol/service.hpp"
#include "convmol/smiles.hpp"

namespace convmol::service {
namespace {

using nlohmann::json;

constexpr const char *kJson = "application/json";

void reply(httplib::Response &res, int status, const std::string &body) {
  res.status = status;
  res.set_content(body, kJson);
}

void reply_error(httplib::Response &res, int status, const std::string &message) {
  reply(res, status, json({ { "error", { { "message", message } } } }).dump());
}

struct SessionEntry {
  SessionEntry(chat::Session s, std::shared_ptr<chat::Backend> b)
      : session(std::move(s)), backend(std::move(b)) { }

  chat::Session session;
  std::shared_ptr<chat::Backend> backend;
  std::ofstream log;
  // Held for the whole turn; a second turn gets 409.
  std::mutex turn;
  // Guards `session` and `log` for readers.
  std::mutex state;
};

}  // namespace

struct Server::Impl {
  explicit Impl(ServiceOptions o): options(std::move(o)) { routes(); }

  ServiceOptions options;
  httplib::Server http;
  std::mutex sessions_mutex;
  std::map<std::string, std::unique_ptr<SessionEntry>> sessions;
  std::int64_t next_id = 1;

  SessionEntry *find(const std::string &id) {
    std::lock_guard lock(sessions_mutex);
    auto it = sessions.find(id);
    return it == sessions.end() ? nullptr : it->second.get();
  }

  void routes() {
    http.set_default_headers({ { "Access-Control-Allow-Origin", "*" } });
    http.Options(R"(.*)", [](const httplib::Request &, httplib::Response &res) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });
    http.Get("/health", [](const httplib::Request &, httplib::Response &res) {
      reply(res, 200, R"({"status":"ok"})");
    });
    http.Post("/sessions", [this](const httplib::Request &req, httplib::Response &res) {
      create_session(req, res);
    });
    http.Post(R"(/sessions/([^/]+)/turns)",
              [this](const httplib::Request &req, httplib::Response &res) {
                turn(req, res);
              });
    http.Get(R"(/sessions/([^/]+)/log)",
             [this](const httplib::Request &req, httplib::Response &res) {
               SessionEntry *e = find(req.matches[1]);
               if (e == nullptr) {
                 return reply_error(res, 404, "no such session");
               }
               std::lock_guard lock(e->state);
               res.set_content(e->session.to_jsonl(), "application/x-ndjson");
             });
    http.Get(R"(/sessions/([^/]+))",
             [this](const httplib::Request &req, httplib::Response &res) {
               SessionEntry *e = find(req.matches[1]);
               if (e == nullptr) {
                 return reply_error(res, 404, "no such session");
               }
               std::lock_guard lock(e->state);
               reply(res, 200, session_json(e->session));
             });
    http.Get("/molecules/parse", [](const httplib::Request &req, httplib::Response &res) {
      if (!req.has_param("smiles")) {
        return reply_error(res, 400, "missing smiles parameter");
      }
      auto parsed = smiles::parse(req.get_param_value("smiles"));
      if (!parsed) {
        return reply(res, 422, parse_error_json(parsed.error()));
      }
      reply(res, 200, graph_json(*parsed));
    });
    http.Post("/similarity", [](const httplib::Request &req, httplib::Response &res) {
      similarity(req, res);
    });
    http.Post("/evaluate", [](const httplib::Request &req, httplib::Response &res) {
      evaluate(req, res);
    });
  }

  static std::string session_json(const chat::Session &s) {
    nlohmann::ordered_json j;
    j["id"] = s.id();
    j["backend"] = s.backend_id();
    j["created_at"] = s.created_at();
    nlohmann::ordered_json events = nlohmann::ordered_json::array();
    for (const chat::Event &e: s.events()) {
      events.push_back(nlohmann::ordered_json::parse(chat::event_to_json(e)));
    }
    j["events"] = std::move(events);
    return j.dump();
  }

  void create_session(const httplib::Request &req, httplib::Response &res) {
    std::string backend_id = options.default_backend;
    if (!req.body.empty()) {
      try {
        const json body = json::parse(req.body);
        if (body.contains("backend")) {
          backend_id = body.at("backend").get<std::string>();
        }
      } catch (const json::exception &e) {
        return reply_error(res, 400, e.what());
      }
    }
    auto backend = options.backends.find(backend_id);
    if (backend == options.backends.end()) {
      return reply_error(res, 404, "unknown backend " + backend_id);
    }

    std::lock_guard lock(sessions_mutex);
    std::ostringstream id;
    id << "s" << std::setw(6) << std::setfill('0') << next_id++;
    auto entry = std::make_unique<SessionEntry>(
        chat::Session(id.str(), backend_id, options.clock), backend->second);
    if (!options.log_dir.empty()) {
      std::filesystem::create_directories(options.log_dir);
      entry->log.open(options.log_dir / (id.str() + ".jsonl"),
                      std::ios::binary | std::ios::trunc);
      entry->log << entry->session.header_json() << "\n";
      entry->log.flush();
    }
    nlohmann::ordered_json out;
    out["id"] = id.str();
    out["backend"] = backend_id;
    out["created_at"] = entry->session.created_at();
    sessions.emplace(id.str(), std::move(entry));
    reply(res, 200, out.dump());
  }

  void turn(const httplib::Request &req, httplib::Response &res) {
    SessionEntry *e = find(req.matches[1]);
    if (e == nullptr) {
      return reply_error(res, 404, "no such session");
    }
    std::unique_lock turn_lock(e->turn, std::try_to_lock);
    if (!turn_lock.owns_lock()) {
      return reply_error(res, 409, "a turn is already in progress for this session");
    }

    std::string kind, content;
    int k = chat::kDefaultCandidates;
    std::optional<int> choose;
    try {
      const json body = json::parse(req.body);
      kind = body.at("kind").get<std::string>();
      content = body.at("content").get<std::string>();
      if (auto it = body.find("k"); it != body.end() && !it->is_null()) {
        k = it->get<int>();
      }
      if (auto it = body.find("choose"); it != body.end() && !it->is_null()) {
        choose = it->get<int>();
      }
    } catch (const json::exception &ex) {
      return reply_error(res, 400, ex.what());
    }
    if (kind != "text" && kind != "molecule") {
      return reply_error(res, 400, "kind must be text or molecule");
    }

    chat::Session work = [&] {
      std::lock_guard lock(e->state);
      return e->session;
    }();
    const std::size_t before = work.events().size();
    std::string body;
    try {
      if (kind == "text") {
        body = chat::candidate_set_to_json(
            chat::generate_turn(work, *e->backend, content, k, choose));
      } else {
        body = json({ { "description",
                        chat::understand_turn(work, *e->backend, content) } })
                   .dump();
      }
    } catch (const chat::BackendError &ex) {
      return reply_error(res, 502, ex.what());
    } catch (const chat::ChatError &ex) {
      return reply_error(res, 422, ex.what());
    }

    std::lock_guard lock(e->state);
    if (e->log.is_open()) {
      for (std::size_t i = before; i < work.events().size(); ++i) {
        e->log << chat::event_to_json(work.events()[i]) << "\n";
      }
      e->log.flush();
    }
    e->session = std::move(work);
    reply(res, 200, body);
  }

  static void similarity(const httplib::Request &req, httplib::Response &res) {
    std::string a, b;
    try {
      const json body = json::parse(req.body);
      a = body.at("a").get<std::string>();
      b = body.at("b").get<std::string>();
    } catch (const json::exception &ex) {
      return reply_error(res, 400, ex.what());
    }
    auto ga = smiles::parse(a);
    auto gb = smiles::parse(b);
    if (!ga || !gb) {
      return reply(res, 422, parse_error_json(!ga ? ga.error() : gb.error()));
    }
    const fp::SimilarityTriple s = fp::similarity(*ga, *gb);
    nlohmann::ordered_json out;
    out["rdk"] = s.rdk;
    out["maccs"] = s.maccs;
    out["morgan"] = s.morgan;
    reply(res, 200, out.dump());
  }

  // {"task", "predictions" | "predictions_path", "references" |
  // "references_path"}; inline fields hold JSONL text.
  static void evaluate(const httplib::Request &req, httplib::Response &res) {
    try {
      const json body = json::parse(req.body);
      auto records = [&](const std::string &name) {
        if (body.contains(name)) {
          return metrics::parse_records(body.at(name).get<std::string>());
        }
        return metrics::read_records(body.at(name + "_path").get<std::string>());
      };
      const metrics::Task task = metrics::task_from_name(body.at("task").get<std::string>());
      const auto preds = records("predictions");
      const auto refs = records("references");
      const metrics::EvalReport report = task == metrics::Task::kGeneration
                                             ? metrics::evaluate_generation(preds, refs)
                                             : metrics::evaluate_understanding(preds, refs);
      reply(res, 200, report.to_json());
    } catch (const json::exception &ex) {
      reply_error(res, 400, ex.what());
    } catch (const std::exception &ex) {
      reply_error(res, 422, ex.what());
    }
  }
};

Server::Server(ServiceOptions options)
    : impl_(std::make_unique<Impl>(std::move(options))) { }

Server::~Server() {
  close_logs();
}

int Server::bind(const std::string &host, int port) {
  if (port == 0) {
    return impl_->http.bind_to_any_port(host);
  }
  return impl_->http.bind_to_port(host, port) ? port : -1;
}

bool Server::listen() {
  return impl_->http.listen_after_bind();
}

void Server::stop() {
  impl_->http.stop();
}

void Server::close_logs() {
  std::lock_guard lock(impl_->sessions_mutex);
  for (auto &[id, entry]: impl_->sessions) {
    std::lock_guard state(entry->state);
    if (entry->log.is_open()) {
      entry->log.flush();
      entry->log.close();
    }
  }
}

int cmd_serve(const Config &config, Streams io) {
  ServiceOptions options;
  try {
    options.backends = make_backends(config);
  } catch (const std::exception &e) {
    io.err << "serve: " << e.what() << "\n";
    return 1;
  }
  if (options.backends.empty()) {
    io.err << "serve: no backend configured\n";
    return 1;
  }
  if (options.backends.count(options.default_backend) == 0) {
    options.default_backend = options.backends.begin()->first;
  }
  options.log_dir = config.serve.log_dir;

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  Server server(std::move(options));
  const int port = server.bind(config.serve.host, config.serve.port);
  if (port < 0) {
    io.err << "serve: cannot bind " << config.serve.host << ":"
           << config.serve.port << "\n";
    return 1;
  }
  io.out << "listening on http://" << config.serve.host << ":" << port << "\n"
         << std::flush;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  const bool ok = server.listen();
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  server.close_logs();
  return ok ? 0 : 1;
}

}  // namespace convmol::service
