#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "fbt/engine.hpp"
#include "fbt/geometry.hpp"
#include "fbt/session.hpp"

namespace httplib {
class Server;
}

namespace fbt::cli {

struct HttpReply {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// In-memory session store behind the demo HTTP API. Each session is guarded
// by its own mutex so presses on one session are serialized while distinct
// sessions proceed concurrently.
class SessionService {
 public:
  HttpReply create_session(std::string_view body);
  HttpReply press(const std::string& id, std::string_view body);
  HttpReply export_log(const std::string& id);
  HttpReply list_layouts() const;
  HttpReply delete_session(const std::string& id);

  std::size_t session_count() const;

 private:
  struct Session {
    Session(EngineState s, CalibrationProfile p)
        : state(std::move(s)),
          profile(std::move(p)),
          started(std::chrono::steady_clock::now()) {}

    std::mutex mu;
    EngineState state;
    CalibrationProfile profile;
    SessionLog log;
    std::chrono::steady_clock::time_point started;
  };

  std::shared_ptr<Session> find(const std::string& id) const;

  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_id_ = 1;
};

// Registers the /v1 routes on `server`.
void mount_routes(httplib::Server& server, SessionService& service);

}  // namespace fbt::cli
