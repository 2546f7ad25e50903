#include "fbt/cli/service.hpp"

#include "httplib.h"
#include "json.hpp"

namespace fbt::cli {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

HttpReply error_reply(int status, const std::string& message) {
  return {status, ordered_json{{"error", message}}.dump()};
}

std::optional<json> parse_body(std::string_view body) {
  try {
    json j = json::parse(body);
    if (j.is_object()) return j;
  } catch (const json::parse_error&) {
  }
  return std::nullopt;
}

}  // namespace

std::shared_ptr<SessionService::Session> SessionService::find(
    const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::size_t SessionService::session_count() const {
  std::lock_guard lock(mu_);
  return sessions_.size();
}

HttpReply SessionService::create_session(std::string_view body) {
  const auto req = parse_body(body);
  if (!req) return error_reply(400, "body must be a JSON object");
  if (!req->contains("method") || !(*req)["method"].is_string()) {
    return error_reply(400, "\"method\" is required");
  }
  const auto method = parse_method((*req)["method"].get<std::string>());
  if (!method) return error_reply(400, "unknown method");

  auto layout = std::make_shared<const Layout>(builtin_layout(*method));
  if (req->contains("layout_id") && !(*req)["layout_id"].is_null()) {
    if (!(*req)["layout_id"].is_string() ||
        (*req)["layout_id"].get<std::string>() != layout->id()) {
      return error_reply(400, "unknown layout_id for this method");
    }
  }

  CalibrationInput calibration{default_fingertips(), GeometryParams{}};
  if (req->contains("profile") && !(*req)["profile"].is_null()) {
    try {
      calibration = parse_calibration((*req)["profile"].dump());
    } catch (const GeometryError& e) {
      return error_reply(400, e.what());
    }
  }
  std::optional<CalibrationProfile> profile;
  try {
    profile = derive_anchors(calibration.fingertips, calibration.params, *layout);
  } catch (const GeometryError& e) {
    return error_reply(400, e.what());
  }

  auto session = std::make_shared<Session>(new_session(layout), *profile);
  session->log.header.method = *method;
  session->log.header.layout_id = layout->id();
  session->log.header.calibration = calibration;
  if (req->contains("participant_id") && (*req)["participant_id"].is_string()) {
    session->log.header.participant_id = (*req)["participant_id"].get<std::string>();
  }

  std::string id;
  {
    std::lock_guard lock(mu_);
    id = "s" + std::to_string(next_id_++);
    sessions_.emplace(id, session);
  }

  ordered_json reply;
  reply["session_id"] = id;
  reply["layout"] = json::parse(serialize_layout(*layout));
  ordered_json anchors = ordered_json::array();
  for (const auto& a : session->profile.anchors()) {
    anchors.push_back({{"name", a.name}, {"x", a.position.x}, {"y", a.position.y}});
  }
  reply["anchors"] = std::move(anchors);
  reply["radius"] = session->profile.activation_radius();
  return {201, reply.dump()};
}

HttpReply SessionService::press(const std::string& id, std::string_view body) {
  auto session = find(id);
  if (!session) return error_reply(404, "unknown session");
  const auto req = parse_body(body);
  if (!req) return error_reply(400, "body must be a JSON object");

  std::lock_guard lock(session->mu);
  const Layout& layout = *session->state.layout;
  if (session->state.terminated) return error_reply(409, "session terminated");

  SessionEvent event;
  std::optional<Slot> slot;
  if (req->contains("region")) {
    if (!(*req)["region"].is_string()) return error_reply(400, "region must be a string");
    const auto name = (*req)["region"].get<std::string>();
    slot = layout.find_slot(name);
    if (!slot) return error_reply(400, "unknown region \"" + name + "\"");
    event.payload = RegionPayload{name};
  } else if (req->contains("x") && req->contains("y") && (*req)["x"].is_number() &&
             (*req)["y"].is_number()) {
    const Point p{(*req)["x"].get<double>(), (*req)["y"].get<double>()};
    if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0)) {
      return error_reply(400, "touch outside the unit square");
    }
    slot = resolve_region(p, session->profile);
    event.payload = TouchPayload{p.x, p.y};
  } else {
    return error_reply(400, "press needs \"region\" or numeric \"x\" and \"y\"");
  }

  auto& events = session->log.events;
  if (!events.empty() && events.back().payload.index() != event.payload.index()) {
    return error_reply(400, "touch and region presses cannot be mixed in one session");
  }
  if (req->contains("t")) {
    if (!(*req)["t"].is_number_integer() || (*req)["t"].get<std::int64_t>() < 0) {
      return error_reply(400, "t must be a non-negative integer");
    }
    event.t_ms = (*req)["t"].get<std::int64_t>();
  } else {
    event.t_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - session->started)
                     .count();
  }
  if (!events.empty() && event.t_ms < events.back().t_ms) {
    return error_reply(400, "timestamps must not decrease");
  }

  ordered_json reply;
  ordered_json fb = ordered_json::array();
  if (slot) {
    auto t = fbt::press(session->state, *slot);
    session->state = std::move(t.state);
    for (const auto& e : t.events) {
      fb.push_back({{"kind", feedback_kind_name(e.kind)}, {"utterance", e.utterance}});
    }
    reply["region"] = layout.slot_name(*slot);
  } else {
    reply["region"] = nullptr;
  }
  events.push_back(std::move(event));
  reply["events"] = std::move(fb);
  reply["transcript"] = transcript(session->state);
  reply["terminated"] = session->state.terminated;
  return {200, reply.dump()};
}

HttpReply SessionService::export_log(const std::string& id) {
  auto session = find(id);
  if (!session) return error_reply(404, "unknown session");
  std::lock_guard lock(session->mu);
  return {200, serialize_session_log(session->log), "application/x-ndjson"};
}

HttpReply SessionService::list_layouts() const {
  ordered_json list = ordered_json::array();
  for (auto m : kAllMethods) {
    list.push_back(ordered_json::parse(serialize_layout(builtin_layout(m))));
  }
  return {200, ordered_json{{"layouts", list}}.dump()};
}

HttpReply SessionService::delete_session(const std::string& id) {
  std::lock_guard lock(mu_);
  if (sessions_.erase(id) == 0) return error_reply(404, "unknown session");
  return {200, ordered_json{{"deleted", id}}.dump()};
}

void mount_routes(httplib::Server& server, SessionService& service) {
  auto send = [](httplib::Response& res, const HttpReply& reply) {
    res.status = reply.status;
    res.set_content(reply.body, reply.content_type);
  };
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Headers", "Content-Type"},
                              {"Access-Control-Allow-Methods",
                               "GET, POST, DELETE, OPTIONS"}});
  server.Options(R"(/v1/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
  });
  server.Get("/v1/layouts", [&service, send](const httplib::Request&,
                                             httplib::Response& res) {
    send(res, service.list_layouts());
  });
  server.Post("/v1/session", [&service, send](const httplib::Request& req,
                                              httplib::Response& res) {
    send(res, service.create_session(req.body));
  });
  server.Post(R"(/v1/session/([^/]+)/press)",
              [&service, send](const httplib::Request& req, httplib::Response& res) {
                send(res, service.press(req.matches[1], req.body));
              });
  server.Get(R"(/v1/session/([^/]+)/log)",
             [&service, send](const httplib::Request& req, httplib::Response& res) {
               send(res, service.export_log(req.matches[1]));
             });
  server.Delete(R"(/v1/session/([^/]+))",
                [&service, send](const httplib::Request& req, httplib::Response& res) {
                  send(res, service.delete_session(req.matches[1]));
                });
}

}  // namespace fbt::cli
