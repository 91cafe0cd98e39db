#include "bwslex/http_server.hpp"

#include <httplib.h>
#include <json.hpp>

namespace bwslex {

using nlohmann::json;

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code,
                const std::string& message, const std::string& field = {}) {
  json body{{"code", code}, {"message", message}};
  if (!field.empty()) body["field"] = field;
  send_json(res, status, body);
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  json body = json::parse(req.body);
  if (!body.is_object()) throw ValidationError("request body must be a JSON object");
  return body;
}

std::string required_string(const json& body, const char* field) {
  if (!body.contains(field) || !body[field].is_string())
    throw ValidationError(std::string(field) + " is required", field);
  return body[field].get<std::string>();
}

json session_json(const Session& s) {
  return {{"session_id", s.session_id}, {"study_id", s.study_id},
          {"annotator_id", s.annotator_id}, {"batch_id", s.batch_id},
          {"cursor", s.cursor}, {"total", s.batch_length},
          {"completed", s.completed}};
}

Demographics demographics(const json& j) {
  if (!j.is_object()) throw ValidationError("demographics must be an object", "demographics");
  Demographics d;
  auto str = [&](const char* k, std::optional<std::string>& out) {
    if (!j.contains(k) || j[k].is_null()) return;
    if (!j[k].is_string()) throw ValidationError(std::string(k) + " must be a string", k);
    out = j[k].get<std::string>();
  };
  if (j.contains("age") && !j["age"].is_null()) {
    if (!j["age"].is_number_integer()) throw ValidationError("age must be an integer", "age");
    d.age = j["age"].get<int>();
  }
  str("gender", d.gender);
  str("education", d.education);
  if (j.contains("native_speaker") && !j["native_speaker"].is_null()) {
    if (!j["native_speaker"].is_boolean())
      throw ValidationError("native_speaker must be a boolean", "native_speaker");
    d.native_speaker = j["native_speaker"].get<bool>();
  }
  return d;
}

// Runs `fn`, mapping library errors onto the JSON error body.
template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const ServiceError& e) {
    send_error(res, http_status(e.code()), to_string(e.code()), e.what(), e.field());
  } catch (const ValidationError& e) {
    send_error(res, 422, "validation_error", e.what(), e.field());
  } catch (const json::exception& e) {
    send_error(res, 400, "bad_request", std::string("malformed JSON: ") + e.what());
  } catch (const std::exception& e) {
    send_error(res, 500, "internal", e.what());
  }
}

}  // namespace

struct HttpServer::Impl {
  StudyService& service;
  httplib::Server server;

  explicit Impl(StudyService& s) : service(s) { routes(); }

  void routes();
};

void HttpServer::Impl::routes() {
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Headers", "Content-Type, Idempotency-Key"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  server.Post("/studies", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      json body = parse_body(req);
      // either {design: {...}, ...} or the bare design document
      const json& doc = body.contains("design") ? body["design"] : body;
      if (!doc.contains("emotions")) throw ValidationError("design is required", "design");
      StudyDesign d;
      d = design_from_json(doc.dump());
      CreateOptions opts;
      if (req.has_header("Idempotency-Key")) opts.idempotency_key = req.get_header_value("Idempotency-Key");
      if (body.contains("idempotency_key")) opts.idempotency_key = required_string(body, "idempotency_key");
      if (body.contains("tuples_per_batch")) {
        if (!body["tuples_per_batch"].is_number_unsigned())
          throw ValidationError("tuples_per_batch must be a positive integer", "tuples_per_batch");
        opts.tuples_per_batch = body["tuples_per_batch"].get<std::size_t>();
      }
      const std::string id = service.create_study(d, opts);
      const StudyStatus st = service.status(id);
      send_json(res, 201,
                {{"study_id", id}, {"status", st.open ? "open" : "closed"},
                 {"batches", st.batches.size()}, {"free_slots", st.free_slots}});
    });
  });

  server.Post("/studies/:id/sessions", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      json body = parse_body(req);
      std::optional<Demographics> demo;
      if (body.contains("demographics") && !body["demographics"].is_null())
        demo = demographics(body["demographics"]);
      const Session s =
          service.open_session(req.path_params.at("id"), required_string(body, "annotator_id"), demo);
      send_json(res, 200, session_json(s));
    });
  });

  server.Get("/sessions/:sid/next", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const std::string& sid = req.path_params.at("sid");
      auto p = service.next_tuple(sid);
      if (!p) {
        send_json(res, 200, {{"done", true}, {"completion_code", sid}});
        return;
      }
      send_json(res, 200,
                {{"done", false}, {"tuple_id", p->tuple_id}, {"emotion", to_string(p->emotion)},
                 {"words", p->words}, {"index", p->index}, {"total", p->total}});
    });
  });

  server.Post("/sessions/:sid/judgments", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      json body = parse_body(req);
      const auto ack = service.submit_judgment(req.path_params.at("sid"),
                                               required_string(body, "tuple_id"),
                                               required_string(body, "best"),
                                               required_string(body, "worst"));
      send_json(res, 200,
                {{"accepted", true}, {"cursor", ack.cursor}, {"total", ack.total},
                 {"completed", ack.completed}});
    });
  });

  server.Get("/studies/:id/export", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      bool filtered = true;
      if (req.has_param("filtered")) {
        const std::string v = req.get_param_value("filtered");
        if (v == "true" || v == "1") {
          filtered = true;
        } else if (v == "false" || v == "0") {
          filtered = false;
        } else {
          throw ValidationError("filtered must be true or false", "filtered");
        }
      }
      res.status = 200;
      res.set_content(service.export_study(req.path_params.at("id"), filtered), "text/csv");
    });
  });

  server.Get("/studies/:id/status", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const StudyStatus st = service.status(req.path_params.at("id"));
      json batches = json::array();
      for (const auto& b : st.batches)
        batches.push_back({{"batch_id", b.batch_id}, {"emotion", to_string(b.emotion)},
                           {"tuples", b.tuples}, {"assigned", b.assigned},
                           {"completed", b.completed}, {"slots", b.slots}});
      send_json(res, 200,
                {{"study_id", st.study_id}, {"status", st.open ? "open" : "closed"},
                 {"sessions", st.sessions}, {"judgments", st.judgments},
                 {"free_slots", st.free_slots}, {"batches", std::move(batches)}});
    });
  });

  server.Post("/studies/:id/close", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      service.close_study(req.path_params.at("id"));
      send_json(res, 200, {{"study_id", req.path_params.at("id")}, {"status", "closed"}});
    });
  });

  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty() && res.status == 404) send_error(res, 404, "not_found", "no such route");
  });
}

HttpServer::HttpServer(StudyService& service) : impl_(std::make_unique<Impl>(service)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen_after_bind() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace bwslex
