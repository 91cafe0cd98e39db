#include <gtest/gtest.h>

#include <httplib.h>

#include <json.hpp>
#include <sstream>
#include <thread>

#include "bwslex/design.hpp"
#include "bwslex/http_server.hpp"
#include "bwslex/scoring.hpp"
#include "test_support.hpp"

using namespace bwslex;
using nlohmann::json;

namespace {

class HttpTest : public ::testing::Test {
 protected:
  void SetUp() override {
    server_ = std::make_unique<HttpServer>(service_);
    port_ = server_->bind("127.0.0.1", 0);
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }

  void TearDown() override {
    server_->stop();
    if (thread_.joinable()) thread_.join();
  }

  httplib::Result post(const std::string& path, const json& body) {
    return client_->Post(path, body.dump(), "application/json");
  }

  static json parse(const httplib::Result& r) { return json::parse(r->body); }

  static StudyDesign small_design() {
    return generate_design({"bange", "losh", "maut", "juy", "druss"}, {Emotion::joy}, 1);
  }

  std::string create() {
    auto r = post("/studies", {{"design", json::parse(design_to_json(small_design()))}});
    EXPECT_EQ(r->status, 201);
    return parse(r)["study_id"];
  }

  StudyService service_;
  std::unique_ptr<HttpServer> server_;
  std::unique_ptr<httplib::Client> client_;
  std::thread thread_;
  int port_ = 0;
};

void expect_error(const httplib::Result& r, int status, const std::string& code,
                  const std::string& field = {}) {
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, status) << r->body;
  const json body = json::parse(r->body);
  EXPECT_EQ(body["code"], code) << r->body;
  EXPECT_TRUE(body["message"].is_string());
  if (!field.empty()) EXPECT_EQ(body.value("field", ""), field);
}

}  // namespace

TEST_F(HttpTest, CreateStudy) {
  const auto doc = json::parse(design_to_json(small_design()));
  auto r = post("/studies", {{"design", doc}, {"idempotency_key", "abc"}});
  ASSERT_EQ(r->status, 201);
  const json body = parse(r);
  EXPECT_EQ(body["status"], "open");
  EXPECT_EQ(body["batches"], 1);
  EXPECT_EQ(body["free_slots"], 3);
  // bare document plus header key resolves to the same study
  httplib::Headers h{{"Idempotency-Key", "abc"}};
  auto again = client_->Post("/studies", h, doc.dump(), "application/json");
  EXPECT_EQ(parse(again)["study_id"], body["study_id"]);
  EXPECT_EQ(r->get_header_value("Access-Control-Allow-Origin"), "*");
}

TEST_F(HttpTest, CreateErrors) {
  expect_error(client_->Post("/studies", "{not json", "application/json"), 400, "bad_request");
  expect_error(post("/studies", json::object()), 422, "validation_error", "design");
  auto doc = json::parse(design_to_json(small_design()));
  doc["emotions"][0]["tuples"][0]["words"][1] = doc["emotions"][0]["tuples"][0]["words"][0];
  expect_error(post("/studies", {{"design", doc}}), 422, "validation_error");
  expect_error(post("/studies", {{"design", json::parse(design_to_json(small_design()))},
                                 {"tuples_per_batch", -3}}),
               422, "validation_error", "tuples_per_batch");
  post("/studies", {{"design", json::parse(design_to_json(small_design()))}, {"idempotency_key", "k"}});
  const auto other = generate_design({"bange", "losh", "maut", "juy", "vomp"}, {Emotion::joy}, 1);
  expect_error(post("/studies", {{"design", json::parse(design_to_json(other))}, {"idempotency_key", "k"}}),
               409, "conflict");
}

TEST_F(HttpTest, FullSessionFlow) {
  const std::string id = create();
  auto r = post("/studies/" + id + "/sessions",
                {{"annotator_id", "ann1"}, {"demographics", {{"age", 31}, {"native_speaker", true}}}});
  ASSERT_EQ(r->status, 200) << r->body;
  const json session = parse(r);
  const std::string sid = session["session_id"];
  EXPECT_EQ(session["batch_id"], "batch-0");
  EXPECT_EQ(session["total"], 11);
  EXPECT_EQ(session["cursor"], 0);

  const StudyDesign& d = service_.design(id);
  for (int i = 0;; ++i) {
    const json next = parse(client_->Get("/sessions/" + sid + "/next"));
    if (next["done"]) {
      EXPECT_EQ(next["completion_code"], sid);
      EXPECT_EQ(i, 11);
      break;
    }
    EXPECT_FALSE(next.contains("is_attention_check"));
    EXPECT_FALSE(next.contains("check_key"));
    EXPECT_EQ(next.dump().find("check"), std::string::npos);
    EXPECT_EQ(next["index"], i);
    EXPECT_EQ(next["emotion"], "joy");
    std::array<WordId, 4> words = next["words"];
    std::string best = words[0], worst = words[3];
    for (const auto& b : d.blocks)
      for (const auto& t : b.tuples)
        if (t.words == words && t.is_attention_check) {
          best = t.check_key->best_expected;
          worst = t.check_key->worst_expected;
        }
    const json ack = parse(post("/sessions/" + sid + "/judgments",
                                {{"tuple_id", next["tuple_id"]}, {"best", best}, {"worst", worst}}));
    EXPECT_EQ(ack["accepted"], true);
    EXPECT_EQ(ack["cursor"], i + 1);
  }
  expect_error(post("/sessions/" + sid + "/judgments", {{"tuple_id", "x"}, {"best", "a"}, {"worst", "b"}}),
               409, "session_completed");

  auto csv = client_->Get("/studies/" + id + "/export");
  ASSERT_EQ(csv->status, 200);
  EXPECT_EQ(csv->get_header_value("Content-Type"), "text/csv");
  std::istringstream in(csv->body);
  EXPECT_EQ(read_judgments(in).size(), 10u);
  auto all = client_->Get("/studies/" + id + "/export?filtered=false");
  EXPECT_NE(all->body.find("is_attention_check"), std::string::npos);
  expect_error(client_->Get("/studies/" + id + "/export?filtered=maybe"), 422, "validation_error",
               "filtered");

  const json st = parse(client_->Get("/studies/" + id + "/status"));
  EXPECT_EQ(st["sessions"], 1);
  EXPECT_EQ(st["judgments"], 11);
  EXPECT_EQ(st["free_slots"], 2);
  EXPECT_EQ(st["batches"][0]["completed"], 1);
}

TEST_F(HttpTest, JudgmentErrors) {
  const std::string id = create();
  const std::string sid = parse(post("/studies/" + id + "/sessions", {{"annotator_id", "a"}}))["session_id"];
  const json next = parse(client_->Get("/sessions/" + sid + "/next"));
  const std::string tid = next["tuple_id"];
  const std::string w0 = next["words"][0], w1 = next["words"][1];
  const std::string path = "/sessions/" + sid + "/judgments";
  expect_error(post(path, {{"tuple_id", tid}, {"best", w0}, {"worst", w0}}), 422, "validation_error", "worst");
  expect_error(post(path, {{"tuple_id", tid}, {"best", "nope"}, {"worst", w0}}), 422, "validation_error", "best");
  expect_error(post(path, {{"tuple_id", "q0"}, {"best", w0}, {"worst", w1}}), 409, "conflict", "tuple_id");
  expect_error(post(path, {{"best", w0}, {"worst", w1}}), 422, "validation_error", "tuple_id");
  expect_error(post("/sessions/se-none/judgments", {{"tuple_id", tid}, {"best", w0}, {"worst", w1}}), 404,
               "not_found");
  expect_error(client_->Get("/sessions/se-none/next"), 404, "not_found");
}

TEST_F(HttpTest, SessionErrors) {
  const std::string id = create();
  expect_error(post("/studies/st-none/sessions", {{"annotator_id", "a"}}), 404, "not_found");
  expect_error(post("/studies/" + id + "/sessions", json::object()), 422, "validation_error", "annotator_id");
  expect_error(post("/studies/" + id + "/sessions", {{"annotator_id", "a"}, {"demographics", {{"age", "old"}}}}),
               422, "validation_error", "age");
  for (const char* who : {"a", "b", "c"}) EXPECT_EQ(post("/studies/" + id + "/sessions", {{"annotator_id", who}})->status, 200);
  expect_error(post("/studies/" + id + "/sessions", {{"annotator_id", "d"}}), 409, "study_full");
  EXPECT_EQ(post("/studies/" + id + "/close", json::object())->status, 200);
  expect_error(post("/studies/" + id + "/sessions", {{"annotator_id", "e"}}), 409, "study_closed");
  EXPECT_EQ(parse(client_->Get("/studies/" + id + "/status"))["status"], "closed");
}

TEST_F(HttpTest, UnknownRouteAndPreflight) {
  expect_error(client_->Get("/nowhere"), 404, "not_found");
  auto r = client_->Options("/studies");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 204);
  EXPECT_NE(r->get_header_value("Access-Control-Allow-Headers").find("Idempotency-Key"), std::string::npos);
}
