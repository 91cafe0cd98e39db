#pragma once

#include <memory>
#include <string>

#include "bwslex/service.hpp"

namespace bwslex {

// JSON-over-HTTP front end for a StudyService.
//
//   POST /studies                    {design, idempotency_key?, tuples_per_batch?}
//   POST /studies/{id}/sessions      {annotator_id, demographics?}
//   GET  /sessions/{sid}/next
//   POST /sessions/{sid}/judgments   {tuple_id, best, worst}
//   GET  /studies/{id}/export?filtered=true|false
//   GET  /studies/{id}/status
//   POST /studies/{id}/close
//
// Errors: {code, message, field?} with 400/404/409/422.
class HttpServer {
 public:
  explicit HttpServer(StudyService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Port 0 picks a free port. Returns the bound port or -1.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace bwslex
