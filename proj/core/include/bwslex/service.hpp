#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bwslex/design.hpp"
#include "bwslex/errors.hpp"
#include "bwslex/scoring.hpp"

namespace bwslex {

enum class ServiceErrorCode {
  validation,      // 422
  not_found,       // 404
  conflict,        // 409: stale tuple, idempotency key reused with another design
  study_full,      // 409
  study_closed,    // 409
  session_done,    // 409
};

std::string_view to_string(ServiceErrorCode c) noexcept;
int http_status(ServiceErrorCode c) noexcept;

class ServiceError : public Error {
 public:
  ServiceError(ServiceErrorCode code, const std::string& what, std::string field = {})
      : Error(what), code_(code), field_(std::move(field)) {}

  ServiceErrorCode code() const noexcept { return code_; }
  const std::string& field() const noexcept { return field_; }

 private:
  ServiceErrorCode code_;
  std::string field_;
};

struct Demographics {
  std::optional<int> age;
  std::optional<std::string> gender;
  std::optional<std::string> education;
  std::optional<bool> native_speaker;

  friend bool operator==(const Demographics&, const Demographics&) = default;
};

struct Session {
  std::string session_id;
  std::string study_id;
  std::string annotator_id;
  std::optional<Demographics> demographics;
  std::string batch_id;
  std::size_t cursor = 0;
  std::size_t batch_length = 0;
  bool completed = false;
};

// What the annotator sees. Carries no attention-check information; the
// tuple id is an opaque per-study token.
struct Presentation {
  std::string tuple_id;
  Emotion emotion = Emotion::joy;
  std::array<WordId, 4> words;
  std::size_t index = 0;
  std::size_t total = 0;
};

struct SubmitAck {
  std::size_t cursor = 0;
  std::size_t total = 0;
  bool completed = false;
};

struct BatchStatus {
  std::string batch_id;
  Emotion emotion = Emotion::joy;
  std::size_t tuples = 0;
  int assigned = 0;
  int completed = 0;
  int slots = 0;
};

struct StudyStatus {
  std::string study_id;
  bool open = true;
  std::vector<BatchStatus> batches;
  std::size_t sessions = 0;
  std::size_t judgments = 0;
  int free_slots = 0;
};

struct CreateOptions {
  std::optional<std::string> idempotency_key;
  std::size_t tuples_per_batch = 20;
};

struct ServiceOptions {
  // Empty: state lives in memory only.
  std::filesystem::path data_dir;
  // Seeds study and session id generation.
  std::uint64_t seed = 0;
  // Server timestamp for judgments; defaults to the system clock.
  std::function<Timestamp()> clock;
};

// Runs any number of BWS studies. Each study has its own reader/writer lock:
// assignment and submission take it exclusively, reads share it. With a data
// directory every mutation is appended to <study_id>.jsonl before it becomes
// visible, and the constructor replays those files.
class StudyService {
 public:
  explicit StudyService(ServiceOptions options = {});
  ~StudyService();
  StudyService(const StudyService&) = delete;
  StudyService& operator=(const StudyService&) = delete;

  std::string create_study(const StudyDesign& design, const CreateOptions& options = {});

  // Resumes the annotator's session if one exists, otherwise assigns the
  // least-assigned batch (ties to the lowest batch index).
  Session open_session(const std::string& study_id, const std::string& annotator_id,
                       const std::optional<Demographics>& demographics = std::nullopt);

  Session session(const std::string& session_id) const;

  // nullopt once the session is completed.
  std::optional<Presentation> next_tuple(const std::string& session_id) const;

  SubmitAck submit_judgment(const std::string& session_id, const std::string& tuple_id,
                            const WordId& best, const WordId& worst);

  // Judgment log CSV in canonical order. Filtered: attention-check rows and
  // every annotator who failed a check are dropped. Unfiltered: all rows
  // plus an is_attention_check column.
  std::string export_study(const std::string& study_id, bool filtered) const;

  StudyStatus status(const std::string& study_id) const;
  void close_study(const std::string& study_id);

  std::vector<std::string> study_ids() const;
  const StudyDesign& design(const std::string& study_id) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace bwslex
