#include "bwslex/service.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <sstream>

#include <json.hpp>

#include "rng.hpp"

namespace bwslex {

using nlohmann::json;

std::string_view to_string(ServiceErrorCode c) noexcept {
  switch (c) {
    case ServiceErrorCode::validation:
      return "validation_error";
    case ServiceErrorCode::not_found:
      return "not_found";
    case ServiceErrorCode::conflict:
      return "conflict";
    case ServiceErrorCode::study_full:
      return "study_full";
    case ServiceErrorCode::study_closed:
      return "study_closed";
    case ServiceErrorCode::session_done:
      return "session_completed";
  }
  return "error";
}

int http_status(ServiceErrorCode c) noexcept {
  switch (c) {
    case ServiceErrorCode::validation:
      return 422;
    case ServiceErrorCode::not_found:
      return 404;
    default:
      return 409;
  }
}

namespace {

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex_id(std::string_view prefix, std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return std::string(prefix) + buf;
}

json demographics_to_json(const Demographics& d) {
  json j = json::object();
  if (d.age) j["age"] = *d.age;
  if (d.gender) j["gender"] = *d.gender;
  if (d.education) j["education"] = *d.education;
  if (d.native_speaker) j["native_speaker"] = *d.native_speaker;
  return j;
}

Demographics demographics_from_json(const json& j) {
  Demographics d;
  if (j.contains("age") && !j["age"].is_null()) d.age = j["age"].get<int>();
  if (j.contains("gender") && !j["gender"].is_null()) d.gender = j["gender"].get<std::string>();
  if (j.contains("education") && !j["education"].is_null())
    d.education = j["education"].get<std::string>();
  if (j.contains("native_speaker") && !j["native_speaker"].is_null())
    d.native_speaker = j["native_speaker"].get<bool>();
  return d;
}

ServiceError not_found(const std::string& what, const std::string& id) {
  return ServiceError(ServiceErrorCode::not_found, what + " " + id + " not found");
}

}  // namespace

struct StudyState {
  std::string id;
  std::optional<std::string> idempotency_key;
  std::size_t tuples_per_batch = 0;
  StudyDesign design;
  std::vector<Batch> batches;
  std::map<std::string, std::string> wire_to_tuple;
  std::map<std::string, std::string> tuple_to_wire;
  std::map<std::string, const TupleItem*, std::less<>> tuples;
  std::vector<int> assigned;
  std::map<std::string, Session> sessions;
  std::map<std::string, std::string> by_annotator;
  std::vector<Judgment> judgments;
  bool open = true;
  std::ofstream log;
  mutable std::shared_mutex mu;

  void init(const StudyDesign& d, std::size_t tpb) {
    design = d;
    tuples_per_batch = tpb;
    batches = batch_design(design, tpb);
    assigned.assign(batches.size(), 0);
    for (const auto& block : design.blocks)
      for (const auto& t : block.tuples) {
        tuples.emplace(t.tuple_id, &t);
        std::string wire = hex_id("q", fnv1a(t.tuple_id, fnv1a(id + "/")));
        wire_to_tuple.emplace(wire, t.tuple_id);
        tuple_to_wire.emplace(t.tuple_id, std::move(wire));
      }
  }

  const TupleItem* tuple(std::string_view tuple_id) const {
    auto it = tuples.find(tuple_id);
    return it == tuples.end() ? nullptr : it->second;
  }

  std::size_t batch_index(const std::string& batch_id) const {
    for (std::size_t i = 0; i < batches.size(); ++i)
      if (batches[i].batch_id == batch_id) return i;
    throw Error("unknown batch " + batch_id + " in study " + id);
  }

  void append(const json& event) {
    if (!log.is_open()) return;
    log << event.dump() << '\n';
    log.flush();
    if (!log) throw Error("cannot write log for study " + id);
  }

  void apply_session(Session s) {
    ++assigned[batch_index(s.batch_id)];
    by_annotator.emplace(s.annotator_id, s.session_id);
    sessions.emplace(s.session_id, std::move(s));
  }

  void apply_judgment(Session& s, Judgment j) {
    judgments.push_back(std::move(j));
    ++s.cursor;
    s.completed = s.cursor == s.batch_length;
  }
};

struct StudyService::Impl {
  ServiceOptions opts;
  mutable std::shared_mutex mu;
  std::map<std::string, std::unique_ptr<StudyState>> studies;
  std::map<std::string, std::string> by_key;
  std::map<std::string, std::string> session_index;

  StudyState& study(const std::string& id) const {
    std::shared_lock lock(mu);
    auto it = studies.find(id);
    if (it == studies.end()) throw not_found("study", id);
    return *it->second;
  }

  StudyState& study_of_session(const std::string& session_id) const {
    std::shared_lock lock(mu);
    auto it = session_index.find(session_id);
    if (it == session_index.end()) throw not_found("session", session_id);
    return *studies.at(it->second);
  }

  Timestamp now() const {
    if (opts.clock) return opts.clock();
    return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  }

  std::filesystem::path log_path(const std::string& id) const {
    return opts.data_dir / (id + ".jsonl");
  }

  void replay(const std::filesystem::path& path);
};

void StudyService::Impl::replay(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) lines.push_back(line);
  auto st = std::make_unique<StudyState>();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    json ev;
    try {
      ev = json::parse(lines[i]);
    } catch (const json::parse_error&) {
      // a torn final write is dropped; anything earlier is corruption
      if (i + 1 == lines.size()) break;
      throw ParseError(path.string(), i + 1, "unreadable log entry");
    }
    try {
      const auto type = ev.at("type").get<std::string>();
      if (i == 0 && type != "study") throw ParseError(path.string(), 1, "log must start with a study");
      if (type == "study") {
        st->id = ev.at("study_id").get<std::string>();
        if (ev.contains("idempotency_key")) st->idempotency_key = ev["idempotency_key"].get<std::string>();
        st->init(design_from_json(ev.at("design").dump()), ev.at("tuples_per_batch").get<std::size_t>());
      } else if (type == "session") {
        Session s;
        s.session_id = ev.at("session_id").get<std::string>();
        s.study_id = st->id;
        s.annotator_id = ev.at("annotator_id").get<std::string>();
        if (ev.contains("demographics")) s.demographics = demographics_from_json(ev["demographics"]);
        s.batch_id = ev.at("batch_id").get<std::string>();
        s.batch_length = st->batches.at(st->batch_index(s.batch_id)).tuple_ids.size();
        st->apply_session(std::move(s));
      } else if (type == "judgment") {
        auto it = st->sessions.find(ev.at("session_id").get<std::string>());
        if (it == st->sessions.end()) throw ParseError(path.string(), i + 1, "unknown session");
        Judgment j;
        j.annotator_id = it->second.annotator_id;
        j.tuple_id = ev.at("tuple_id").get<std::string>();
        const TupleItem* t = st->tuple(j.tuple_id);
        if (!t) throw ParseError(path.string(), i + 1, "unknown tuple " + j.tuple_id);
        j.emotion = t->emotion;
        j.best = ev.at("best").get<std::string>();
        j.worst = ev.at("worst").get<std::string>();
        auto ts = parse_timestamp(ev.at("timestamp").get<std::string>());
        if (!ts) throw ParseError(path.string(), i + 1, "bad timestamp");
        j.timestamp = *ts;
        st->apply_judgment(it->second, std::move(j));
      } else if (type == "close") {
        st->open = false;
      } else {
        throw ParseError(path.string(), i + 1, "unknown event type '" + type + "'");
      }
    } catch (const json::exception& e) {
      throw ParseError(path.string(), i + 1, e.what());
    }
  }
  if (st->id.empty()) return;
  st->log.open(path, std::ios::app);
  for (const auto& [sid, s] : st->sessions) session_index.emplace(sid, st->id);
  if (st->idempotency_key) by_key.emplace(*st->idempotency_key, st->id);
  const std::string id = st->id;
  studies.emplace(id, std::move(st));
}

StudyService::StudyService(ServiceOptions options) : impl_(std::make_unique<Impl>()) {
  impl_->opts = std::move(options);
  const auto& dir = impl_->opts.data_dir;
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> logs;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") logs.push_back(entry.path());
  std::sort(logs.begin(), logs.end());
  for (const auto& p : logs) impl_->replay(p);
}

StudyService::~StudyService() = default;

std::string StudyService::create_study(const StudyDesign& design, const CreateOptions& options) {
  try {
    validate_design(design);
  } catch (const ValidationError& e) {
    throw ServiceError(ServiceErrorCode::validation, e.what(), e.field());
  }
  if (options.tuples_per_batch < 1)
    throw ServiceError(ServiceErrorCode::validation, "tuples_per_batch must be >= 1",
                       "tuples_per_batch");

  std::unique_lock lock(impl_->mu);
  if (options.idempotency_key) {
    auto it = impl_->by_key.find(*options.idempotency_key);
    if (it != impl_->by_key.end()) {
      const StudyState& existing = *impl_->studies.at(it->second);
      if (existing.design != design || existing.tuples_per_batch != options.tuples_per_batch)
        throw ServiceError(ServiceErrorCode::conflict,
                           "idempotency key already used for a different study",
                           "idempotency_key");
      return it->second;
    }
  }

  auto st = std::make_unique<StudyState>();
  for (std::uint64_t attempt = 0;; ++attempt) {
    auto rng = detail::make_rng({impl_->opts.seed, 0x57D1ull, impl_->studies.size(), attempt});
    st->id = hex_id("st-", rng());
    if (!impl_->studies.count(st->id)) break;
  }
  st->idempotency_key = options.idempotency_key;
  st->init(design, options.tuples_per_batch);

  if (!impl_->opts.data_dir.empty()) {
    st->log.open(impl_->log_path(st->id), std::ios::out | std::ios::trunc);
    if (!st->log) throw Error("cannot create log for study " + st->id);
    json ev{{"type", "study"},
            {"study_id", st->id},
            {"tuples_per_batch", options.tuples_per_batch},
            {"design", json::parse(design_to_json(design))}};
    if (options.idempotency_key) ev["idempotency_key"] = *options.idempotency_key;
    st->append(ev);
  }
  if (options.idempotency_key) impl_->by_key.emplace(*options.idempotency_key, st->id);
  const std::string id = st->id;
  impl_->studies.emplace(id, std::move(st));
  return id;
}

Session StudyService::open_session(const std::string& study_id, const std::string& annotator_id,
                                   const std::optional<Demographics>& demographics) {
  if (annotator_id.empty())
    throw ServiceError(ServiceErrorCode::validation, "annotator_id must not be empty",
                       "annotator_id");
  StudyState& st = impl_->study(study_id);
  std::unique_lock lock(st.mu);
  if (!st.open) throw ServiceError(ServiceErrorCode::study_closed, "study " + study_id + " is closed");
  if (auto it = st.by_annotator.find(annotator_id); it != st.by_annotator.end())
    return st.sessions.at(it->second);

  const int slots = st.design.annotators_per_tuple;
  std::optional<std::size_t> pick;
  for (std::size_t i = 0; i < st.batches.size(); ++i) {
    if (st.assigned[i] >= slots) continue;
    if (!pick || st.assigned[i] < st.assigned[*pick]) pick = i;
  }
  if (!pick) throw ServiceError(ServiceErrorCode::study_full, "study " + study_id + " is complete");

  Session s;
  for (std::uint64_t attempt = 0;; ++attempt) {
    auto rng = detail::make_rng(
        {impl_->opts.seed, 0x5E55ull, fnv1a(study_id), st.sessions.size(), attempt});
    s.session_id = hex_id("se-", rng());
    std::shared_lock reg(impl_->mu);
    if (!impl_->session_index.count(s.session_id)) break;
  }
  s.study_id = study_id;
  s.annotator_id = annotator_id;
  s.demographics = demographics;
  s.batch_id = st.batches[*pick].batch_id;
  s.batch_length = st.batches[*pick].tuple_ids.size();

  json ev{{"type", "session"},
          {"session_id", s.session_id},
          {"annotator_id", annotator_id},
          {"batch_id", s.batch_id}};
  if (demographics) ev["demographics"] = demographics_to_json(*demographics);
  st.append(ev);
  st.apply_session(s);
  {
    std::unique_lock reg(impl_->mu);
    impl_->session_index.emplace(s.session_id, study_id);
  }
  return s;
}

Session StudyService::session(const std::string& session_id) const {
  StudyState& st = impl_->study_of_session(session_id);
  std::shared_lock lock(st.mu);
  return st.sessions.at(session_id);
}

std::optional<Presentation> StudyService::next_tuple(const std::string& session_id) const {
  StudyState& st = impl_->study_of_session(session_id);
  std::shared_lock lock(st.mu);
  const Session& s = st.sessions.at(session_id);
  if (s.completed) return std::nullopt;
  const Batch& b = st.batches[st.batch_index(s.batch_id)];
  const TupleItem* t = st.tuple(b.tuple_ids[s.cursor]);
  Presentation p;
  p.tuple_id = st.tuple_to_wire.at(t->tuple_id);
  p.emotion = t->emotion;
  p.words = t->words;
  p.index = s.cursor;
  p.total = s.batch_length;
  return p;
}

SubmitAck StudyService::submit_judgment(const std::string& session_id, const std::string& tuple_id,
                                        const WordId& best, const WordId& worst) {
  StudyState& st = impl_->study_of_session(session_id);
  std::unique_lock lock(st.mu);
  if (!st.open) throw ServiceError(ServiceErrorCode::study_closed, "study " + st.id + " is closed");
  Session& s = st.sessions.at(session_id);
  if (s.completed)
    throw ServiceError(ServiceErrorCode::session_done, "session " + session_id + " is completed");
  const Batch& b = st.batches[st.batch_index(s.batch_id)];
  const std::string& current = b.tuple_ids[s.cursor];
  if (tuple_id != st.tuple_to_wire.at(current))
    throw ServiceError(ServiceErrorCode::conflict, "tuple " + tuple_id + " is not the current tuple",
                       "tuple_id");
  const TupleItem& t = *st.tuple(current);
  if (best == worst) throw ServiceError(ServiceErrorCode::validation, "equal choice", "worst");
  if (!t.contains(best))
    throw ServiceError(ServiceErrorCode::validation, "best '" + best + "' is not in the tuple", "best");
  if (!t.contains(worst))
    throw ServiceError(ServiceErrorCode::validation, "worst '" + worst + "' is not in the tuple",
                       "worst");

  Judgment j{s.annotator_id, current, t.emotion, best, worst, impl_->now()};
  st.append({{"type", "judgment"},
             {"session_id", session_id},
             {"tuple_id", current},
             {"best", best},
             {"worst", worst},
             {"timestamp", format_timestamp(j.timestamp)}});
  st.apply_judgment(s, std::move(j));
  return SubmitAck{s.cursor, s.batch_length, s.completed};
}

std::string StudyService::export_study(const std::string& study_id, bool filtered) const {
  const StudyState& st = impl_->study(study_id);
  std::vector<Judgment> rows;
  {
    std::shared_lock lock(st.mu);
    rows = filtered ? filter_annotators(st.judgments, st.design).kept : st.judgments;
  }
  sort_judgments(rows);
  std::ostringstream out;
  write_judgments(out, rows, filtered ? nullptr : &st.design);
  return out.str();
}

StudyStatus StudyService::status(const std::string& study_id) const {
  const StudyState& st = impl_->study(study_id);
  std::shared_lock lock(st.mu);
  StudyStatus out;
  out.study_id = st.id;
  out.open = st.open;
  out.sessions = st.sessions.size();
  out.judgments = st.judgments.size();
  const int slots = st.design.annotators_per_tuple;
  for (std::size_t i = 0; i < st.batches.size(); ++i) {
    BatchStatus b;
    b.batch_id = st.batches[i].batch_id;
    b.emotion = st.batches[i].emotion;
    b.tuples = st.batches[i].tuple_ids.size();
    b.assigned = st.assigned[i];
    b.slots = slots;
    for (const auto& [sid, s] : st.sessions)
      if (s.batch_id == b.batch_id && s.completed) ++b.completed;
    out.free_slots += slots - b.assigned;
    out.batches.push_back(std::move(b));
  }
  return out;
}

void StudyService::close_study(const std::string& study_id) {
  StudyState& st = impl_->study(study_id);
  std::unique_lock lock(st.mu);
  if (!st.open) return;
  st.append({{"type", "close"}});
  st.open = false;
}

std::vector<std::string> StudyService::study_ids() const {
  std::shared_lock lock(impl_->mu);
  std::vector<std::string> out;
  for (const auto& [id, st] : impl_->studies) out.push_back(id);
  return out;
}

const StudyDesign& StudyService::design(const std::string& study_id) const {
  return impl_->study(study_id).design;
}

}  // namespace bwslex
