#ifndef QUIZFORGE_BANK_HPP
#define QUIZFORGE_BANK_HPP

#include <sqlite3.h>

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "quizforge/error.hpp"
#include "quizforge/io.hpp"
#include "quizforge/mcq.hpp"
#include "quizforge/pipeline.hpp"

namespace quizforge {

/// Exam scoping of a bank entry. Only `subject` is required.
struct ExamMeta {
  std::optional<std::string> session;
  std::optional<std::string> class_level;
  std::optional<std::string> term;
  std::string subject;

  bool operator==(const ExamMeta&) const = default;
};

struct BankEntry {
  Mcq mcq;
  ExamMeta exam_meta;
  std::string accepted_at;
};

struct BankFilter {
  std::optional<std::string> subject;
  std::optional<std::string> session;
};

inline Json to_json(const ExamMeta& m) {
  auto opt = [](const std::optional<std::string>& v) { return v ? Json(*v) : Json(nullptr); };
  Json j;
  j["session"] = opt(m.session);
  j["class_level"] = opt(m.class_level);
  j["term"] = opt(m.term);
  j["subject"] = m.subject;
  return j;
}

inline ExamMeta exam_meta_from_json(const Json& j) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); };
  if (!j.is_object()) fail("exam_meta must be an object");
  ExamMeta m;
  auto opt = [&](const char* key, std::optional<std::string>& into) {
    if (!j.contains(key) || j[key].is_null()) return;
    if (!j[key].is_string()) fail(std::string(key) + " must be a string");
    into = j[key].get<std::string>();
  };
  opt("session", m.session);
  opt("class_level", m.class_level);
  opt("term", m.term);
  if (!j.contains("subject") || !j["subject"].is_string() || j["subject"].get<std::string>().empty())
    fail("exam_meta.subject is required");
  m.subject = j["subject"].get<std::string>();
  return m;
}

inline Json to_json(const BankEntry& e) {
  Json j = to_json(e.mcq);
  j["exam_meta"] = to_json(e.exam_meta);
  j["accepted_at"] = e.accepted_at;
  return j;
}

namespace detail {

class Statement {
 public:
  Statement(sqlite3* db, std::string_view sql) : db_(db) {
    if (sqlite3_prepare_v2(db, sql.data(), static_cast<int>(sql.size()), &stmt_, nullptr) != SQLITE_OK)
      throw Error(ErrorCode::Storage, sqlite3_errmsg(db));
  }
  Statement(const Statement&) = delete;
  Statement& operator=(const Statement&) = delete;
  ~Statement() { sqlite3_finalize(stmt_); }

  Statement& bind(int i, std::string_view v) {
    check(sqlite3_bind_text(stmt_, i, v.data(), static_cast<int>(v.size()), SQLITE_TRANSIENT));
    return *this;
  }
  Statement& bind(int i, const std::string& v) { return bind(i, std::string_view(v)); }
  Statement& bind(int i, std::int64_t v) {
    check(sqlite3_bind_int64(stmt_, i, v));
    return *this;
  }
  Statement& bind(int i, const std::optional<std::string>& v) {
    if (v) return bind(i, std::string_view(*v));
    check(sqlite3_bind_null(stmt_, i));
    return *this;
  }

  /// true while a row is available
  bool step() {
    const int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    throw Error(ErrorCode::Storage, sqlite3_errmsg(db_));
  }

  std::string text(int col) const {
    const auto* p = sqlite3_column_text(stmt_, col);
    return p ? std::string(reinterpret_cast<const char*>(p), static_cast<std::size_t>(sqlite3_column_bytes(stmt_, col)))
             : std::string();
  }
  std::optional<std::string> optional_text(int col) const {
    if (sqlite3_column_type(stmt_, col) == SQLITE_NULL) return std::nullopt;
    return text(col);
  }
  std::int64_t integer(int col) const { return sqlite3_column_int64(stmt_, col); }

 private:
  void check(int rc) {
    if (rc != SQLITE_OK) throw Error(ErrorCode::Storage, sqlite3_errmsg(db_));
  }

  sqlite3* db_;
  sqlite3_stmt* stmt_ = nullptr;
};

}  // namespace detail

/// Single-file store of materials, generated questions and the accepted
/// question bank. All calls are serialized on one connection.
class Store {
 public:
  explicit Store(const std::string& path) {
    if (sqlite3_open_v2(path.c_str(), &db_, SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_FULLMUTEX, nullptr) !=
        SQLITE_OK) {
      std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
      sqlite3_close(db_);
      throw Error(ErrorCode::Storage, "cannot open " + path + ": " + msg);
    }
    sqlite3_busy_timeout(db_, 5000);
    exec(R"sql(
      PRAGMA journal_mode=WAL;
      CREATE TABLE IF NOT EXISTS materials(
        id TEXT PRIMARY KEY, title TEXT NOT NULL, body BLOB NOT NULL, created_at TEXT NOT NULL);
      CREATE TABLE IF NOT EXISTS questions(
        id TEXT PRIMARY KEY, material_id TEXT NOT NULL, doc_index INTEGER NOT NULL, stem TEXT NOT NULL,
        options TEXT NOT NULL, answer TEXT NOT NULL, keyword_position INTEGER NOT NULL,
        status TEXT NOT NULL, seed INTEGER NOT NULL, reviewed_at TEXT);
      CREATE INDEX IF NOT EXISTS questions_by_material ON questions(material_id);
      CREATE TABLE IF NOT EXISTS bank(
        question_id TEXT PRIMARY KEY, material_id TEXT NOT NULL, entry TEXT NOT NULL,
        session TEXT, class_level TEXT, term TEXT, subject TEXT NOT NULL, accepted_at TEXT NOT NULL);
    )sql");
  }

  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;
  ~Store() { sqlite3_close(db_); }

  /// Idempotent: the id is the content hash of title and body.
  std::string store_material(const RawMaterial& material) {
    const auto checked = make_material(material.title, material.body);
    std::lock_guard lock(mutex_);
    detail::Statement(db_, "INSERT OR IGNORE INTO materials(id, title, body, created_at) VALUES(?, ?, ?, ?)")
        .bind(1, checked.id)
        .bind(2, checked.title)
        .bind(3, checked.body)
        .bind(4, utc_now_rfc3339())
        .step();
    return checked.id;
  }

  RawMaterial material(const std::string& id) const {
    std::lock_guard lock(mutex_);
    detail::Statement st(db_, "SELECT id, title, body FROM materials WHERE id = ?");
    st.bind(1, id);
    if (!st.step()) throw Error(ErrorCode::NotFound, "no material " + id);
    return RawMaterial{st.text(0), st.text(1), st.text(2)};
  }

  /// Inserts new questions; ones already stored keep their review state.
  /// Returns the stored version of every input question, in input order.
  std::vector<Mcq> save_questions(const std::vector<Mcq>& questions) {
    {
      std::lock_guard lock(mutex_);
      Transaction tx(*this);
      for (const auto& q : questions) insert_question(q);
      tx.commit();
    }
    std::vector<Mcq> out;
    out.reserve(questions.size());
    for (const auto& q : questions) out.push_back(question(q.id));
    return out;
  }

  Mcq question(const std::string& id) const {
    std::lock_guard lock(mutex_);
    detail::Statement st(db_, std::string(kQuestionColumns) + " WHERE id = ?");
    st.bind(1, id);
    if (!st.step()) throw Error(ErrorCode::NotFound, "no question " + id);
    return read_question(st);
  }

  std::vector<Mcq> questions(const std::string& material_id, std::optional<ReviewStatus> status = std::nullopt) const {
    std::lock_guard lock(mutex_);
    require_material(material_id);
    detail::Statement st(db_, std::string(kQuestionColumns) +
                                  " WHERE material_id = ?1 AND (?2 IS NULL OR status = ?2) ORDER BY rowid");
    st.bind(1, material_id);
    st.bind(2, status ? std::optional<std::string>(std::string(status_name(*status))) : std::nullopt);
    std::vector<Mcq> out;
    while (st.step()) out.push_back(read_question(st));
    return out;
  }

  Mcq review(const std::string& id, Decision decision) {
    std::lock_guard lock(mutex_);
    detail::Statement get(db_, std::string(kQuestionColumns) + " WHERE id = ?");
    get.bind(1, id);
    if (!get.step()) throw Error(ErrorCode::NotFound, "no question " + id);
    Mcq q = read_question(get);
    apply_review(q, decision, utc_now_rfc3339());
    detail::Statement(db_, "UPDATE questions SET status = ?, reviewed_at = ? WHERE id = ? AND status = 'suggested'")
        .bind(1, status_name(q.status))
        .bind(2, q.reviewed_at)
        .bind(3, id)
        .step();
    return q;
  }

  /// Files every accepted question of the material under `meta`. Questions
  /// already in the bank keep their original entry.
  std::vector<BankEntry> bank_accepted(const std::string& material_id, const ExamMeta& meta) {
    if (meta.subject.empty()) throw Error(ErrorCode::InvalidArgument, "exam subject is required");
    std::lock_guard lock(mutex_);
    require_material(material_id);
    std::vector<Mcq> accepted;
    {
      detail::Statement st(db_, std::string(kQuestionColumns) +
                                    " WHERE material_id = ? AND status = 'accepted' ORDER BY rowid");
      st.bind(1, material_id);
      while (st.step()) accepted.push_back(read_question(st));
    }
    if (accepted.empty()) throw Error(ErrorCode::NothingAccepted, "material " + material_id + " has no accepted questions");

    Transaction tx(*this);
    for (const auto& q : accepted) insert_entry(BankEntry{q, meta, q.reviewed_at});
    tx.commit();

    std::vector<BankEntry> out;
    detail::Statement st(db_, std::string(kEntryColumns) + " WHERE material_id = ? ORDER BY accepted_at, question_id");
    st.bind(1, material_id);
    while (st.step()) out.push_back(read_entry(st));
    return out;
  }

  /// Ordered by accepted_at, then id.
  std::vector<BankEntry> bank_entries(const BankFilter& filter = {}) const {
    std::lock_guard lock(mutex_);
    detail::Statement st(db_, std::string(kEntryColumns) +
                                  " WHERE (?1 IS NULL OR subject = ?1) AND (?2 IS NULL OR session = ?2)"
                                  " ORDER BY accepted_at, question_id");
    st.bind(1, filter.subject);
    st.bind(2, filter.session);
    std::vector<BankEntry> out;
    while (st.step()) out.push_back(read_entry(st));
    return out;
  }

  std::string export_bank(const BankFilter& filter = {}) const {
    Json arr = Json::array();
    for (const auto& e : bank_entries(filter)) arr.push_back(to_json(e));
    return render(arr);
  }

  /// Loads an exported document. Entries already present are left alone.
  /// Returns the number of entries in the document.
  std::size_t import_bank(std::string_view document) {
    Json doc;
    try {
      doc = Json::parse(document);
    } catch (const Json::parse_error& e) {
      throw Error(ErrorCode::InvalidDocument, e.what());
    }
    if (!doc.is_array()) throw Error(ErrorCode::InvalidDocument, "bank export must be a JSON array");
    std::vector<BankEntry> entries;
    for (const auto& item : doc) {
      BankEntry e;
      e.mcq = mcq_from_json(item);
      if (e.mcq.status != ReviewStatus::Accepted)
        throw Error(ErrorCode::InvalidDocument, "bank entry " + e.mcq.id + " is not accepted");
      if (!item.contains("exam_meta")) throw Error(ErrorCode::InvalidDocument, "bank entry lacks exam_meta");
      try {
        e.exam_meta = exam_meta_from_json(item["exam_meta"]);
      } catch (const Error& err) {
        throw Error(ErrorCode::InvalidDocument, err.what());
      }
      if (!item.contains("accepted_at") || !item["accepted_at"].is_string())
        throw Error(ErrorCode::InvalidDocument, "bank entry lacks accepted_at");
      e.accepted_at = item["accepted_at"].get<std::string>();
      e.mcq.reviewed_at = e.accepted_at;
      entries.push_back(std::move(e));
    }

    std::lock_guard lock(mutex_);
    Transaction tx(*this);
    for (const auto& e : entries) {
      insert_question(e.mcq);
      detail::Statement st(db_, "SELECT status FROM questions WHERE id = ?");
      st.bind(1, e.mcq.id);
      if (st.step() && st.text(0) != "accepted")
        throw Error(ErrorCode::InvalidDocument, "question " + e.mcq.id + " is stored as " + st.text(0));
      insert_entry(e);
    }
    tx.commit();
    return entries.size();
  }

 private:
  static constexpr std::string_view kQuestionColumns =
      "SELECT id, material_id, doc_index, stem, options, answer, keyword_position, status, seed, reviewed_at FROM questions";
  static constexpr std::string_view kEntryColumns =
      "SELECT entry, session, class_level, term, subject, accepted_at FROM bank";

  class Transaction {
   public:
    explicit Transaction(Store& s) : store_(s) { store_.exec("BEGIN IMMEDIATE"); }
    void commit() {
      store_.exec("COMMIT");
      done_ = true;
    }
    ~Transaction() {
      if (!done_) sqlite3_exec(store_.db_, "ROLLBACK", nullptr, nullptr, nullptr);
    }

   private:
    Store& store_;
    bool done_ = false;
  };

  void exec(const char* sql) {
    char* err = nullptr;
    if (sqlite3_exec(db_, sql, nullptr, nullptr, &err) != SQLITE_OK) {
      std::string msg = err ? err : "unknown error";
      sqlite3_free(err);
      throw Error(ErrorCode::Storage, msg);
    }
  }

  void require_material(const std::string& id) const {
    detail::Statement st(db_, "SELECT 1 FROM materials WHERE id = ?");
    st.bind(1, id);
    if (!st.step()) throw Error(ErrorCode::NotFound, "no material " + id);
  }

  void insert_question(const Mcq& q) {
    detail::Statement(db_,
                      "INSERT OR IGNORE INTO questions(id, material_id, doc_index, stem, options, answer,"
                      " keyword_position, status, seed, reviewed_at) VALUES(?, ?, ?, ?, ?, ?, ?, ?, ?, ?)")
        .bind(1, q.id)
        .bind(2, q.material_id)
        .bind(3, static_cast<std::int64_t>(q.doc_index))
        .bind(4, q.stem)
        .bind(5, Json(q.options).dump())
        .bind(6, q.answer)
        .bind(7, static_cast<std::int64_t>(q.keyword_position))
        .bind(8, status_name(q.status))
        .bind(9, static_cast<std::int64_t>(q.seed))
        .bind(10, q.reviewed_at.empty() ? std::nullopt : std::optional<std::string>(q.reviewed_at))
        .step();
  }

  void insert_entry(const BankEntry& e) {
    detail::Statement(db_,
                      "INSERT OR IGNORE INTO bank(question_id, material_id, entry, session, class_level, term,"
                      " subject, accepted_at) VALUES(?, ?, ?, ?, ?, ?, ?, ?)")
        .bind(1, e.mcq.id)
        .bind(2, e.mcq.material_id)
        .bind(3, to_json(e.mcq).dump())
        .bind(4, e.exam_meta.session)
        .bind(5, e.exam_meta.class_level)
        .bind(6, e.exam_meta.term)
        .bind(7, e.exam_meta.subject)
        .bind(8, e.accepted_at)
        .step();
  }

  static Mcq read_question(const detail::Statement& st) {
    Mcq q;
    q.id = st.text(0);
    q.material_id = st.text(1);
    q.doc_index = static_cast<std::size_t>(st.integer(2));
    q.stem = st.text(3);
    const auto options = Json::parse(st.text(4));
    for (std::size_t i = 0; i < 4; ++i) q.options[i] = options.at(i).get<std::string>();
    q.answer = st.text(5);
    q.keyword_position = static_cast<std::size_t>(st.integer(6));
    q.status = parse_status(st.text(7));
    q.seed = static_cast<std::uint64_t>(st.integer(8));
    q.reviewed_at = st.optional_text(9).value_or("");
    return q;
  }

  static BankEntry read_entry(const detail::Statement& st) {
    BankEntry e;
    e.mcq = mcq_from_json(Json::parse(st.text(0)));
    e.exam_meta.session = st.optional_text(1);
    e.exam_meta.class_level = st.optional_text(2);
    e.exam_meta.term = st.optional_text(3);
    e.exam_meta.subject = st.text(4);
    e.accepted_at = st.text(5);
    e.mcq.reviewed_at = e.accepted_at;
    return e;
  }

  sqlite3* db_ = nullptr;
  mutable std::mutex mutex_;
};

}  // namespace quizforge

#endif
