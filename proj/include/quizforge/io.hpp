#ifndef QUIZFORGE_IO_HPP
#define QUIZFORGE_IO_HPP

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "quizforge/error.hpp"
#include "quizforge/mcq.hpp"
#include "quizforge/metrics.hpp"
#include "quizforge/pipeline.hpp"
#include "quizforge/termweight.hpp"

namespace quizforge {

using Json = nlohmann::ordered_json;

/// Pretty-printed with a trailing newline; the single rendering used by every
/// output path so CLI and HTTP bytes agree.
inline std::string render(const Json& j) { return j.dump(2) + "\n"; }

inline Json to_json(const WeightedTerm& w) {
  Json j;
  j["term"] = w.term.text;
  j["doc_index"] = w.doc_index;
  j["tf"] = w.tf;
  j["idf"] = w.idf;
  j["weight"] = w.weight;
  j["positions"] = w.positions;
  return j;
}

inline Json to_json(const KeywordSet& set) {
  Json arr = Json::array();
  for (const auto& w : set.keywords) arr.push_back(to_json(w));
  return arr;
}

inline Json to_json(const CorpusStats& st) {
  Json j;
  j["n_sentences"] = st.n_sentences;
  j["n_words"] = st.n_words;
  j["min_len"] = st.min_len;
  j["max_len"] = st.max_len;
  j["mean_len"] = st.mean_len;
  return j;
}

inline Json to_json(const Mcq& q) {
  Json j;
  j["id"] = q.id;
  j["material_id"] = q.material_id;
  j["doc_index"] = q.doc_index;
  j["stem"] = q.stem;
  j["options"] = q.options;
  j["answer"] = q.answer;
  j["keyword_position"] = q.keyword_position;
  j["status"] = std::string(status_name(q.status));
  j["seed"] = q.seed;
  return j;
}

inline Json to_json(const std::vector<Mcq>& qs) {
  Json arr = Json::array();
  for (const auto& q : qs) arr.push_back(to_json(q));
  return arr;
}

inline Json to_json(const EvalReport& r) {
  Json j;
  j["material_id"] = r.material_id;
  j["tp"] = r.tp;
  j["fp"] = r.fp;
  j["fn"] = r.fn;
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  j["f_measure"] = r.f_measure;
  j["warnings"] = r.warnings;
  return j;
}

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidDocument, what);
}

}  // namespace detail

/// Checks one question-set object against the Mcq schema and the question
/// invariants that can be seen without the source sentence.
inline Mcq mcq_from_json(const Json& j) {
  using detail::require;
  require(j.is_object(), "question must be an object");
  for (const char* key : {"id", "material_id", "doc_index", "stem", "options", "answer", "keyword_position", "status", "seed"})
    require(j.contains(key), std::string("question lacks \"") + key + "\"");
  require(j["id"].is_string() && !j["id"].get<std::string>().empty(), "id must be a non-empty string");
  require(j["material_id"].is_string(), "material_id must be a string");
  require(j["doc_index"].is_number_unsigned(), "doc_index must be a non-negative integer");
  require(j["stem"].is_string(), "stem must be a string");
  require(j["options"].is_array() && j["options"].size() == 4, "options must be an array of 4");
  for (const auto& o : j["options"]) require(o.is_string(), "options must be strings");
  require(j["answer"].is_string(), "answer must be a string");
  require(j["keyword_position"].is_number_unsigned(), "keyword_position must be a non-negative integer");
  require(j["status"].is_string(), "status must be a string");
  require(j["seed"].is_number_unsigned(), "seed must be a non-negative integer");

  Mcq q;
  q.id = j["id"].get<std::string>();
  q.material_id = j["material_id"].get<std::string>();
  q.doc_index = j["doc_index"].get<std::size_t>();
  q.stem = j["stem"].get<std::string>();
  for (std::size_t i = 0; i < 4; ++i) q.options[i] = j["options"][i].get<std::string>();
  q.answer = j["answer"].get<std::string>();
  q.keyword_position = j["keyword_position"].get<std::size_t>();
  try {
    q.status = parse_status(j["status"].get<std::string>());
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidDocument, e.what());
  }
  q.seed = j["seed"].get<std::uint64_t>();

  require(count_occurrences(q.stem, kBlank) == 1, "stem must contain the blank exactly once");
  require(std::set<std::string>(q.options.begin(), q.options.end()).size() == 4, "options must be distinct");
  require(std::find(q.options.begin(), q.options.end(), q.answer) != q.options.end(), "answer must be one of the options");
  return q;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace quizforge

#endif
