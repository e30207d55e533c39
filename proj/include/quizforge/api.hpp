#ifndef QUIZFORGE_API_HPP
#define QUIZFORGE_API_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quizforge/error.hpp"
#include "quizforge/hash.hpp"
#include "quizforge/io.hpp"
#include "quizforge/mcq.hpp"
#include "quizforge/metrics.hpp"
#include "quizforge/pipeline.hpp"
#include "quizforge/termweight.hpp"

namespace quizforge {

struct GenerateRequest {
  std::size_t n = 1;
  std::size_t top_k = 5;
  std::optional<std::uint64_t> seed;  // defaults to one derived from the material id
  std::optional<std::size_t> max_questions;

  void validate() const {
    if (n < 1) throw Error(ErrorCode::InvalidGramSize, "n must be >= 1");
    if (top_k < 1) throw Error(ErrorCode::InvalidArgument, "top_k must be >= 1");
    if (max_questions && *max_questions < 1) throw Error(ErrorCode::InvalidArgument, "max_questions must be >= 1");
  }
};

/// Accepts an empty body or an object with any of n, top_k, seed,
/// max_questions. material_id, when present, must match the path.
inline GenerateRequest generate_request_from_json(const Json& j, const std::string& material_id) {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); };
  GenerateRequest r;
  if (j.is_null()) return r;
  if (!j.is_object()) bad("request body must be a JSON object");
  auto count = [&](const char* key) -> std::optional<std::uint64_t> {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    if (!j[key].is_number_unsigned()) bad(std::string(key) + " must be a non-negative integer");
    return j[key].get<std::uint64_t>();
  };
  if (j.contains("material_id") && !j["material_id"].is_null() &&
      (!j["material_id"].is_string() || j["material_id"].get<std::string>() != material_id))
    bad("material_id does not match the request path");
  if (auto v = count("n")) r.n = *v;
  if (auto v = count("top_k")) r.top_k = *v;
  r.seed = count("seed");
  if (auto v = count("max_questions")) r.max_questions = *v;
  r.validate();
  return r;
}

/// The operations shared by the CLI and the HTTP service. Both front ends go
/// through here so identical inputs give identical bytes.
class Engine {
 public:
  explicit Engine(PipelineOptions options = {}) : options_(std::move(options)) {}

  const PipelineOptions& options() const { return options_; }

  Corpus corpus(const RawMaterial& material) const { return build_corpus(material, options_); }

  CorpusStats stats(const RawMaterial& material) const {
    const auto sentences = split_sentences(material, options_.stopwords);
    return corpus_stats(sentences);
  }

  KeywordSet extract(const RawMaterial& material, const ExtractOptions& extract) const {
    return extract_keywords(corpus(material), extract);
  }

  std::vector<Mcq> generate(const RawMaterial& material, const GenerateRequest& request) const {
    request.validate();
    const auto c = corpus(material);
    const auto keywords = extract_keywords(c, ExtractOptions{request.n, request.top_k});
    GenerateOptions gen;
    gen.seed = request.seed.value_or(seed_from_material_id(material.id));
    gen.max_questions = request.max_questions;
    return generate_mcqs(keywords, c, gen);
  }

  EvalReport evaluate(const RawMaterial& material, const GoldSet& gold, const ExtractOptions& extract) const {
    return quizforge::evaluate(gold, extracted_set(this->extract(material, extract)));
  }

 private:
  PipelineOptions options_;
};

/// HTTP status for each named error.
inline int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotFound: return 404;
    case ErrorCode::AlreadyReviewed: return 409;
    case ErrorCode::UnsupportedMediaType: return 415;
    case ErrorCode::Storage: return 500;
    case ErrorCode::EmptyMaterial:
    case ErrorCode::ReservedToken:
    case ErrorCode::EmptyCorpus:
    case ErrorCode::ZeroDenominator:
    case ErrorCode::UnknownTerm:
    case ErrorCode::InvalidGramSize:
    case ErrorCode::InvalidArgument:
    case ErrorCode::StaleKeyword:
    case ErrorCode::InsufficientKeywords:
    case ErrorCode::MaterialMismatch:
    case ErrorCode::EmptyTruthset:
    case ErrorCode::NothingAccepted:
    case ErrorCode::InvalidDocument: return 400;
  }
  return 500;
}

inline Json error_json(const Error& e) {
  Json j;
  j["error"] = std::string(e.name());
  j["message"] = e.what();
  return j;
}

}  // namespace quizforge

#endif
