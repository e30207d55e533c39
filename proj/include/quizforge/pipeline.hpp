#ifndef QUIZFORGE_PIPELINE_HPP
#define QUIZFORGE_PIPELINE_HPP

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "quizforge/error.hpp"
#include "quizforge/hash.hpp"
#include "quizforge/stemmer.hpp"
#include "quizforge/stopwords.hpp"
#include "quizforge/utf8.hpp"

namespace quizforge {

/// Question stems mark the removed keyword with this token.
inline constexpr std::string_view kBlank = "_____";

struct RawMaterial {
  std::string id;
  std::string title;
  std::string body;
};

/// Validates a lesson text and assigns its content id.
inline RawMaterial make_material(std::string title, std::string body) {
  if (utf8::trim(body).empty()) throw Error(ErrorCode::EmptyMaterial, "material body is empty");
  if (body.find(kBlank) != std::string::npos)
    throw Error(ErrorCode::ReservedToken, "material text contains the blank marker \"_____\"");
  RawMaterial m{material_id(title, body), std::move(title), std::move(body)};
  return m;
}

struct Token {
  std::string surface;
  std::string normal;
  std::string stem;
  std::size_t position = 0;  // token ordinal in the sentence
  std::size_t offset = 0;    // byte offset of surface in the sentence text
  bool is_stopword = false;

  bool operator==(const Token&) const = default;
};

struct Sentence {
  std::size_t index = 0;         // ordinal in the corpus
  std::size_t source_index = 0;  // ordinal before short-sentence filtering
  std::string surface;
  std::vector<Token> tokens;

  std::size_t word_count() const { return tokens.size(); }
};

struct CorpusStats {
  std::size_t n_sentences = 0;
  std::size_t n_words = 0;
  std::size_t min_len = 0;
  std::size_t max_len = 0;
  double mean_len = 0.0;
};

struct Corpus {
  std::string material_id;
  std::vector<Sentence> documents;
  CorpusStats stats;  // over every split sentence, before filtering
};

struct PipelineOptions {
  StopWords stopwords = StopWords::english();
  std::size_t min_sentence_len = 5;
};

/// Maximal runs of word characters. Everything else, hyphens and apostrophes
/// included, separates tokens and is dropped.
inline std::vector<Token> tokenize(std::string_view text, const StopWords& stopwords) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    auto d = utf8::decode(text, i);
    if (!utf8::is_word_char(d.cp)) {
      i += d.length;
      continue;
    }
    const std::size_t start = i;
    while (i < text.size()) {
      d = utf8::decode(text, i);
      if (!utf8::is_word_char(d.cp)) break;
      i += d.length;
    }
    Token t;
    t.surface = std::string(text.substr(start, i - start));
    t.normal = utf8::to_lower(t.surface);
    t.stem = quizforge::stem(t.normal);
    t.position = tokens.size();
    t.offset = start;
    t.is_stopword = stopwords.contains(t.normal);
    tokens.push_back(std::move(t));
  }
  return tokens;
}

inline std::vector<Token> remove_noise(const std::vector<Token>& tokens) {
  std::vector<Token> kept;
  kept.reserve(tokens.size());
  std::copy_if(tokens.begin(), tokens.end(), std::back_inserter(kept),
               [](const Token& t) { return !t.is_stopword; });
  return kept;
}

namespace detail {

inline bool is_terminal(char32_t cp) { return cp == '.' || cp == '!' || cp == '?'; }

inline bool is_closing(char32_t cp) {
  return cp == '"' || cp == '\'' || cp == ')' || cp == ']' || cp == 0x201D || cp == 0x2019;
}

// Collapses every whitespace run to one space and trims the ends.
inline std::string squeeze_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (std::size_t i = 0; i < s.size();) {
    const auto d = utf8::decode(s, i);
    if (utf8::is_space(d.cp)) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.append(s.substr(i, d.length));
    }
    i += d.length;
  }
  return out;
}

}  // namespace detail

/// Splits at '.', '!' or '?' (plus any closing quotes or brackets) followed by
/// whitespace, at blank lines, and at end of text. No abbreviation handling.
/// Fragments without a single word character are dropped.
inline std::vector<Sentence> split_sentences(const RawMaterial& material, const StopWords& stopwords) {
  const std::string_view body = material.body;
  if (utf8::trim(body).empty()) throw Error(ErrorCode::EmptyMaterial, "material body is empty");

  std::vector<Sentence> sentences;
  auto emit = [&](std::size_t from, std::size_t to) {
    std::string surface = detail::squeeze_whitespace(body.substr(from, to - from));
    if (surface.empty()) return;
    auto tokens = tokenize(surface, stopwords);
    if (tokens.empty()) return;
    Sentence s;
    s.index = sentences.size();
    s.source_index = s.index;
    s.surface = std::move(surface);
    s.tokens = std::move(tokens);
    sentences.push_back(std::move(s));
  };

  std::size_t start = 0;
  std::size_t i = 0;
  while (i < body.size()) {
    const auto d = utf8::decode(body, i);
    if (detail::is_terminal(d.cp)) {
      std::size_t end = i + d.length;
      while (end < body.size()) {
        const auto next = utf8::decode(body, end);
        if (!detail::is_terminal(next.cp) && !detail::is_closing(next.cp)) break;
        end += next.length;
      }
      if (end == body.size() || utf8::is_space(utf8::decode(body, end).cp)) {
        emit(start, end);
        start = end;
      }
      i = end;
      continue;
    }
    if (d.cp == '\n') {
      // blank line: newline, optional horizontal space, newline
      std::size_t j = i + 1;
      while (j < body.size() && (body[j] == ' ' || body[j] == '\t' || body[j] == '\r')) ++j;
      if (j < body.size() && body[j] == '\n') {
        emit(start, i);
        start = j + 1;
        i = j + 1;
        continue;
      }
    }
    i += d.length;
  }
  emit(start, body.size());
  return sentences;
}

/// Keeps sentences with at least `min_len` words (counted before stop-word
/// removal) and renumbers them; `source_index` keeps the original ordinal.
inline std::vector<Sentence> filter_short_sentences(std::vector<Sentence> sentences, std::size_t min_len) {
  if (min_len < 1) throw Error(ErrorCode::InvalidArgument, "min_sentence_len must be >= 1");
  std::vector<Sentence> kept;
  kept.reserve(sentences.size());
  for (auto& s : sentences) {
    if (s.word_count() < min_len) continue;
    s.index = kept.size();
    kept.push_back(std::move(s));
  }
  if (kept.empty()) throw Error(ErrorCode::EmptyCorpus, "no sentence has at least " + std::to_string(min_len) + " words");
  return kept;
}

inline CorpusStats corpus_stats(const std::vector<Sentence>& sentences) {
  if (sentences.empty()) throw Error(ErrorCode::EmptyCorpus, "no sentences");
  CorpusStats st;
  st.n_sentences = sentences.size();
  st.min_len = sentences.front().word_count();
  st.max_len = st.min_len;
  for (const auto& s : sentences) {
    const auto n = s.word_count();
    st.n_words += n;
    st.min_len = std::min(st.min_len, n);
    st.max_len = std::max(st.max_len, n);
  }
  st.mean_len = static_cast<double>(st.n_words) / static_cast<double>(st.n_sentences);
  return st;
}

/// "sentences 2 words 16 min 6 max 10 mean 8.0"
inline std::string format_stats(const CorpusStats& st) {
  char mean[32];
  std::snprintf(mean, sizeof mean, "%.1f", st.mean_len);
  return "sentences " + std::to_string(st.n_sentences) + " words " + std::to_string(st.n_words) + " min " +
         std::to_string(st.min_len) + " max " + std::to_string(st.max_len) + " mean " + mean;
}

inline Corpus build_corpus(const RawMaterial& material, const PipelineOptions& options = {}) {
  auto sentences = split_sentences(material, options.stopwords);
  if (sentences.empty()) throw Error(ErrorCode::EmptyCorpus, "material contains no words");
  Corpus corpus;
  corpus.material_id = material.id;
  corpus.stats = corpus_stats(sentences);
  corpus.documents = filter_short_sentences(std::move(sentences), options.min_sentence_len);
  return corpus;
}

/// Matching key of a free-text keyword: token stems joined by single spaces.
/// Used for gold keywords, which teachers write as surface words.
inline std::string keyword_key(std::string_view text) {
  std::string key;
  for (const auto& t : tokenize(text, StopWords{})) {
    if (!key.empty()) key.push_back(' ');
    key += t.stem;
  }
  return key;
}

}  // namespace quizforge

#endif
