#ifndef QUIZFORGE_TERMWEIGHT_HPP
#define QUIZFORGE_TERMWEIGHT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "quizforge/error.hpp"
#include "quizforge/pipeline.hpp"

namespace quizforge {

/// A unigram or n-gram. `key` joins component stems and is what counts,
/// matches and aggregates; `text` joins normal forms and is what gets shown.
struct Term {
  std::string text;
  std::string key;
  std::size_t n = 1;

  bool operator==(const Term&) const = default;
};

struct WeightedTerm {
  Term term;
  std::size_t doc_index = 0;
  double tf = 0.0;
  double idf = 0.0;
  double weight = 0.0;
  std::vector<std::size_t> positions;  // token position of each occurrence's first word

  bool operator==(const WeightedTerm&) const = default;
};

struct KeywordSet {
  std::string material_id;
  std::vector<WeightedTerm> keywords;
};

struct ExtractOptions {
  std::size_t n = 1;
  std::size_t top_k = 5;
};

/// One n-gram window over the noise-removed tokens of a sentence.
struct GramOccurrence {
  std::string key;
  std::string text;
  std::string surface;          // component surfaces joined by spaces
  std::size_t first_position;   // token positions in the full sentence
  std::size_t last_position;
};

inline void check_gram_size(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidGramSize, "gram size must be >= 1");
}

/// Contiguous windows of `n` tokens. Callers pass noise-removed tokens, so a
/// window may straddle a dropped stop word.
inline std::vector<GramOccurrence> gram_occurrences(const std::vector<Token>& tokens, std::size_t n) {
  check_gram_size(n);
  std::vector<GramOccurrence> out;
  if (tokens.size() < n) return out;
  out.reserve(tokens.size() - n + 1);
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    GramOccurrence g{tokens[i].stem, tokens[i].normal, tokens[i].surface, tokens[i].position,
                     tokens[i + n - 1].position};
    for (std::size_t j = i + 1; j < i + n; ++j) {
      g.key += ' ' + tokens[j].stem;
      g.text += ' ' + tokens[j].normal;
      g.surface += ' ' + tokens[j].surface;
    }
    out.push_back(std::move(g));
  }
  return out;
}

inline std::vector<Term> ngrams(const std::vector<Token>& tokens, std::size_t n) {
  std::vector<Term> out;
  for (auto& g : gram_occurrences(tokens, n)) out.push_back(Term{std::move(g.text), std::move(g.key), n});
  return out;
}

inline std::vector<GramOccurrence> sentence_grams(const Sentence& s, std::size_t n) {
  return gram_occurrences(remove_noise(s.tokens), n);
}

/// Builds a term from free text ("Mechanical", "difference engine").
inline Term make_term(std::string_view text, const StopWords& stopwords = StopWords::english()) {
  const auto tokens = remove_noise(tokenize(text, stopwords));
  if (tokens.empty()) throw Error(ErrorCode::UnknownTerm, "no content word in \"" + std::string(text) + "\"");
  auto grams = ngrams(tokens, tokens.size());
  return grams.front();
}

inline double term_frequency(const Term& t, const Sentence& d) {
  const auto grams = sentence_grams(d, t.n);
  if (grams.empty())
    throw Error(ErrorCode::ZeroDenominator,
                "sentence " + std::to_string(d.index) + " has no " + std::to_string(t.n) + "-gram terms");
  const auto count = std::count_if(grams.begin(), grams.end(), [&](const GramOccurrence& g) { return g.key == t.key; });
  return static_cast<double>(count) / static_cast<double>(grams.size());
}

inline std::size_t document_frequency(const Term& t, const Corpus& corpus) {
  std::size_t df = 0;
  for (const auto& d : corpus.documents) {
    const auto grams = sentence_grams(d, t.n);
    if (std::any_of(grams.begin(), grams.end(), [&](const GramOccurrence& g) { return g.key == t.key; })) ++df;
  }
  return df;
}

inline double idf_from_counts(std::size_t n_documents, std::size_t df) {
  return std::log(static_cast<double>(n_documents) / static_cast<double>(df));
}

/// ln(N / df). Unsmoothed: a term that never occurs is an error, not a weight.
inline double inverse_document_frequency(const Term& t, const Corpus& corpus) {
  if (corpus.documents.empty()) throw Error(ErrorCode::EmptyCorpus, "corpus has no documents");
  const auto df = document_frequency(t, corpus);
  if (df == 0) throw Error(ErrorCode::UnknownTerm, "term \"" + t.text + "\" does not occur in the corpus");
  return idf_from_counts(corpus.documents.size(), df);
}

inline WeightedTerm tfidf(const Term& t, const Sentence& d, const Corpus& corpus) {
  WeightedTerm w;
  w.term = t;
  w.doc_index = d.index;
  w.idf = inverse_document_frequency(t, corpus);
  w.tf = term_frequency(t, d);
  w.weight = w.tf * w.idf;
  for (const auto& g : sentence_grams(d, t.n))
    if (g.key == t.key) w.positions.push_back(g.first_position);
  return w;
}

/// Keyword order: heavier first; among equal weights the more frequent term,
/// then the earlier sentence, then the earlier position, then term text.
inline bool keyword_before(const WeightedTerm& a, const WeightedTerm& b) {
  if (a.weight != b.weight) return a.weight > b.weight;
  if (a.tf != b.tf) return a.tf > b.tf;
  const auto pa = a.positions.empty() ? std::size_t(0) : a.positions.front();
  const auto pb = b.positions.empty() ? std::size_t(0) : b.positions.front();
  return std::tie(a.doc_index, pa, a.term.text) < std::tie(b.doc_index, pb, b.term.text);
}

/// Corpus-wide facts about every n-gram key: document frequency, the forms it
/// is displayed under, and where it occurs.
class TermIndex {
 public:
  struct Occurrence {
    std::size_t doc_index;
    std::size_t first_position;
    std::size_t last_position;
  };

  struct Entry {
    std::size_t df = 0;
    std::string text;     // most frequent normal form
    std::string surface;  // most frequent surface form
    std::vector<Occurrence> occurrences;
  };

  TermIndex(const Corpus& corpus, std::size_t n) : n_(n), n_documents_(corpus.documents.size()) {
    check_gram_size(n);
    // per key: form -> (count, first seen rank)
    using FormCounts = std::map<std::string, std::pair<std::size_t, std::size_t>>;
    std::unordered_map<std::string, std::pair<FormCounts, FormCounts>> forms;
    std::size_t rank = 0;
    for (const auto& d : corpus.documents) {
      for (const auto& g : sentence_grams(d, n)) {
        auto& e = entries_[g.key];
        if (e.occurrences.empty() || e.occurrences.back().doc_index != d.index) ++e.df;
        e.occurrences.push_back({d.index, g.first_position, g.last_position});
        auto& [normals, surfaces] = forms[g.key];
        normals.try_emplace(g.text, 0, rank).first->second.first++;
        surfaces.try_emplace(g.surface, 0, rank).first->second.first++;
        ++rank;
      }
    }
    auto pick = [](const FormCounts& counts) {
      const auto best = std::max_element(counts.begin(), counts.end(), [](const auto& a, const auto& b) {
        if (a.second.first != b.second.first) return a.second.first < b.second.first;
        return a.second.second > b.second.second;
      });
      return best->first;
    };
    for (auto& [key, e] : entries_) {
      e.text = pick(forms[key].first);
      e.surface = pick(forms[key].second);
    }
  }

  std::size_t n() const { return n_; }
  std::size_t n_documents() const { return n_documents_; }

  const Entry* find(const std::string& key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
  }

  const std::unordered_map<std::string, Entry>& entries() const { return entries_; }

 private:
  std::size_t n_;
  std::size_t n_documents_;
  std::unordered_map<std::string, Entry> entries_;
};

/// Per sentence-document, the top_k terms by TF-IDF; the union over the
/// corpus, in keyword order, is the material's keyword set.
inline KeywordSet extract_keywords(const Corpus& corpus, const ExtractOptions& options = {}) {
  check_gram_size(options.n);
  if (options.top_k < 1) throw Error(ErrorCode::InvalidArgument, "top_k must be >= 1");
  if (corpus.documents.empty()) throw Error(ErrorCode::EmptyCorpus, "corpus has no documents");

  const TermIndex index(corpus, options.n);
  KeywordSet out;
  out.material_id = corpus.material_id;

  for (const auto& d : corpus.documents) {
    const auto grams = sentence_grams(d, options.n);
    if (grams.empty()) continue;
    std::vector<WeightedTerm> scored;
    std::unordered_map<std::string, std::size_t> slot;
    for (const auto& g : grams) {
      auto [it, fresh] = slot.try_emplace(g.key, scored.size());
      if (fresh) {
        WeightedTerm w;
        const auto* entry = index.find(g.key);
        w.term = Term{entry->text, g.key, options.n};
        w.doc_index = d.index;
        w.idf = idf_from_counts(index.n_documents(), entry->df);
        scored.push_back(std::move(w));
      }
      scored[it->second].positions.push_back(g.first_position);
    }
    for (auto& w : scored) {
      w.tf = static_cast<double>(w.positions.size()) / static_cast<double>(grams.size());
      w.weight = w.tf * w.idf;
    }
    std::sort(scored.begin(), scored.end(), keyword_before);
    if (scored.size() > options.top_k) scored.resize(options.top_k);
    for (auto& w : scored) out.keywords.push_back(std::move(w));
  }
  std::sort(out.keywords.begin(), out.keywords.end(), keyword_before);
  return out;
}

}  // namespace quizforge

#endif
