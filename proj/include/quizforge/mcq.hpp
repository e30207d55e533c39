#ifndef QUIZFORGE_MCQ_HPP
#define QUIZFORGE_MCQ_HPP

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "quizforge/error.hpp"
#include "quizforge/hash.hpp"
#include "quizforge/pipeline.hpp"
#include "quizforge/termweight.hpp"

namespace quizforge {

enum class ReviewStatus { Suggested, Accepted, Rejected };
enum class Decision { Accept, Reject };

inline std::string_view status_name(ReviewStatus s) {
  switch (s) {
    case ReviewStatus::Suggested: return "suggested";
    case ReviewStatus::Accepted: return "accepted";
    case ReviewStatus::Rejected: return "rejected";
  }
  return "suggested";
}

inline ReviewStatus parse_status(std::string_view s) {
  if (s == "suggested") return ReviewStatus::Suggested;
  if (s == "accepted") return ReviewStatus::Accepted;
  if (s == "rejected") return ReviewStatus::Rejected;
  throw Error(ErrorCode::InvalidArgument, "unknown status \"" + std::string(s) + "\"");
}

struct Mcq {
  std::string id;
  std::string material_id;
  std::size_t doc_index = 0;
  std::string stem;
  std::array<std::string, 4> options;
  std::string answer;
  std::size_t keyword_position = 0;
  ReviewStatus status = ReviewStatus::Suggested;
  std::uint64_t seed = 0;
  std::string reviewed_at;  // RFC 3339, empty until reviewed

  bool operator==(const Mcq&) const = default;
};

struct GenerateOptions {
  std::uint64_t seed = 0;
  std::optional<std::size_t> max_questions;
};

/// UTC, millisecond precision: 2020-03-01T09:30:00.000Z
inline std::string utc_now_rfc3339() {
  using namespace std::chrono;
  const auto now = system_clock::now();
  const auto ms = duration_cast<milliseconds>(now.time_since_epoch()).count() % 1000;
  const std::time_t t = system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1,
                tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms));
  return buf;
}

/// mt19937_64 is fully specified by the standard; the distributions are not,
/// so bounded draws and shuffles are done here to keep question sets
/// identical across standard libraries.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (true) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % bound;
    }
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

  /// `k` distinct elements of `from`, without replacement.
  template <typename T>
  std::vector<T> sample(std::vector<T> from, std::size_t k) {
    for (std::size_t i = 0; i < k; ++i) std::swap(from[i], from[i + below(from.size() - i)]);
    from.resize(k);
    return from;
  }

 private:
  std::mt19937_64 engine_;
};

/// Every (doc_index, token position) where the keyword's stem key occurs.
inline std::vector<std::pair<std::size_t, std::size_t>> locate_keyword(const WeightedTerm& keyword, const Corpus& corpus) {
  std::vector<std::pair<std::size_t, std::size_t>> found;
  for (const auto& d : corpus.documents)
    for (const auto& g : sentence_grams(d, keyword.term.n))
      if (g.key == keyword.term.key) found.emplace_back(d.index, g.first_position);
  if (found.empty())
    throw Error(ErrorCode::StaleKeyword, "keyword \"" + keyword.term.text + "\" does not occur in material " + corpus.material_id);
  return found;
}

inline std::string question_id(std::uint64_t seed, std::string_view material_id, std::size_t doc_index,
                               std::size_t position, std::string_view key) {
  const std::string buf = std::to_string(seed) + '\x1f' + std::string(material_id) + '\x1f' +
                          std::to_string(doc_index) + '\x1f' + std::to_string(position) + '\x1f' + std::string(key);
  const auto digest = sha256(buf);
  return to_hex(digest.data(), 16);
}

/// One question per extracted keyword occurrence, in reading order. The
/// occurrence is blanked out of its sentence; three distractors are drawn
/// from the rest of the material's keyword pool and the four options are
/// shuffled, all from one RNG stream seeded with `options.seed`.
inline std::vector<Mcq> generate_mcqs(const KeywordSet& keywords, const Corpus& corpus, const GenerateOptions& options) {
  if (keywords.material_id != corpus.material_id)
    throw Error(ErrorCode::StaleKeyword, "keyword set of material " + keywords.material_id +
                                             " used with corpus of material " + corpus.material_id);
  if (options.max_questions && *options.max_questions < 1)
    throw Error(ErrorCode::InvalidArgument, "max_questions must be >= 1");

  std::vector<std::string> pool;
  std::set<std::string> seen;
  for (const auto& k : keywords.keywords)
    if (seen.insert(k.term.key).second) pool.push_back(k.term.key);
  if (pool.size() < 4)
    throw Error(ErrorCode::InsufficientKeywords,
                "keyword pool has " + std::to_string(pool.size()) + " distinct keywords; 4 are needed");

  const std::size_t n = keywords.keywords.front().term.n;
  const TermIndex index(corpus, n);

  struct Slot {
    std::size_t doc_index;
    std::size_t position;
    std::string key;
    bool operator<(const Slot& o) const { return std::tie(doc_index, position, key) < std::tie(o.doc_index, o.position, o.key); }
  };
  std::set<Slot> slots;
  for (const auto& k : keywords.keywords) {
    if (k.term.n != n) throw Error(ErrorCode::InvalidGramSize, "keyword set mixes gram sizes");
    const auto* entry = index.find(k.term.key);
    for (const auto pos : k.positions) {
      const bool present = entry && std::any_of(entry->occurrences.begin(), entry->occurrences.end(),
                                                [&](const TermIndex::Occurrence& o) {
                                                  return o.doc_index == k.doc_index && o.first_position == pos;
                                                });
      if (!present)
        throw Error(ErrorCode::StaleKeyword, "keyword \"" + k.term.text + "\" not found at sentence " +
                                                 std::to_string(k.doc_index) + " position " + std::to_string(pos));
      slots.insert({k.doc_index, pos, k.term.key});
    }
  }

  std::vector<Slot> ordered(slots.begin(), slots.end());
  if (options.max_questions && ordered.size() > *options.max_questions) ordered.resize(*options.max_questions);

  SeededRng rng(options.seed);
  std::vector<Mcq> out;
  out.reserve(ordered.size());
  for (const auto& slot : ordered) {
    const Sentence& sentence = corpus.documents.at(slot.doc_index);
    const auto& occurrences = index.find(slot.key)->occurrences;
    const auto occ = std::find_if(occurrences.begin(), occurrences.end(), [&](const TermIndex::Occurrence& o) {
      return o.doc_index == slot.doc_index && o.first_position == slot.position;
    });
    const Token& first = sentence.tokens.at(occ->first_position);
    const Token& last = sentence.tokens.at(occ->last_position);

    Mcq q;
    q.material_id = corpus.material_id;
    q.doc_index = slot.doc_index;
    q.keyword_position = slot.position;
    q.seed = options.seed;
    q.id = question_id(options.seed, corpus.material_id, slot.doc_index, slot.position, slot.key);
    q.stem = sentence.surface;
    q.stem.replace(first.offset, last.offset + last.surface.size() - first.offset, kBlank);
    q.answer = index.find(slot.key)->surface;

    std::vector<std::string> candidates;
    candidates.reserve(pool.size() - 1);
    for (const auto& key : pool)
      if (key != slot.key) candidates.push_back(key);
    auto choice = rng.sample(std::move(candidates), 3);
    choice.push_back(slot.key);
    rng.shuffle(choice);
    for (std::size_t i = 0; i < 4; ++i) q.options[i] = index.find(choice[i])->surface;
    out.push_back(std::move(q));
  }
  return out;
}

/// suggested -> accepted | rejected; nothing else.
inline void apply_review(Mcq& q, Decision decision, std::string timestamp) {
  if (q.status != ReviewStatus::Suggested)
    throw Error(ErrorCode::AlreadyReviewed, "question " + q.id + " is already " + std::string(status_name(q.status)));
  q.status = decision == Decision::Accept ? ReviewStatus::Accepted : ReviewStatus::Rejected;
  q.reviewed_at = std::move(timestamp);
}

inline std::size_t count_occurrences(std::string_view haystack, std::string_view needle) {
  std::size_t count = 0;
  for (auto pos = haystack.find(needle); pos != std::string_view::npos; pos = haystack.find(needle, pos + needle.size()))
    ++count;
  return count;
}

/// Puts the answer back into the stem.
inline std::string restore_blank(const Mcq& q) {
  std::string s = q.stem;
  if (const auto pos = s.find(kBlank); pos != std::string::npos) s.replace(pos, kBlank.size(), q.answer);
  return s;
}

/// Lists every structural rule the question breaks; empty when well formed.
/// `source` is the sentence the question was cut from.
inline std::vector<std::string> mcq_violations(const Mcq& q, const Sentence& source, const StopWords& stopwords) {
  std::vector<std::string> problems;
  if (count_occurrences(q.stem, kBlank) != 1) problems.push_back("stem must contain exactly one blank");
  if (std::find(q.options.begin(), q.options.end(), q.answer) == q.options.end())
    problems.push_back("answer is not among the options");

  std::set<std::string> exact(q.options.begin(), q.options.end());
  std::set<std::string> keys;
  for (const auto& o : q.options) keys.insert(keyword_key(o));
  if (exact.size() != 4) problems.push_back("options are not pairwise distinct");
  if (keys.size() != 4) problems.push_back("two options share a stem");

  const auto answer_key = keyword_key(q.answer);
  std::size_t same = 0;
  for (const auto& o : q.options)
    if (keyword_key(o) == answer_key) ++same;
  if (same > 1) problems.push_back("a distractor is stem-equivalent to the answer");

  auto content_stems = [](const std::vector<Token>& tokens) {
    std::vector<std::string> out;
    for (const auto& t : tokens)
      if (!t.is_stopword) out.push_back(t.stem);
    return out;
  };
  if (content_stems(tokenize(restore_blank(q), stopwords)) != content_stems(source.tokens))
    problems.push_back("restoring the answer does not reproduce the source sentence");
  const auto it = std::find_if(source.tokens.begin(), source.tokens.end(),
                               [&](const Token& t) { return t.position == q.keyword_position; });
  if (it == source.tokens.end() || it->stem != answer_key.substr(0, answer_key.find(' ')))
    problems.push_back("keyword_position does not hold the answer");
  return problems;
}

}  // namespace quizforge

#endif
