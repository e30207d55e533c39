#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "quizforge/io.hpp"
#include "quizforge/mcq.hpp"
#include "test_support.hpp"

using namespace quizforge;

namespace {

const std::string kEngineSentence = "The Difference Engine consisted entirely of mechanical components.";

struct Material {
  Corpus corpus;
  KeywordSet keywords;
};

Material load(const std::string& fixture, std::size_t top_k = 5) {
  Material m;
  m.corpus = build_corpus(test::fixture_material(fixture));
  m.keywords = extract_keywords(m.corpus, {1, top_k});
  return m;
}

Corpus corpus_from(const std::string& text) {
  PipelineOptions options;
  options.min_sentence_len = 1;
  return build_corpus(make_material("t", text), options);
}

}  // namespace

TEST(LocateKeyword, EngineSentenceMechanical) {
  const auto m = load("computing_history.txt");
  const auto it = std::find_if(m.keywords.keywords.begin(), m.keywords.keywords.end(),
                               [](const WeightedTerm& w) { return w.term.text == "mechanical" && w.doc_index == 1; });
  ASSERT_NE(it, m.keywords.keywords.end());
  const auto found = locate_keyword(*it, m.corpus);
  // also in "Modern computers replaced mechanical parts ..."
  ASSERT_EQ(found.size(), 2u);
  EXPECT_EQ(found[0], std::make_pair(std::size_t{1}, std::size_t{6}));
  EXPECT_EQ(m.corpus.documents[1].tokens[6].surface, "mechanical");
}

TEST(LocateKeyword, OccurrencesAcrossSentences) {
  const auto c = corpus_from("alpha bravo. bravo delta. echo golf.");
  WeightedTerm w;
  w.term = make_term("bravo");
  EXPECT_EQ(locate_keyword(w, c).size(), 2u);
}

TEST(LocateKeyword, ForeignKeywordIsStale) {
  const auto c = corpus_from("alpha bravo. bravo delta.");
  WeightedTerm w;
  w.term = make_term("magma");
  try {
    locate_keyword(w, c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::StaleKeyword);
  }
}

TEST(GenerateMcqs, EngineSentenceMechanicalQuestion) {
  const auto m = load("computing_history.txt");
  const auto qs = generate_mcqs(m.keywords, m.corpus, {42, std::nullopt});
  const auto it = std::find_if(qs.begin(), qs.end(), [](const Mcq& q) { return q.doc_index == 1 && q.keyword_position == 6; });
  ASSERT_NE(it, qs.end());
  EXPECT_EQ(it->stem, "The Difference Engine consisted entirely of _____ components.");
  EXPECT_EQ(it->answer, "mechanical");
  EXPECT_NE(std::find(it->options.begin(), it->options.end(), "mechanical"), it->options.end());
  EXPECT_EQ(it->status, ReviewStatus::Suggested);
  EXPECT_EQ(it->seed, 42u);
  EXPECT_TRUE(mcq_violations(*it, m.corpus.documents[1], StopWords::english()).empty());

  // The distractors are whatever the seeded sampler draws; replaying the
  // generation reproduces them exactly.
  const auto again = generate_mcqs(m.keywords, m.corpus, {42, std::nullopt});
  EXPECT_EQ(qs, again);
}

TEST(GenerateMcqs, OneQuestionPerExtractedOccurrence) {
  const auto m = load("computing_history.txt");
  const auto qs = generate_mcqs(m.keywords, m.corpus, {7, std::nullopt});
  std::size_t occurrences = 0;
  std::set<std::string> distinct;
  for (const auto& k : m.keywords.keywords) {
    occurrences += k.positions.size();
    distinct.insert(k.term.key);
  }
  EXPECT_EQ(qs.size(), occurrences);
  EXPECT_GE(qs.size(), distinct.size());
  // five questions out of the Difference Engine sentence, one per extracted keyword
  EXPECT_EQ(std::count_if(qs.begin(), qs.end(), [](const Mcq& q) { return q.doc_index == 1; }), 5);
}

TEST(GenerateMcqs, PoolOfExactlyFourForcesTheDistractors) {
  const auto c = corpus_from("alpha bravo. delta echo.");
  const auto k = extract_keywords(c, {1, 5});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (const auto& q : generate_mcqs(k, c, {seed, std::nullopt})) {
      EXPECT_EQ(std::set<std::string>(q.options.begin(), q.options.end()),
                (std::set<std::string>{"alpha", "bravo", "delta", "echo"}));
    }
  }
}

TEST(GenerateMcqs, SmallPoolIsAnError) {
  const auto c = corpus_from("alpha bravo. delta alpha.");
  try {
    generate_mcqs(extract_keywords(c, {1, 5}), c, {1, std::nullopt});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientKeywords);
  }
}

TEST(GenerateMcqs, KeywordsFromAnotherMaterialAreStale) {
  const auto a = load("geology.txt");
  const auto b = load("philosophy.txt");
  try {
    generate_mcqs(a.keywords, b.corpus, {1, std::nullopt});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::StaleKeyword);
  }
}

TEST(GenerateMcqs, MaxQuestionsKeepsTheSamePrefix) {
  const auto m = load("geology.txt");
  const auto all = generate_mcqs(m.keywords, m.corpus, {5, std::nullopt});
  const auto capped = generate_mcqs(m.keywords, m.corpus, {5, std::size_t{4}});
  ASSERT_EQ(capped.size(), 4u);
  EXPECT_TRUE(std::equal(capped.begin(), capped.end(), all.begin()));
  EXPECT_THROW(generate_mcqs(m.keywords, m.corpus, {5, std::size_t{0}}), Error);
}

TEST(GenerateMcqs, DifferentSeedsDifferentDraws) {
  const auto m = load("hundred_sentences.txt");
  const auto a = generate_mcqs(m.keywords, m.corpus, {1, std::nullopt});
  const auto b = generate_mcqs(m.keywords, m.corpus, {2, std::nullopt});
  ASSERT_EQ(a.size(), b.size());
  std::size_t same_options = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].stem, b[i].stem);
    EXPECT_NE(a[i].id, b[i].id);
    if (a[i].options == b[i].options) ++same_options;
  }
  EXPECT_LT(same_options, a.size() / 10);
}

TEST(GenerateMcqs, OptionsUseTheMajoritySurfaceForm) {
  const auto c = corpus_from(
      "The Science Center opened. A Center for rocks. The Center closed early. Visit the center today. Alpha "
      "bravo delta echo.");
  const auto k = extract_keywords(c, {1, 5});
  for (const auto& q : generate_mcqs(k, c, {3, std::nullopt})) {
    for (const auto& o : q.options) EXPECT_NE(o, "center");
    if (keyword_key(q.answer) == "center") {
      EXPECT_EQ(q.answer, "Center");
    }
  }
}

TEST(GenerateMcqs, BigramQuestionsBlankTheWholeSpan) {
  const auto c = corpus_from(
      "Magma cools into igneous rock slowly. Sediment settles into layered rock beds. Heat transforms buried rock "
      "deeply.");
  const auto k = extract_keywords(c, {2, 5});
  const auto qs = generate_mcqs(k, c, {9, std::nullopt});
  ASSERT_FALSE(qs.empty());
  for (const auto& q : qs) {
    EXPECT_TRUE(mcq_violations(q, c.documents[q.doc_index], StopWords::english()).empty()) << q.stem;
    EXPECT_EQ(tokenize(q.answer, StopWords{}).size(), 2u);
  }
}

TEST(GenerateMcqs, WellFormedOnAllFixtures) {
  for (const auto& name : {"computing_history.txt", "geology.txt", "philosophy.txt", "hundred_sentences.txt"}) {
    const auto m = load(name);
    for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
      const auto qs = generate_mcqs(m.keywords, m.corpus, {seed, std::nullopt});
      std::set<std::string> ids;
      for (const auto& q : qs) {
        const auto problems = mcq_violations(q, m.corpus.documents[q.doc_index], StopWords::english());
        EXPECT_TRUE(problems.empty()) << name << ": " << q.stem << ": " << (problems.empty() ? "" : problems[0]);
        EXPECT_TRUE(ids.insert(q.id).second);
        EXPECT_EQ(q.id.size(), 32u);
      }
    }
  }
}

TEST(McqViolations, DetectsBrokenQuestions) {
  const auto m = load("computing_history.txt");
  const auto qs = generate_mcqs(m.keywords, m.corpus, {42, std::nullopt});
  const auto& source = m.corpus.documents[qs[0].doc_index];

  auto q = qs[0];
  q.stem += " _____";
  EXPECT_FALSE(mcq_violations(q, source, StopWords::english()).empty());

  q = qs[0];
  q.answer = "nonsense";
  EXPECT_FALSE(mcq_violations(q, source, StopWords::english()).empty());

  q = qs[0];
  q.options[0] = q.options[1];
  EXPECT_FALSE(mcq_violations(q, source, StopWords::english()).empty());

  q = qs[0];
  for (auto& o : q.options)
    if (o != q.answer) {
      o = q.answer;  // stem-equivalent distractor, different text
      std::transform(o.begin(), o.end(), o.begin(), [](unsigned char c) { return std::toupper(c); });
      break;
    }
  EXPECT_FALSE(mcq_violations(q, source, StopWords::english()).empty());
}

TEST(Review, StateMachine) {
  Mcq q;
  q.id = "q1";
  apply_review(q, Decision::Accept, "2020-01-01T00:00:00.000Z");
  EXPECT_EQ(q.status, ReviewStatus::Accepted);
  EXPECT_EQ(q.reviewed_at, "2020-01-01T00:00:00.000Z");

  Mcq r;
  apply_review(r, Decision::Reject, "t");
  EXPECT_EQ(r.status, ReviewStatus::Rejected);

  for (auto* reviewed : {&q, &r}) {
    for (auto d : {Decision::Accept, Decision::Reject}) {
      try {
        apply_review(*reviewed, d, "later");
        FAIL();
      } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::AlreadyReviewed);
      }
    }
  }
  EXPECT_EQ(q.status, ReviewStatus::Accepted);
}

TEST(McqSchema, SampleQuestionValidates) {
  const auto j = Json::parse(R"({
    "id": "f4", "material_id": "csc", "doc_index": 3,
    "stem": "He was told by the chairman, Frederick Saunders, that a lab _____, Carmelo Lanza, had told him about a similar contraption.",
    "options": ["giant", "calculating", "chairman", "technician"],
    "answer": "technician", "keyword_position": 13, "status": "suggested", "seed": 1
  })");
  const auto q = mcq_from_json(j);
  EXPECT_EQ(q.answer, "technician");
  EXPECT_EQ(to_json(q), j);
}

TEST(McqSchema, RejectsMalformedDocuments) {
  const auto good = Json::parse(R"({"id": "x", "material_id": "m", "doc_index": 0, "stem": "a _____ b",
    "options": ["a", "b", "c", "d"], "answer": "a", "keyword_position": 1, "status": "accepted", "seed": 3})");
  EXPECT_NO_THROW(mcq_from_json(good));
  for (const char* key : {"id", "options", "seed", "status"}) {
    auto bad = good;
    bad.erase(key);
    EXPECT_THROW(mcq_from_json(bad), Error) << key;
  }
  auto bad = good;
  bad["options"] = Json::array({"a", "b", "c"});
  EXPECT_THROW(mcq_from_json(bad), Error);
  bad = good;
  bad["answer"] = "z";
  EXPECT_THROW(mcq_from_json(bad), Error);
  bad = good;
  bad["stem"] = "no blank";
  EXPECT_THROW(mcq_from_json(bad), Error);
  bad = good;
  bad["status"] = "maybe";
  EXPECT_THROW(mcq_from_json(bad), Error);
  bad = good;
  bad["doc_index"] = -1;
  EXPECT_THROW(mcq_from_json(bad), Error);
}

TEST(SeededRng, SampleIsWithoutReplacement) {
  SeededRng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = rng.sample(std::vector<int>{0, 1, 2, 3, 4, 5, 6}, 3);
    EXPECT_EQ(std::set<int>(s.begin(), s.end()).size(), 3u);
  }
}

// Chi-square sanity check on the bounded draw: 6 cells, 60000 draws.
TEST(SeededRng, BelowIsRoughlyUniform) {
  SeededRng rng(77);
  std::vector<int> counts(6, 0);
  for (int i = 0; i < 60000; ++i) ++counts[rng.below(6)];
  double chi2 = 0;
  for (int c : counts) chi2 += (c - 10000.0) * (c - 10000.0) / 10000.0;
  EXPECT_LT(chi2, 20.5);  // p = 0.001 at 5 degrees of freedom
}
