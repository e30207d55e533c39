#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "quizforge/io.hpp"
#include "quizforge/metrics.hpp"
#include "test_support.hpp"

using namespace quizforge;

namespace {

GoldSet gold(const std::vector<std::string>& words) { return GoldSet{"m", KeySet(words.begin(), words.end())}; }
ExtractedSet extracted(const std::vector<std::string>& words) {
  return ExtractedSet{"m", KeySet(words.begin(), words.end())};
}

// Random distinct keys from a universe of 40.
std::vector<std::string> random_keys(std::mt19937_64& rng, std::size_t count) {
  std::vector<std::string> universe;
  for (int i = 0; i < 40; ++i) universe.push_back("k" + std::to_string(i));
  std::shuffle(universe.begin(), universe.end(), rng);
  universe.resize(count);
  return universe;
}

}  // namespace

TEST(ConfusionSets, Examples) {
  const auto c = confusion_sets(gold({"alpha", "beta", "gamma"}), extracted({"beta", "gamma", "delta"}));
  EXPECT_EQ(c.tp, (KeySet{"beta", "gamma"}));
  EXPECT_EQ(c.fp, (KeySet{"delta"}));
  EXPECT_EQ(c.fn, (KeySet{"alpha"}));

  const auto same = confusion_sets(gold({"a", "b"}), extracted({"a", "b"}));
  EXPECT_TRUE(same.fp.empty());
  EXPECT_TRUE(same.fn.empty());

  const auto r = evaluate(gold({"a", "b"}), extracted({"c", "d"}));
  EXPECT_EQ(r.tp, 0u);
  EXPECT_EQ(r.precision, 0.0);
  EXPECT_EQ(r.recall, 0.0);
  EXPECT_EQ(r.f_measure, 0.0);
}

TEST(ConfusionSets, MaterialMismatch) {
  try {
    confusion_sets(GoldSet{"a", {"x"}}, ExtractedSet{"b", {"x"}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MaterialMismatch);
  }
}

TEST(Precision, ReportedRows) {
  EXPECT_EQ(two_decimals(precision(162, 206)), "0.44");
  EXPECT_NEAR(precision(162, 206), 162.0 / 368.0, 1e-15);
  EXPECT_EQ(two_decimals(precision(185, 286)), "0.39");
  EXPECT_EQ(precision(0, 5), 0.0);
  EXPECT_EQ(precision(0, 0), 0.0);
}

TEST(Recall, ReportedRows) {
  EXPECT_EQ(two_decimals(recall(162, 31)), "0.84");
  EXPECT_EQ(two_decimals(recall(94, 2)), "0.98");
  EXPECT_EQ(recall(7, 0), 1.0);
  try {
    recall(0, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyTruthset);
  }
}

TEST(FMeasure, ReportedRows) {
  EXPECT_EQ(two_decimals(f_measure(0.44, 0.84)), "0.58");
  EXPECT_EQ(two_decimals(f_measure(0.39, 0.91)), "0.55");
  EXPECT_DOUBLE_EQ(f_measure(0.3, 0.3), 0.3);
  EXPECT_EQ(f_measure(0.0, 0.0), 0.0);
}

TEST(Evaluate, SmallExample) {
  const auto r = evaluate(gold({"a", "b", "c"}), extracted({"b", "c", "d"}));
  EXPECT_EQ(r.tp, 2u);
  EXPECT_EQ(r.fp, 1u);
  EXPECT_EQ(r.fn, 1u);
  EXPECT_EQ(two_decimals(r.precision), "0.67");
  EXPECT_EQ(two_decimals(r.recall), "0.67");
  EXPECT_EQ(two_decimals(r.f_measure), "0.67");
}

TEST(Evaluate, PhilosophyRowReplay) {
  const auto r = report_from_counts("philosophy", 94, 160, 2);
  EXPECT_EQ(two_decimals(r.precision), "0.37");
  EXPECT_EQ(two_decimals(r.recall), "0.98");
  EXPECT_EQ(two_decimals(r.f_measure), "0.54");
}

TEST(Evaluate, EmptyExtractionWarns) {
  const auto r = evaluate(gold({"a"}), extracted({}));
  EXPECT_EQ(r.precision, 0.0);
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find("NoExtraction"), std::string::npos);
}

TEST(Evaluate, EmptyGoldIsAnError) { EXPECT_THROW(evaluate(gold({}), extracted({"a"})), Error); }

TEST(Evaluate, MatchesMembershipOracle) {
  std::mt19937_64 rng(20);
  for (int trial = 0; trial < 200; ++trial) {
    const auto t = random_keys(rng, 20);
    const auto e = random_keys(rng, 20);
    const auto want = oracle::count_memberships(t, e);
    const auto r = evaluate(gold(t), extracted(e));
    EXPECT_EQ(r.tp, want.tp);
    EXPECT_EQ(r.fp, want.fp);
    EXPECT_EQ(r.fn, want.fn);
  }
}

TEST(EvaluateProperty, SetLawsAndBounds) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const auto t = random_keys(rng, 1 + rng() % 25);
    const auto e = random_keys(rng, rng() % 25);
    const auto c = confusion_sets(gold(t), extracted(e));
    EXPECT_EQ(c.tp.size() + c.fn.size(), t.size());
    EXPECT_EQ(c.tp.size() + c.fp.size(), e.size());
    const auto r = evaluate(gold(t), extracted(e));
    if (r.precision + r.recall > 0) {
      EXPECT_LE(std::min(r.precision, r.recall), r.f_measure + 1e-12);
      EXPECT_LE(r.f_measure, std::max(r.precision, r.recall) + 1e-12);
    }
  }
}

TEST(EvaluateProperty, SwappingRolesSwapsErrorsAndScores) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const auto t = random_keys(rng, 1 + rng() % 20);
    const auto e = random_keys(rng, 1 + rng() % 20);
    const auto a = evaluate(gold(t), extracted(e));
    const auto b = evaluate(gold(e), extracted(t));
    EXPECT_EQ(a.fp, b.fn);
    EXPECT_EQ(a.fn, b.fp);
    EXPECT_DOUBLE_EQ(a.precision, b.recall);
    EXPECT_DOUBLE_EQ(a.recall, b.precision);
  }
}

TEST(EvaluateProperty, AddingACorrectKeywordNeverLowersRecall) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const auto t = random_keys(rng, 10);
    auto e = random_keys(rng, 10);
    const auto before = evaluate(gold(t), extracted(e)).recall;
    e.push_back(t[rng() % t.size()]);
    EXPECT_GE(evaluate(gold(t), extracted(e)).recall, before);
  }
}

TEST(GoldFile, NormalizesAndSkipsBlankLines) {
  const auto g = parse_gold("m", "Mechanical\n\n  components  \r\nDifference Engine\nmechanics\n");
  EXPECT_EQ(g.keywords, (KeySet{"mechan", "compon", "differ engin"}));
  EXPECT_THROW(parse_gold("m", "\n \n"), Error);
}

TEST(GoldFile, MatchesExtractedTermsByStem) {
  const auto corpus = build_corpus(test::fixture_material("computing_history.txt"));
  const auto ex = extracted_set(extract_keywords(corpus, {1, 5}));
  const auto g = parse_gold(corpus.material_id, "Mechanical\nEntirely\nComponent\nbananas\n");
  const auto r = evaluate(g, ex);
  EXPECT_EQ(r.tp, 3u);
  EXPECT_EQ(r.fn, 1u);
}

TEST(Reports, CsvAndJson) {
  const auto r = report_from_counts("cs", 162, 206, 31);
  EXPECT_EQ(reports_csv({r}), "material,tp,fp,fn,precision,recall,f_measure\ncs,162,206,31,0.44,0.84,0.58\n");
  EXPECT_EQ(format_report(r), "material cs tp 162 fp 206 fn 31 precision 0.44 recall 0.84 f_measure 0.58");
  const auto j = to_json(r);
  EXPECT_EQ(j["tp"], 162);
  EXPECT_NEAR(j["precision"].get<double>(), 162.0 / 368.0, 1e-15);
}
