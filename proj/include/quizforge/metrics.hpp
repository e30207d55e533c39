#ifndef QUIZFORGE_METRICS_HPP
#define QUIZFORGE_METRICS_HPP

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "quizforge/error.hpp"
#include "quizforge/pipeline.hpp"
#include "quizforge/termweight.hpp"

namespace quizforge {

using KeySet = std::set<std::string>;

/// Teacher-marked keywords of one material, as stem keys.
struct GoldSet {
  std::string material_id;
  KeySet keywords;
};

struct ExtractedSet {
  std::string material_id;
  KeySet keywords;
};

struct ConfusionSets {
  KeySet tp;
  KeySet fp;
  KeySet fn;
};

struct EvalReport {
  std::string material_id;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  std::vector<std::string> warnings;
};

/// One keyword per line; blank lines and surrounding whitespace ignored.
/// Each line is normalized to its stem key, so "Mechanical" matches the
/// extracted term "mechanical".
inline GoldSet parse_gold(std::string material_id, std::string_view text) {
  GoldSet gold{std::move(material_id), {}};
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto key = keyword_key(utf8::trim(line));
    if (!key.empty()) gold.keywords.insert(key);
  }
  if (gold.keywords.empty()) throw Error(ErrorCode::EmptyTruthset, "gold keyword list is empty");
  return gold;
}

inline GoldSet load_gold(std::string material_id, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read gold file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_gold(std::move(material_id), buf.str());
}

/// Distinct stem keys of a keyword set.
inline ExtractedSet extracted_set(const KeywordSet& keywords) {
  ExtractedSet out{keywords.material_id, {}};
  for (const auto& k : keywords.keywords) out.keywords.insert(k.term.key);
  return out;
}

inline ConfusionSets confusion_sets(const GoldSet& truth, const ExtractedSet& extracted) {
  if (truth.material_id != extracted.material_id)
    throw Error(ErrorCode::MaterialMismatch,
                "gold set is for " + truth.material_id + ", extracted set is for " + extracted.material_id);
  ConfusionSets c;
  const auto& t = truth.keywords;
  const auto& e = extracted.keywords;
  std::set_intersection(t.begin(), t.end(), e.begin(), e.end(), std::inserter(c.tp, c.tp.end()));
  std::set_difference(e.begin(), e.end(), t.begin(), t.end(), std::inserter(c.fp, c.fp.end()));
  std::set_difference(t.begin(), t.end(), e.begin(), e.end(), std::inserter(c.fn, c.fn.end()));
  return c;
}

/// tp / (tp + fp). An empty extraction scores 0 rather than failing; callers
/// that care check `tp + fp == 0` themselves (evaluate() records a warning).
inline double precision(std::size_t tp, std::size_t fp) {
  if (tp + fp == 0) return 0.0;
  return static_cast<double>(tp) / static_cast<double>(tp + fp);
}

inline double recall(std::size_t tp, std::size_t fn) {
  if (tp + fn == 0) throw Error(ErrorCode::EmptyTruthset, "recall is undefined without gold keywords");
  return static_cast<double>(tp) / static_cast<double>(tp + fn);
}

inline double f_measure(double p, double r) {
  if (p + r == 0.0) return 0.0;
  return 2.0 * (r * p) / (r + p);
}

inline EvalReport report_from_counts(std::string material_id, std::size_t tp, std::size_t fp, std::size_t fn) {
  EvalReport r;
  r.material_id = std::move(material_id);
  r.tp = tp;
  r.fp = fp;
  r.fn = fn;
  if (tp + fp == 0) r.warnings.push_back("NoExtraction: nothing was extracted, precision reported as 0");
  r.precision = precision(tp, fp);
  r.recall = recall(tp, fn);
  r.f_measure = f_measure(r.precision, r.recall);
  return r;
}

inline EvalReport evaluate(const GoldSet& truth, const ExtractedSet& extracted) {
  if (truth.keywords.empty()) throw Error(ErrorCode::EmptyTruthset, "gold set for " + truth.material_id + " is empty");
  const auto c = confusion_sets(truth, extracted);
  return report_from_counts(truth.material_id, c.tp.size(), c.fp.size(), c.fn.size());
}

inline std::string two_decimals(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

/// material,tp,fp,fn,precision,recall,f_measure with 2-decimal scores.
inline std::string reports_csv(const std::vector<EvalReport>& reports) {
  std::string out = "material,tp,fp,fn,precision,recall,f_measure\n";
  for (const auto& r : reports) {
    out += r.material_id + ',' + std::to_string(r.tp) + ',' + std::to_string(r.fp) + ',' + std::to_string(r.fn) + ',' +
           two_decimals(r.precision) + ',' + two_decimals(r.recall) + ',' + two_decimals(r.f_measure) + '\n';
  }
  return out;
}

inline std::string format_report(const EvalReport& r) {
  return "material " + r.material_id + " tp " + std::to_string(r.tp) + " fp " + std::to_string(r.fp) + " fn " +
         std::to_string(r.fn) + " precision " + two_decimals(r.precision) + " recall " + two_decimals(r.recall) +
         " f_measure " + two_decimals(r.f_measure);
}

}  // namespace quizforge

#endif
