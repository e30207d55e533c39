#ifndef QUIZFORGE_STOPWORDS_HPP
#define QUIZFORGE_STOPWORDS_HPP

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>

#include "quizforge/error.hpp"
#include "quizforge/utf8.hpp"

namespace quizforge {

// Mirrors data/stopwords_en.txt.
inline constexpr std::string_view kDefaultStopWords =
    "i me my myself we our ours ourselves you your yours yourself yourselves he him his "
    "himself she her hers herself it its itself they them their theirs themselves what which "
    "who whom whose this that these those am is are was were be been being have has had "
    "having do does did doing a an the and but if or because as until while of at by for with "
    "about against between into through during before after above below to from up down in "
    "out on off over under again further then once here there when where why how all any both "
    "each few more most other some such no nor not only own same so than too very s t can "
    "will just don should now d ll m o re ve y ain aren couldn didn doesn hadn hasn haven isn "
    "ma mightn mustn needn shan shouldn wasn weren won wouldn also could would may might must "
    "shall upon yet among within without whether though although since unless us either "
    "neither every";

/// A set of lowercased stop words. The default instance holds the bundled
/// English list; `from_file` replaces it for one run.
class StopWords {
 public:
  StopWords() = default;

  static StopWords english() { return parse(kDefaultStopWords); }

  /// Whitespace-or-newline separated words; '#' starts a comment that runs to
  /// end of line.
  static StopWords parse(std::string_view text) {
    StopWords out;
    std::istringstream lines{std::string(text)};
    std::string line;
    while (std::getline(lines, line)) {
      if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      std::istringstream fields(line);
      std::string word;
      while (fields >> word) out.words_.insert(utf8::to_lower(word));
    }
    return out;
  }

  static StopWords from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read stop-word file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
  }

  bool contains(std::string_view normal) const { return words_.count(std::string(normal)) != 0; }
  std::size_t size() const { return words_.size(); }
  const std::unordered_set<std::string>& words() const { return words_; }

 private:
  std::unordered_set<std::string> words_;
};

}  // namespace quizforge

#endif
