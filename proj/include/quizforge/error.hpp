#ifndef QUIZFORGE_ERROR_HPP
#define QUIZFORGE_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace quizforge {

enum class ErrorCode {
  EmptyMaterial,
  ReservedToken,
  EmptyCorpus,
  ZeroDenominator,
  UnknownTerm,
  InvalidGramSize,
  InvalidArgument,
  StaleKeyword,
  InsufficientKeywords,
  NotFound,
  AlreadyReviewed,
  MaterialMismatch,
  EmptyTruthset,
  NothingAccepted,
  UnsupportedMediaType,
  InvalidDocument,
  Storage,
};

constexpr std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyMaterial: return "EmptyMaterial";
    case ErrorCode::ReservedToken: return "ReservedToken";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::UnknownTerm: return "UnknownTerm";
    case ErrorCode::InvalidGramSize: return "InvalidGramSize";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::StaleKeyword: return "StaleKeyword";
    case ErrorCode::InsufficientKeywords: return "InsufficientKeywords";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::AlreadyReviewed: return "AlreadyReviewed";
    case ErrorCode::MaterialMismatch: return "MaterialMismatch";
    case ErrorCode::EmptyTruthset: return "EmptyTruthset";
    case ErrorCode::NothingAccepted: return "NothingAccepted";
    case ErrorCode::UnsupportedMediaType: return "UnsupportedMediaType";
    case ErrorCode::InvalidDocument: return "InvalidDocument";
    case ErrorCode::Storage: return "Storage";
  }
  return "Unknown";
}

/// Every failure raised by the engine carries one named code, so the CLI and
/// HTTP layers can map it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

}  // namespace quizforge

#endif
