#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tierslice {

enum class ErrorCode {
  SyntaxError,
  DuplicateSliceName,
  UnknownAnnotationKind,
  MalformedConfig,
  MissingPlacement,
  InvalidPlacement,
  NoUnplacedSlices,
  GenomeLengthMismatch,
  AllInvalid,
  TooManySlices,
  TargetNotFound,
  BadInput,
};

std::string_view errorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// 1-based line/column plus byte offset into the source text.
struct SourcePos {
  std::size_t offset = 0;
  std::size_t line = 1;
  std::size_t column = 1;

  friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

/// Any error produced while reading TierJS text. Carries the position so the
/// CLI can render `file:line:col: message`.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, SourcePos pos, const std::string& message)
      : Error(code, message), pos_(pos) {}

  const SourcePos& pos() const noexcept { return pos_; }

 private:
  SourcePos pos_;
};

}  // namespace tierslice
