#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tierslice/source.hpp"

namespace tierslice::detail {

enum class TokenKind { Identifier, Keyword, Number, String, Punct, Raw, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  SourcePos begin;
  SourcePos end;
  bool newlineBefore = false;
  /// Annotations from block comments between the previous token and this one.
  std::vector<Annotation> annotations;
};

/// Tokenizes the whole input up front. Line comments and plain block comments
/// are dropped; block comments containing `@kind` words become annotations on
/// the next token. A `{...}` block right after an @ui annotation is returned
/// as a single Raw token holding the text between the braces.
std::vector<Token> tokenize(std::string_view source);

bool isKeyword(std::string_view word);

}  // namespace tierslice::detail
