#include "lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace tierslice::detail {

namespace {

constexpr std::array<std::string_view, 16> kKeywords = {
    "var", "let",  "const", "function", "if",        "else",
    "while", "for", "return", "new",     "true",      "false",
    "null", "undefined", "this", "typeof",
};

// Longest first so the scanner can take the first match.
constexpr std::array<std::string_view, 39> kPunctuators = {
    "===", "!==", "==", "!=", "<=", ">=", "&&", "||", "++", "--",
    "+=",  "-=",  "*=", "/=", "%=", "{",  "}",  "(",  ")",  "[",
    "]",   ";",   ",",  ".",  ":",  "?",  "<",  ">",  "+",  "-",
    "*",   "/",   "%",  "!",  "=",  "&",  "|",  "^",  "~",
};

bool isIdentStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool isIdentPart(char c) {
  return isIdentStart(c) || std::isdigit(static_cast<unsigned char>(c));
}

class Scanner {
 public:
  explicit Scanner(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    for (;;) {
      bool newline = false;
      std::vector<Annotation> pending;
      skipTrivia(newline, pending);
      Token tok;
      tok.newlineBefore = newline || tokens.empty();
      tok.annotations = std::move(pending);
      tok.begin = pos_;
      if (atEnd()) {
        tok.kind = TokenKind::End;
        tok.end = pos_;
        tokens.push_back(std::move(tok));
        return tokens;
      }
      if (peek() == '{' && hasAnnotation(tok.annotations, AnnotationKind::Ui))
        scanRaw(tok);
      else
        scanToken(tok);
      tok.end = pos_;
      tokens.push_back(std::move(tok));
    }
  }

 private:
  bool atEnd() const { return pos_.offset >= src_.size(); }
  char peek(std::size_t ahead = 0) const {
    const std::size_t i = pos_.offset + ahead;
    return i < src_.size() ? src_[i] : '\0';
  }

  void advance() {
    if (src_[pos_.offset] == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    ++pos_.offset;
  }

  [[noreturn]] void fail(SourcePos at, const std::string& message) const {
    throw ParseError(ErrorCode::SyntaxError, at, message);
  }

  void skipTrivia(bool& newline, std::vector<Annotation>& pending) {
    while (!atEnd()) {
      const char c = peek();
      if (c == '\n') {
        newline = true;
        advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (!atEnd() && peek() != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        blockComment(newline, pending);
      } else {
        return;
      }
    }
  }

  void blockComment(bool& newline, std::vector<Annotation>& pending) {
    const SourcePos start = pos_;
    advance();
    advance();
    const SourcePos bodyStart = pos_;
    while (!(peek() == '*' && peek(1) == '/')) {
      if (atEnd()) fail(start, "unterminated block comment");
      if (peek() == '\n') newline = true;
      advance();
    }
    const std::string_view body =
        src_.substr(bodyStart.offset, pos_.offset - bodyStart.offset);
    advance();
    advance();
    if (hasAnnotationMarker(body)) parseAnnotations(bodyStart, body, pending);
  }

  static bool hasAnnotationMarker(std::string_view body) {
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (body[i] != '@') continue;
      const bool wordStart = i == 0 || std::isspace(static_cast<unsigned char>(body[i - 1])) ||
                             body[i - 1] == '*';
      if (wordStart && i + 1 < body.size() && isIdentStart(body[i + 1])) return true;
    }
    return false;
  }

  // Grammar inside an annotation comment:
  //   comment := ( '@' kind arg* )+
  //   arg     := ident ( ':' ident )? ','?
  // Leading '*' decorations and whitespace are ignored.
  void parseAnnotations(SourcePos bodyStart, std::string_view body,
                        std::vector<Annotation>& out) const {
    SourcePos at = bodyStart;
    std::size_t i = 0;
    auto step = [&] {
      if (body[i] == '\n') {
        ++at.line;
        at.column = 1;
      } else {
        ++at.column;
      }
      ++at.offset;
      ++i;
    };
    auto skipSpace = [&] {
      while (i < body.size() &&
             (std::isspace(static_cast<unsigned char>(body[i])) || body[i] == '*'))
        step();
    };
    auto ident = [&]() -> std::string {
      const std::size_t from = i;
      while (i < body.size() && isIdentPart(body[i])) step();
      return std::string(body.substr(from, i - from));
    };

    skipSpace();
    if (i >= body.size() || body[i] != '@')
      fail(at, "annotation comment must start with an annotation");

    while (i < body.size()) {
      const SourcePos annStart = at;
      step();  // '@'
      if (i >= body.size() || !isIdentStart(body[i])) fail(at, "expected annotation name after '@'");
      const std::string kindName = ident();
      const auto kind = annotationFromName(kindName);
      if (!kind)
        throw ParseError(ErrorCode::UnknownAnnotationKind, annStart,
                         "unknown annotation '@" + kindName + "'");
      Annotation ann;
      ann.kind = *kind;
      ann.span.begin = annStart;
      skipSpace();
      while (i < body.size() && body[i] != '@') {
        if (!isIdentStart(body[i])) {
          if (ann.kind == AnnotationKind::Config)
            throw ParseError(ErrorCode::MalformedConfig, at,
                             "expected 'name : tier' pair in @config");
          fail(at, std::string("unexpected character '") + body[i] + "' in annotation");
        }
        AnnotationArg arg;
        arg.name = ident();
        skipSpace();
        if (i < body.size() && body[i] == ':') {
          step();
          skipSpace();
          if (i >= body.size() || !isIdentStart(body[i]))
            throw ParseError(ErrorCode::MalformedConfig, at, "expected tier after ':'");
          arg.value = ident();
          skipSpace();
        }
        ann.args.push_back(std::move(arg));
        if (i < body.size() && body[i] == ',') {
          step();
          skipSpace();
        }
      }
      ann.span.end = at;
      validate(ann);
      out.push_back(std::move(ann));
    }
  }

  static void validate(const Annotation& ann) {
    const SourcePos at = ann.span.begin;
    if (ann.kind == AnnotationKind::Slice) {
      if (ann.args.size() != 1 || ann.args[0].isPair())
        throw ParseError(ErrorCode::SyntaxError, at, "@slice takes exactly one slice name");
    } else if (ann.kind == AnnotationKind::Config) {
      if (ann.args.empty())
        throw ParseError(ErrorCode::MalformedConfig, at, "@config needs at least one pair");
      for (const auto& arg : ann.args) {
        if (!arg.isPair())
          throw ParseError(ErrorCode::MalformedConfig, at,
                           "@config entry '" + arg.name + "' is not a 'name : tier' pair");
        const auto tier = tierFromName(arg.value);
        if (!tier || *tier == Tier::Both)
          throw ParseError(ErrorCode::MalformedConfig, at,
                           "@config tier must be client or server, got '" + arg.value + "'");
      }
    }
  }

  void scanToken(Token& tok) {
    const char c = peek();
    if (isIdentStart(c)) {
      const std::size_t from = pos_.offset;
      while (!atEnd() && isIdentPart(peek())) advance();
      tok.text = std::string(src_.substr(from, pos_.offset - from));
      tok.kind = isKeyword(tok.text) ? TokenKind::Keyword : TokenKind::Identifier;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      scanNumber(tok);
      return;
    }
    if (c == '"' || c == '\'') {
      scanString(tok, c);
      return;
    }
    for (const auto p : kPunctuators) {
      if (src_.substr(pos_.offset, p.size()) == p) {
        for (std::size_t k = 0; k < p.size(); ++k) advance();
        tok.kind = TokenKind::Punct;
        tok.text = std::string(p);
        return;
      }
    }
    fail(pos_, std::string("unexpected character '") + c + "'");
  }

  void scanRaw(Token& tok) {
    const SourcePos start = pos_;
    advance();
    const std::size_t from = pos_.offset;
    int depth = 1;
    for (;;) {
      if (atEnd()) fail(start, "unterminated @ui block");
      if (peek() == '{') ++depth;
      if (peek() == '}' && --depth == 0) break;
      advance();
    }
    tok.kind = TokenKind::Raw;
    tok.text = std::string(src_.substr(from, pos_.offset - from));
    advance();
  }

  void scanNumber(Token& tok) {
    const std::size_t from = pos_.offset;
    if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
      advance();
      advance();
      while (std::isxdigit(static_cast<unsigned char>(peek()))) advance();
    } else {
      while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
      if (peek() == '.') {
        advance();
        while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
      }
      if (peek() == 'e' || peek() == 'E') {
        advance();
        if (peek() == '+' || peek() == '-') advance();
        if (!std::isdigit(static_cast<unsigned char>(peek()))) fail(pos_, "malformed exponent");
        while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
      }
    }
    if (isIdentStart(peek())) fail(pos_, "identifier directly after number");
    tok.kind = TokenKind::Number;
    tok.text = std::string(src_.substr(from, pos_.offset - from));
  }

  void scanString(Token& tok, char quote) {
    const SourcePos start = pos_;
    const std::size_t from = pos_.offset;
    advance();
    while (peek() != quote) {
      if (atEnd() || peek() == '\n') fail(start, "unterminated string literal");
      if (peek() == '\\') {
        advance();
        if (atEnd()) fail(start, "unterminated string literal");
      }
      advance();
    }
    advance();
    tok.kind = TokenKind::String;
    tok.text = std::string(src_.substr(from, pos_.offset - from));
  }

  std::string_view src_;
  SourcePos pos_;
};

}  // namespace

bool isKeyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

std::vector<Token> tokenize(std::string_view source) { return Scanner(source).run(); }

}  // namespace tierslice::detail
