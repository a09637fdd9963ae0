#include <algorithm>
#include <array>
#include <set>
#include <utility>

#include "lexer.hpp"
#include "tierslice/frontend.hpp"

namespace tierslice {

namespace {

using detail::Token;
using detail::TokenKind;

int binaryPrecedence(const Token& tok) {
  if (tok.kind != TokenKind::Punct) return 0;
  static constexpr std::array<std::pair<std::string_view, int>, 17> table = {{
      {"||", 1}, {"&&", 2}, {"|", 3},   {"^", 4},   {"&", 5},  {"==", 6},
      {"!=", 6}, {"===", 6}, {"!==", 6}, {"<", 7},  {">", 7},  {"<=", 7},
      {">=", 7}, {"+", 8},  {"-", 8},   {"*", 9},   {"/", 9},
  }};
  if (tok.text == "%") return 9;
  for (const auto& [op, prec] : table)
    if (tok.text == op) return prec;
  return 0;
}

bool isAssignOp(const Token& tok) {
  return tok.kind == TokenKind::Punct &&
         (tok.text == "=" || tok.text == "+=" || tok.text == "-=" || tok.text == "*=" ||
          tok.text == "/=" || tok.text == "%=");
}

class Parser {
 public:
  explicit Parser(std::string_view source) : toks_(detail::tokenize(source)) {}

  SourceProgram run() {
    SourceProgram program;
    std::set<std::string> names;
    while (cur().kind != TokenKind::End) {
      std::vector<Annotation> anns = takeAnnotations();
      if (hasAnnotation(anns, AnnotationKind::Slice)) {
        SliceDecl slice = sliceDecl(std::move(anns));
        if (!names.insert(slice.name).second)
          throw ParseError(ErrorCode::DuplicateSliceName, slice.span.begin,
                           "duplicate slice name '" + slice.name + "'");
        program.layout.push_back({true, program.slices.size()});
        program.slices.push_back(std::move(slice));
      } else {
        program.layout.push_back({false, program.shared.size()});
        program.shared.push_back(statement(std::move(anns)));
      }
    }
    if (!cur().annotations.empty())
      fail(cur().annotations.front().span.begin,
           "annotation is not followed by a statement or declaration");
    return program;
  }

 private:
  const Token& cur() const { return toks_[i_]; }

  [[noreturn]] static void fail(SourcePos at, const std::string& message) {
    throw ParseError(ErrorCode::SyntaxError, at, message);
  }

  [[noreturn]] void expected(std::string_view what) const {
    const std::string found = cur().kind == TokenKind::End ? "end of input" : "'" + cur().text + "'";
    fail(cur().begin, "expected " + std::string(what) + ", found " + found);
  }

  bool isPunct(std::string_view p) const {
    return cur().kind == TokenKind::Punct && cur().text == p;
  }
  bool isKeyword(std::string_view k) const {
    return cur().kind == TokenKind::Keyword && cur().text == k;
  }

  // Every token is consumed through here, so an annotation comment sitting in
  // the middle of a statement is rejected instead of silently drifting to a
  // later statement.
  const Token& next() {
    if (!cur().annotations.empty())
      fail(cur().annotations.front().span.begin,
           "annotation must precede a statement or declaration");
    const Token& tok = toks_[i_];
    if (i_ + 1 < toks_.size()) ++i_;
    last_ = tok.end;
    return tok;
  }

  void expectPunct(std::string_view p) {
    if (!isPunct(p)) expected("'" + std::string(p) + "'");
    next();
  }

  std::string identifier() {
    if (cur().kind != TokenKind::Identifier) expected("identifier");
    return next().text;
  }

  std::vector<Annotation> takeAnnotations() { return std::exchange(toks_[i_].annotations, {}); }

  void terminator() {
    if (isPunct(";")) {
      next();
      return;
    }
    if (isPunct("}") || cur().kind == TokenKind::End || cur().newlineBefore) return;
    expected("';'");
  }

  SliceDecl sliceDecl(std::vector<Annotation> anns) {
    SliceDecl slice;
    slice.span.begin = cur().begin;
    for (const auto& a : anns)
      if (a.kind == AnnotationKind::Slice) slice.name = a.args.front().name;
    if (std::count_if(anns.begin(), anns.end(),
                      [](const Annotation& a) { return a.kind == AnnotationKind::Slice; }) > 1)
      fail(anns.front().span.begin, "more than one @slice on the same block");
    if (!isPunct("{")) expected("'{' after @slice " + slice.name);
    slice.annotations = std::move(anns);
    ++depth_;
    slice.body = blockBody();
    --depth_;
    slice.span.end = last_;
    return slice;
  }

  std::vector<Stmt> blockBody() {
    expectPunct("{");
    std::vector<Stmt> body;
    while (!isPunct("}")) {
      if (cur().kind == TokenKind::End) expected("'}'");
      body.push_back(statement(takeAnnotations()));
    }
    next();
    return body;
  }

  Stmt statement(std::vector<Annotation> anns) {
    for (const auto& a : anns) {
      if (a.kind == AnnotationKind::Slice)
        fail(a.span.begin, "@slice is only allowed on top-level blocks");
      if (a.kind == AnnotationKind::Config && depth_ > 0)
        fail(a.span.begin, "@config is only allowed at top level");
    }
    Stmt s;
    s.annotations = std::move(anns);
    s.span.begin = cur().begin;
    ++depth_;
    if (hasAnnotation(s.annotations, AnnotationKind::Ui)) {
      if (cur().kind != TokenKind::Raw) expected("'{' after @ui");
      s.kind = StmtKind::Ui;
      s.raw = next().text;
    } else if (isPunct("{")) {
      s.kind = StmtKind::Block;
      s.body = blockBody();
    } else if (isKeyword("var") || isKeyword("let") || isKeyword("const")) {
      varDecl(s);
      terminator();
    } else if (isKeyword("function")) {
      next();
      s.kind = StmtKind::FunctionDecl;
      s.name = identifier();
      s.params = paramList();
      s.body = blockBody();
    } else if (isKeyword("if")) {
      next();
      s.kind = StmtKind::If;
      expectPunct("(");
      s.exprs.push_back(expression());
      expectPunct(")");
      s.body.push_back(statement(takeAnnotations()));
      if (isKeyword("else")) {
        next();
        s.alt.push_back(statement(takeAnnotations()));
      }
    } else if (isKeyword("while")) {
      next();
      s.kind = StmtKind::While;
      expectPunct("(");
      s.exprs.push_back(expression());
      expectPunct(")");
      s.body.push_back(statement(takeAnnotations()));
    } else if (isKeyword("for")) {
      forStatement(s);
    } else if (isKeyword("return")) {
      next();
      s.kind = StmtKind::Return;
      if (!isPunct(";") && !isPunct("}") && cur().kind != TokenKind::End && !cur().newlineBefore)
        s.exprs.push_back(expression());
      terminator();
    } else if (isPunct(";")) {
      next();
      s.kind = StmtKind::Empty;
    } else {
      s.kind = StmtKind::Expression;
      s.exprs.push_back(expression());
      terminator();
    }
    --depth_;
    s.span.end = last_;
    return s;
  }

  void varDecl(Stmt& s) {
    s.kind = StmtKind::VarDecl;
    s.name = next().text;
    do {
      if (!s.bindings.empty()) next();  // ','
      VarBinding b;
      b.name = identifier();
      if (isPunct("=")) {
        next();
        b.init.push_back(assignment());
      }
      s.bindings.push_back(std::move(b));
    } while (isPunct(","));
  }

  void forStatement(Stmt& s) {
    next();
    s.kind = StmtKind::For;
    expectPunct("(");
    if (!isPunct(";")) {
      Stmt init;
      init.span.begin = cur().begin;
      if (isKeyword("var") || isKeyword("let") || isKeyword("const")) {
        varDecl(init);
      } else {
        init.kind = StmtKind::Expression;
        init.exprs.push_back(expression());
      }
      init.span.end = last_;
      s.alt.push_back(std::move(init));
    }
    expectPunct(";");
    s.exprs.push_back(isPunct(";") ? emptyExpr() : expression());
    expectPunct(";");
    s.exprs.push_back(isPunct(")") ? emptyExpr() : expression());
    expectPunct(")");
    s.body.push_back(statement(takeAnnotations()));
  }

  Expr emptyExpr() const {
    Expr e;
    e.span.begin = e.span.end = cur().begin;
    return e;
  }

  std::vector<std::string> paramList() {
    expectPunct("(");
    std::vector<std::string> params;
    while (!isPunct(")")) {
      if (!params.empty()) expectPunct(",");
      params.push_back(identifier());
    }
    next();
    return params;
  }

  Expr make(ExprKind kind, SourcePos begin, std::string text = {}) const {
    Expr e;
    e.kind = kind;
    e.text = std::move(text);
    e.span.begin = begin;
    return e;
  }

  Expr finish(Expr e) const {
    e.span.end = last_;
    return e;
  }

  Expr expression() { return assignment(); }

  Expr assignment() {
    const SourcePos begin = cur().begin;
    Expr lhs = conditional();
    if (!isAssignOp(cur())) return lhs;
    if (lhs.kind != ExprKind::Identifier && lhs.kind != ExprKind::Member &&
        lhs.kind != ExprKind::Index)
      fail(lhs.span.begin, "invalid assignment target");
    Expr e = make(ExprKind::Assign, begin, next().text);
    e.operands.push_back(std::move(lhs));
    e.operands.push_back(assignment());
    return finish(std::move(e));
  }

  Expr conditional() {
    const SourcePos begin = cur().begin;
    Expr cond = binary(1);
    if (!isPunct("?")) return cond;
    next();
    Expr e = make(ExprKind::Conditional, begin);
    e.operands.push_back(std::move(cond));
    e.operands.push_back(assignment());
    expectPunct(":");
    e.operands.push_back(assignment());
    return finish(std::move(e));
  }

  Expr binary(int minPrec) {
    const SourcePos begin = cur().begin;
    Expr lhs = unary();
    for (;;) {
      const int prec = binaryPrecedence(cur());
      if (prec == 0 || prec < minPrec) return lhs;
      Expr e = make(ExprKind::Binary, begin, next().text);
      e.operands.push_back(std::move(lhs));
      e.operands.push_back(binary(prec + 1));
      lhs = finish(std::move(e));
    }
  }

  Expr unary() {
    const SourcePos begin = cur().begin;
    const bool prefixOp =
        (cur().kind == TokenKind::Punct &&
         (cur().text == "!" || cur().text == "-" || cur().text == "+" || cur().text == "~" ||
          cur().text == "++" || cur().text == "--")) ||
        isKeyword("typeof");
    if (!prefixOp) return postfix();
    Expr e = make(ExprKind::Unary, begin, next().text);
    e.operands.push_back(unary());
    return finish(std::move(e));
  }

  Expr postfix() {
    const SourcePos begin = cur().begin;
    Expr operand = callOrMember(true);
    if ((isPunct("++") || isPunct("--")) && !cur().newlineBefore) {
      Expr e = make(ExprKind::Postfix, begin, next().text);
      e.operands.push_back(std::move(operand));
      return finish(std::move(e));
    }
    return operand;
  }

  Expr callOrMember(bool allowCalls) {
    const SourcePos begin = cur().begin;
    Expr e = isKeyword("new") ? newExpr() : primary();
    for (;;) {
      if (isPunct(".")) {
        next();
        if (cur().kind != TokenKind::Identifier && cur().kind != TokenKind::Keyword)
          expected("property name");
        Expr m = make(ExprKind::Member, begin, next().text);
        m.operands.push_back(std::move(e));
        e = finish(std::move(m));
      } else if (isPunct("[")) {
        next();
        Expr m = make(ExprKind::Index, begin);
        m.operands.push_back(std::move(e));
        m.operands.push_back(expression());
        expectPunct("]");
        e = finish(std::move(m));
      } else if (allowCalls && isPunct("(")) {
        Expr c = make(ExprKind::Call, begin);
        c.operands.push_back(std::move(e));
        arguments(c);
        e = finish(std::move(c));
      } else {
        return e;
      }
    }
  }

  Expr newExpr() {
    const SourcePos begin = cur().begin;
    next();
    Expr e = make(ExprKind::New, begin);
    e.operands.push_back(callOrMember(false));
    if (isPunct("(")) arguments(e);
    return finish(std::move(e));
  }

  void arguments(Expr& call) {
    expectPunct("(");
    bool first = true;
    while (!isPunct(")")) {
      if (!first) expectPunct(",");
      first = false;
      call.operands.push_back(assignment());
    }
    next();
  }

  Expr primary() {
    const SourcePos begin = cur().begin;
    const Token& tok = cur();
    switch (tok.kind) {
      case TokenKind::Identifier:
        return finish(make(ExprKind::Identifier, begin, next().text));
      case TokenKind::Number:
        return finish(make(ExprKind::Number, begin, next().text));
      case TokenKind::String:
        return finish(make(ExprKind::String, begin, next().text));
      case TokenKind::Keyword:
        if (tok.text == "true" || tok.text == "false" || tok.text == "null" ||
            tok.text == "undefined" || tok.text == "this")
          return finish(make(ExprKind::Literal, begin, next().text));
        if (tok.text == "function") return functionExpr();
        break;
      case TokenKind::Punct:
        if (tok.text == "(") {
          next();
          Expr e = make(ExprKind::Paren, begin);
          e.operands.push_back(expression());
          expectPunct(")");
          return finish(std::move(e));
        }
        if (tok.text == "[") return arrayLiteral();
        if (tok.text == "{") return objectLiteral();
        break;
      default:
        break;
    }
    expected("expression");
  }

  Expr functionExpr() {
    Expr e = make(ExprKind::Function, cur().begin);
    next();
    if (cur().kind == TokenKind::Identifier) e.text = next().text;
    e.keys = paramList();
    ++depth_;
    e.body = blockBody();
    --depth_;
    return finish(std::move(e));
  }

  Expr arrayLiteral() {
    Expr e = make(ExprKind::Array, cur().begin);
    next();
    while (!isPunct("]")) {
      e.operands.push_back(assignment());
      if (!isPunct("]")) expectPunct(",");
    }
    next();
    return finish(std::move(e));
  }

  Expr objectLiteral() {
    Expr e = make(ExprKind::Object, cur().begin);
    next();
    while (!isPunct("}")) {
      const TokenKind k = cur().kind;
      if (k != TokenKind::Identifier && k != TokenKind::Keyword && k != TokenKind::String &&
          k != TokenKind::Number)
        expected("property key");
      e.keys.push_back(next().text);
      expectPunct(":");
      e.operands.push_back(assignment());
      if (!isPunct("}")) expectPunct(",");
    }
    next();
    return finish(std::move(e));
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
  SourcePos last_;
  int depth_ = 0;
};

}  // namespace

SourceProgram parse(std::string_view sourceText) {
  SourceProgram program = Parser(sourceText).run();
  reindex(program);
  return program;
}

SourceProgram analyze(std::string_view sourceText) { return resolveCalls(parse(sourceText)); }

}  // namespace tierslice
