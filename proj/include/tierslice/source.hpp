#pragma once

// TierJS syntax tree and the analyzed SourceProgram.
//
// The tree is a plain value type: every node owns its children through
// std::vector, so a whole program can be copied and transformed without any
// pointer fix-ups. Node ids (Stmt::id, Expr::callId) are assigned by the
// indexer in preorder traversal and are only meaningful for the program that
// was last indexed.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tierslice/error.hpp"

namespace tierslice {

struct Span {
  SourcePos begin;
  SourcePos end;

  friend bool operator==(const Span&, const Span&) = default;
};

enum class AnnotationKind {
  Slice,
  Config,
  Client,
  Server,
  Ui,
  RemoteCall,
  LocalCall,
  Blocking,
  Reply,
  Broadcast,
  RemoteProcedure,
  Local,
  Copy,
  Replicated,
  Observable,
  DefineHandler,
  UseHandler,
};

/// Annotation categories as used in summary counts.
enum class AnnotationCategory { Placement, Communication, Sharing, FailureHandling };

std::string_view annotationName(AnnotationKind kind);
std::optional<AnnotationKind> annotationFromName(std::string_view name);
AnnotationCategory annotationCategory(AnnotationKind kind);
std::string_view categoryName(AnnotationCategory category);

/// One argument of an annotation. `value` is empty for bare identifiers;
/// `name : value` pairs (as in @config) carry both.
struct AnnotationArg {
  std::string name;
  std::string value;

  bool isPair() const { return !value.empty(); }
  friend bool operator==(const AnnotationArg&, const AnnotationArg&) = default;
};

struct Annotation {
  AnnotationKind kind = AnnotationKind::Slice;
  std::vector<AnnotationArg> args;
  Span span;
};

enum class ExprKind {
  Empty,        // absent optional expression (for-loop header parts)
  Identifier,
  Number,
  String,
  Literal,      // true, false, null, undefined, this
  Array,
  Object,
  Function,     // anonymous or named function expression
  Member,       // operands[0].text
  Index,        // operands[0][operands[1]]
  Call,         // operands[0](operands[1..])
  New,          // new operands[0](operands[1..])
  Unary,        // text operands[0]
  Postfix,      // operands[0] text
  Binary,       // operands[0] text operands[1]
  Assign,       // operands[0] text operands[1]
  Conditional,  // operands[0] ? operands[1] : operands[2]
  Paren,
};

struct Stmt;

struct Expr {
  ExprKind kind = ExprKind::Empty;
  /// Identifier name, literal spelling, operator, member name, or the name of
  /// a named function expression.
  std::string text;
  std::vector<Expr> operands;
  /// Object literal keys (parallel to operands) or function parameters.
  std::vector<std::string> keys;
  /// Function expression body.
  std::vector<Stmt> body;
  Span span;
  /// Index into SourceProgram::callSites for Call/New nodes, -1 otherwise.
  std::int32_t callId = -1;
};

enum class StmtKind {
  VarDecl,
  FunctionDecl,
  Expression,
  If,
  While,
  For,
  Return,
  Block,
  Ui,
  Empty,
};

struct VarBinding {
  std::string name;
  /// Zero or one initializer.
  std::vector<Expr> init;
};

struct Stmt {
  StmtKind kind = StmtKind::Empty;
  Span span;
  std::vector<Annotation> annotations;

  /// VarDecl keyword (var/let/const) or FunctionDecl name.
  std::string name;
  std::vector<std::string> params;
  std::vector<VarBinding> bindings;
  /// Expression: [e]. Return: [] or [e]. If/While: [cond]. For: [cond, update].
  std::vector<Expr> exprs;
  /// Block/function body, or the single body statement of If/While/For.
  std::vector<Stmt> body;
  /// If: zero or one else statement. For: zero or one init statement.
  std::vector<Stmt> alt;
  /// Ui: the verbatim text between the braces.
  std::string raw;

  std::uint32_t id = 0;
};

bool hasAnnotation(const std::vector<Annotation>& annotations, AnnotationKind kind);

enum class Tier { Client, Server, Both };

std::string_view tierName(Tier tier);
std::optional<Tier> tierFromName(std::string_view name);

struct SliceDecl {
  std::string name;
  std::vector<Stmt> body;
  std::vector<Annotation> annotations;
  /// Client or Server; set iff the name appears in a @config annotation.
  std::optional<Tier> fixedTier;
  Span span;
};

/// Statements outside every slice share this owner.
using Owner = std::optional<std::size_t>;

std::string ownerName(const Owner& owner, const std::vector<SliceDecl>& slices);

enum class DeclKind { Var, Function, Param };

struct Declaration {
  std::string name;
  DeclKind kind = DeclKind::Var;
  Owner owner;
  /// Declaring statement. For parameters: the function declaration, or the
  /// statement holding the function expression.
  std::uint32_t stmtId = 0;
  /// Innermost enclosing declared function, if any. For parameters and the
  /// function's own locals this is the function itself.
  std::optional<std::uint32_t> enclosingFunction;
  std::uint32_t scopeId = 0;
  bool replicated = false;
  Span span;
};

enum class CallResolution {
  Resolved,
  Undeclared,   // identifier callee with no declaration in scope
  Ambiguous,    // more than one function declaration in the binding scope
  NotAFunction, // identifier bound to a variable or parameter
  Dynamic,      // member or computed callee (method call)
  External,     // well-known host global such as Date or parseInt
};

std::string_view resolutionName(CallResolution resolution);

struct CallSite {
  std::uint32_t id = 0;
  /// Innermost statement containing the call.
  std::uint32_t stmtId = 0;
  Owner owner;
  std::optional<std::uint32_t> enclosingFunction;
  std::string calleeName;
  CallResolution resolution = CallResolution::Undeclared;
  /// Index into SourceProgram::declarations when resolved.
  std::optional<std::size_t> callee;
  /// Annotations attached to the containing statement.
  std::vector<AnnotationKind> annotations;
  Span span;
};

/// A resolved identifier occurrence inside a statement.
struct Reference {
  std::uint32_t stmtId = 0;
  std::size_t declaration = 0;
  bool write = false;
};

struct Diagnostic {
  SourcePos pos;
  std::string message;
};

struct ConfigEntry {
  std::string slice;
  Tier tier = Tier::Client;
};

/// Position of one top-level item in source order.
struct TopLevelItem {
  bool isSlice = false;
  std::size_t index = 0;
};

struct StatementCounts {
  std::vector<std::size_t> perSlice;
  std::size_t shared = 0;
  std::size_t total = 0;
};

struct SourceProgram {
  std::vector<SliceDecl> slices;
  std::vector<Stmt> shared;
  std::vector<TopLevelItem> layout;
  std::vector<ConfigEntry> config;

  // Filled by the indexer (parse) and the resolver (resolveCalls).
  std::vector<Declaration> declarations;
  std::vector<CallSite> callSites;
  std::vector<Reference> references;
  std::map<std::uint32_t, std::vector<Annotation>> annotationsByNode;
  /// Parent of every function scope; scope 0 is the program scope.
  std::vector<std::uint32_t> scopeParents;
  std::uint32_t statementCount = 0;
  bool resolved = false;
  std::vector<Diagnostic> warnings;

  std::optional<std::size_t> findSlice(std::string_view name) const;
};

StatementCounts countStatements(const SourceProgram& program);

}  // namespace tierslice
