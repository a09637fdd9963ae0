// Indexing (ids, declarations, call sites, config) and lexical resolution.

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "tierslice/frontend.hpp"
#include "walk.hpp"

namespace tierslice {

namespace {

using detail::WalkContext;

// Host globals that are called without a TierJS declaration. Calls to these
// are classified External and never produce a warning.
constexpr std::array<std::string_view, 26> kHostGlobals = {
    "Array",      "Boolean",       "Date",         "Error",     "JSON",
    "Math",       "Number",        "Object",       "Promise",   "RegExp",
    "String",     "alert",         "clearInterval", "clearTimeout", "confirm",
    "console",    "decodeURIComponent", "document", "encodeURIComponent", "isNaN",
    "parseFloat", "parseInt",      "require",      "setInterval", "setTimeout",
    "window",
};

bool isHostGlobal(std::string_view name) {
  return std::find(kHostGlobals.begin(), kHostGlobals.end(), name) != kHostGlobals.end();
}

std::string calleeText(const Expr& callee) {
  switch (callee.kind) {
    case ExprKind::Identifier:
    case ExprKind::Member:
      return callee.text;
    default:
      return {};
  }
}

class Indexer {
 public:
  explicit Indexer(SourceProgram& p) : p_(p) {}

  void onStmt(Stmt& s, const WalkContext& ctx) {
    s.id = nextStmt_++;
    if (!s.annotations.empty()) p_.annotationsByNode[s.id] = s.annotations;
    if (s.kind == StmtKind::VarDecl) {
      for (const auto& b : s.bindings)
        declare(b.name, DeclKind::Var, s, ctx, ctx.scope,
                hasAnnotation(s.annotations, AnnotationKind::Replicated));
    } else if (s.kind == StmtKind::FunctionDecl) {
      declare(s.name, DeclKind::Function, s, ctx, ctx.scope,
              hasAnnotation(s.annotations, AnnotationKind::Replicated));
    }
  }

  void onExpr(Expr& e, const Stmt& s, const WalkContext& ctx) {
    if (e.kind != ExprKind::Call && e.kind != ExprKind::New) {
      e.callId = -1;
      return;
    }
    e.callId = static_cast<std::int32_t>(p_.callSites.size());
    CallSite call;
    call.id = static_cast<std::uint32_t>(p_.callSites.size());
    call.stmtId = s.id;
    call.owner = ctx.owner;
    call.enclosingFunction = ctx.function;
    call.calleeName = calleeText(e.operands.front());
    call.resolution = e.operands.front().kind == ExprKind::Identifier ? CallResolution::Undeclared
                                                                      : CallResolution::Dynamic;
    for (const auto& a : s.annotations) call.annotations.push_back(a.kind);
    call.span = e.span;
    p_.callSites.push_back(std::move(call));
  }

  void onScope(const std::vector<std::string>& params, const Stmt& s, const WalkContext& outer,
               const WalkContext& inner) {
    if (p_.scopeParents.size() <= inner.scope) p_.scopeParents.resize(inner.scope + 1, 0);
    p_.scopeParents[inner.scope] = outer.scope;
    for (const auto& name : params) declare(name, DeclKind::Param, s, inner, inner.scope, false);
  }

  std::uint32_t statements() const { return nextStmt_; }

 private:
  void declare(const std::string& name, DeclKind kind, const Stmt& s, const WalkContext& ctx,
               std::uint32_t scope, bool replicated) {
    Declaration d;
    d.name = name;
    d.kind = kind;
    d.owner = ctx.owner;
    d.stmtId = s.id;
    d.enclosingFunction = ctx.function;
    d.scopeId = scope;
    d.replicated = replicated;
    d.span = s.span;
    p_.declarations.push_back(std::move(d));
  }

  SourceProgram& p_;
  std::uint32_t nextStmt_ = 0;
};

void collectConfig(SourceProgram& program) {
  std::vector<const Annotation*> configs;
  for (const auto& item : program.layout) {
    const auto& anns = item.isSlice ? program.slices[item.index].annotations
                                    : program.shared[item.index].annotations;
    for (const auto& a : anns)
      if (a.kind == AnnotationKind::Config) configs.push_back(&a);
  }
  for (auto& slice : program.slices) slice.fixedTier.reset();
  for (const Annotation* a : configs) {
    for (const auto& arg : a->args) {
      const auto index = program.findSlice(arg.name);
      if (!index)
        throw ParseError(ErrorCode::MalformedConfig, a->span.begin,
                         "@config names undeclared slice '" + arg.name + "'");
      const Tier tier = *tierFromName(arg.value);
      auto& slice = program.slices[*index];
      if (slice.fixedTier && *slice.fixedTier != tier)
        throw ParseError(ErrorCode::MalformedConfig, a->span.begin,
                         "slice '" + arg.name + "' is configured for two tiers");
      if (!slice.fixedTier) program.config.push_back({arg.name, tier});
      slice.fixedTier = tier;
    }
  }
}

class Resolver {
 public:
  explicit Resolver(SourceProgram& p) : p_(p) {
    for (std::size_t i = 0; i < p_.declarations.size(); ++i) {
      const auto& d = p_.declarations[i];
      byScope_[{d.scopeId, d.name}].push_back(i);
    }
  }

  void onStmt(const Stmt&, const WalkContext&) {}
  void onScope(const std::vector<std::string>&, const Stmt&, const WalkContext&,
               const WalkContext&) {}

  void onExpr(const Expr& e, const Stmt& s, const WalkContext& ctx) {
    if (handled_.erase(&e) > 0) return;
    switch (e.kind) {
      case ExprKind::Call:
      case ExprKind::New:
        resolveCall(e, s, ctx);
        break;
      case ExprKind::Assign:
        if (e.operands[0].kind == ExprKind::Identifier) {
          handled_.insert(&e.operands[0]);
          reference(e.operands[0].text, s, ctx, true);
          if (e.text != "=") reference(e.operands[0].text, s, ctx, false);
        }
        break;
      case ExprKind::Unary:
      case ExprKind::Postfix:
        if ((e.text == "++" || e.text == "--") && e.operands[0].kind == ExprKind::Identifier) {
          handled_.insert(&e.operands[0]);
          reference(e.operands[0].text, s, ctx, false);
          reference(e.operands[0].text, s, ctx, true);
        }
        break;
      case ExprKind::Identifier:
        reference(e.text, s, ctx, false);
        break;
      default:
        break;
    }
  }

 private:
  // Declarations binding `name` at the innermost scope that declares it.
  const std::vector<std::size_t>* lookup(const std::string& name, std::uint32_t scope) const {
    for (;;) {
      const auto it = byScope_.find({scope, name});
      if (it != byScope_.end()) return &it->second;
      if (scope == 0) return nullptr;
      scope = p_.scopeParents[scope];
    }
  }

  // Several `var x` in one scope are one variable; the first declaration
  // stands for it.
  std::optional<std::size_t> variable(const std::vector<std::size_t>& decls) const {
    for (const auto i : decls)
      if (p_.declarations[i].kind != DeclKind::Function) return i;
    return std::nullopt;
  }

  void reference(const std::string& name, const Stmt& s, const WalkContext& ctx, bool write) {
    const auto* decls = lookup(name, ctx.scope);
    if (!decls) return;
    std::optional<std::size_t> target = variable(*decls);
    if (!target) {
      // Reads of a function name (e.g. passing it as a callback).
      if (write || decls->size() != 1) return;
      target = decls->front();
    }
    p_.references.push_back({s.id, *target, write});
  }

  void resolveCall(const Expr& e, const Stmt& s, const WalkContext& ctx) {
    CallSite& call = p_.callSites.at(static_cast<std::size_t>(e.callId));
    const Expr& callee = e.operands.front();
    if (callee.kind != ExprKind::Identifier) {
      call.resolution = CallResolution::Dynamic;
      return;
    }
    handled_.insert(&callee);
    const auto* decls = lookup(callee.text, ctx.scope);
    if (!decls) {
      call.resolution =
          isHostGlobal(callee.text) ? CallResolution::External : CallResolution::Undeclared;
    } else {
      std::vector<std::size_t> functions;
      for (const auto i : *decls)
        if (p_.declarations[i].kind == DeclKind::Function) functions.push_back(i);
      const bool hasVariable = variable(*decls).has_value();
      if (functions.size() == 1 && !hasVariable) {
        call.resolution = CallResolution::Resolved;
        call.callee = functions.front();
      } else if (functions.size() > 1 || (!functions.empty() && hasVariable)) {
        call.resolution = CallResolution::Ambiguous;
      } else {
        call.resolution = CallResolution::NotAFunction;
        reference(callee.text, s, ctx, false);
      }
    }
    if (call.resolution == CallResolution::Undeclared ||
        call.resolution == CallResolution::Ambiguous ||
        call.resolution == CallResolution::NotAFunction) {
      p_.warnings.push_back({call.span.begin, "call to '" + callee.text + "' is unresolved (" +
                                                  std::string(resolutionName(call.resolution)) +
                                                  "); a manual annotation is required"});
    }
  }

  SourceProgram& p_;
  std::map<std::pair<std::uint32_t, std::string>, std::vector<std::size_t>> byScope_;
  std::set<const Expr*> handled_;
};

}  // namespace

void reindex(SourceProgram& program) {
  program.declarations.clear();
  program.callSites.clear();
  program.references.clear();
  program.annotationsByNode.clear();
  program.scopeParents.assign(1, 0);
  program.config.clear();
  program.warnings.clear();
  program.resolved = false;
  Indexer indexer(program);
  detail::walk(program, indexer);
  program.statementCount = indexer.statements();
  collectConfig(program);
}

SourceProgram resolveCalls(SourceProgram program) {
  if (program.resolved) return program;
  program.references.clear();
  program.warnings.clear();
  for (auto& call : program.callSites) {
    call.callee.reset();
    call.resolution = CallResolution::Undeclared;
  }
  Resolver resolver(program);
  detail::walk(std::as_const(program), resolver);
  program.resolved = true;
  return program;
}

}  // namespace tierslice
