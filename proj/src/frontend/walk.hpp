#pragma once

#include <cstdint>
#include <optional>
#include <type_traits>

#include "tierslice/source.hpp"

namespace tierslice::detail {

struct WalkContext {
  Owner owner;
  /// Innermost enclosing function declaration (statement id).
  std::optional<std::uint32_t> function;
  std::uint32_t scope = 0;
};

/// Preorder traversal shared by every pass over the tree. Scope ids are handed
/// out in visiting order, so two walks over the same tree agree on them.
///
/// Visitor hooks:
///   onStmt(stmt, ctx)                       before children
///   onExpr(expr, stmt, ctx)                 before operands
///   onScope(params, stmt, outer, inner)     entering a function scope
template <class Program, class Visitor>
class Walker {
  static constexpr bool kConst = std::is_const_v<Program>;
  using S = std::conditional_t<kConst, const Stmt, Stmt>;
  using E = std::conditional_t<kConst, const Expr, Expr>;

 public:
  explicit Walker(Visitor& visitor) : v_(visitor) {}

  void program(Program& p) {
    for (const auto& item : p.layout) {
      if (item.isSlice) {
        WalkContext ctx{item.index, std::nullopt, 0};
        for (auto& s : p.slices[item.index].body) stmt(s, ctx);
      } else {
        stmt(p.shared[item.index], WalkContext{});
      }
    }
  }

 private:
  void stmt(S& s, const WalkContext& ctx) {
    v_.onStmt(s, ctx);
    if (s.kind == StmtKind::FunctionDecl) {
      WalkContext inner{ctx.owner, s.id, nextScope_++};
      v_.onScope(s.params, s, ctx, inner);
      for (auto& b : s.body) stmt(b, inner);
      return;
    }
    if (s.kind == StmtKind::For)
      for (auto& a : s.alt) stmt(a, ctx);
    for (auto& b : s.bindings)
      for (auto& e : b.init) expr(e, s, ctx);
    for (auto& e : s.exprs) expr(e, s, ctx);
    for (auto& b : s.body) stmt(b, ctx);
    if (s.kind != StmtKind::For)
      for (auto& a : s.alt) stmt(a, ctx);
  }

  void expr(E& e, S& owner, const WalkContext& ctx) {
    v_.onExpr(e, owner, ctx);
    for (auto& op : e.operands) expr(op, owner, ctx);
    if (e.kind == ExprKind::Function) {
      WalkContext inner{ctx.owner, ctx.function, nextScope_++};
      v_.onScope(e.keys, owner, ctx, inner);
      for (auto& b : e.body) stmt(b, inner);
    }
  }

  Visitor& v_;
  std::uint32_t nextScope_ = 1;
};

template <class Program, class Visitor>
void walk(Program& program, Visitor& visitor) {
  Walker<Program, Visitor>(visitor).program(program);
}

}  // namespace tierslice::detail
