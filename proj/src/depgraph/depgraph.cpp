#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "tierslice/depgraph.hpp"
#include "tierslice/frontend.hpp"

namespace tierslice {

std::string_view nodeKindName(PdgNodeKind kind) {
  switch (kind) {
    case PdgNodeKind::Entry: return "entry";
    case PdgNodeKind::Statement: return "statement";
    case PdgNodeKind::Declaration: return "declaration";
    case PdgNodeKind::FunctionEntry: return "function";
    case PdgNodeKind::CallSite: return "call";
  }
  return "?";
}

std::string_view edgeKindName(PdgEdgeKind kind) {
  switch (kind) {
    case PdgEdgeKind::Control: return "control";
    case PdgEdgeKind::Data: return "data";
    case PdgEdgeKind::Call: return "call";
  }
  return "?";
}

bool PdgNode::has(AnnotationKind kind) const {
  return std::find(annotations.begin(), annotations.end(), kind) != annotations.end();
}

std::string ownerLabel(const Owner& owner, const std::vector<SliceInfo>& slices) {
  return owner ? slices.at(*owner).name : std::string("Shared");
}

namespace {

class Builder {
 public:
  explicit Builder(const SourceProgram& p) : p_(p) {}

  DependenceGraph run() {
    for (const auto& s : p_.slices) g_.slices.push_back({s.name, s.fixedTier});
    PdgNode entry;
    entry.kind = PdgNodeKind::Entry;
    g_.nodes.push_back(entry);

    for (const auto& item : p_.layout) {
      if (item.isSlice) {
        for (const auto& s : p_.slices[item.index].body) stmt(s, 0, item.index, std::nullopt);
      } else {
        stmt(p_.shared[item.index], 0, std::nullopt, std::nullopt);
      }
    }
    dataEdges();
    callEdges();
    return std::move(g_);
  }

 private:
  std::uint32_t add(PdgNodeKind kind, const Owner& owner, const Span& span, std::string name,
                    std::optional<std::uint32_t> function, const Stmt& s) {
    PdgNode n;
    n.id = static_cast<std::uint32_t>(g_.nodes.size());
    n.kind = kind;
    n.owner = owner;
    n.span = span;
    n.name = std::move(name);
    n.function = function;
    for (const auto& a : s.annotations) n.annotations.push_back(a.kind);
    g_.nodes.push_back(std::move(n));
    return g_.nodes.back().id;
  }

  void control(std::uint32_t from, std::uint32_t to) {
    g_.edges.push_back({from, to, PdgEdgeKind::Control});
  }

  void stmt(const Stmt& s, std::uint32_t parent, const Owner& owner,
            std::optional<std::uint32_t> function) {
    if (s.kind == StmtKind::Ui) return;
    std::uint32_t self = 0;
    if (s.kind == StmtKind::FunctionDecl) {
      self = add(PdgNodeKind::FunctionEntry, owner, s.span, s.name, function, s);
    } else if (s.kind == StmtKind::VarDecl) {
      for (std::size_t i = 0; i < s.bindings.size(); ++i) {
        const auto id = add(PdgNodeKind::Declaration, owner, s.span, s.bindings[i].name, function, s);
        bindingNode_.try_emplace({s.id, s.bindings[i].name}, id);
        if (i == 0) self = id;
        control(parent, id);
      }
    } else {
      self = add(PdgNodeKind::Statement, owner, s.span, {}, function, s);
    }
    stmtNode_[s.id] = self;
    if (s.kind != StmtKind::VarDecl) control(parent, self);

    if (s.kind == StmtKind::FunctionDecl) {
      for (const auto& b : s.body) stmt(b, self, owner, self);
      return;
    }
    // Call sites of the statement's own expressions come first, then nested
    // statements (function-expression bodies, blocks, branches).
    std::vector<const std::vector<Stmt>*> nested;
    if (s.kind == StmtKind::For)
      for (const auto& a : s.alt) stmt(a, self, owner, function);
    for (const auto& b : s.bindings)
      for (const auto& e : b.init) expr(e, s, self, owner, function, nested);
    for (const auto& e : s.exprs) expr(e, s, self, owner, function, nested);
    for (const auto* body : nested)
      for (const auto& b : *body) stmt(b, self, owner, function);
    for (const auto& b : s.body) stmt(b, self, owner, function);
    if (s.kind != StmtKind::For)
      for (const auto& a : s.alt) stmt(a, self, owner, function);
  }

  void expr(const Expr& e, const Stmt& s, std::uint32_t self, const Owner& owner,
            std::optional<std::uint32_t> function,
            std::vector<const std::vector<Stmt>*>& nested) {
    if (e.callId >= 0) {
      const CallSite& call = p_.callSites.at(static_cast<std::size_t>(e.callId));
      const auto id = add(PdgNodeKind::CallSite, owner, e.span, call.calleeName, function, s);
      g_.nodes[id].resolution = call.resolution;
      callNode_[call.id] = id;
      control(self, id);
    }
    for (const auto& op : e.operands) expr(op, s, self, owner, function, nested);
    if (e.kind == ExprKind::Function) nested.push_back(&e.body);
  }

  std::optional<std::uint32_t> declarationNode(std::size_t index) {
    const Declaration& d = p_.declarations[index];
    if (d.kind == DeclKind::Var) {
      const auto it = bindingNode_.find({d.stmtId, d.name});
      if (it != bindingNode_.end()) return it->second;
    }
    const auto it = stmtNode_.find(d.stmtId);
    if (it == stmtNode_.end()) return std::nullopt;
    return it->second;
  }

  void dataEdges() {
    std::map<std::size_t, std::set<std::uint32_t>> defs;
    for (std::size_t d = 0; d < p_.declarations.size(); ++d)
      if (const auto n = declarationNode(d)) defs[d].insert(*n);
    for (const auto& r : p_.references) {
      if (!r.write) continue;
      const auto it = stmtNode_.find(r.stmtId);
      if (it != stmtNode_.end()) defs[r.declaration].insert(it->second);
    }
    std::set<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (const auto& r : p_.references) {
      if (r.write) continue;
      const auto use = stmtNode_.find(r.stmtId);
      if (use == stmtNode_.end()) continue;
      for (const auto def : defs[r.declaration])
        if (def != use->second) edges.insert({def, use->second});
    }
    for (const auto& [from, to] : edges) g_.edges.push_back({from, to, PdgEdgeKind::Data});
  }

  void callEdges() {
    for (const auto& call : p_.callSites) {
      if (call.resolution != CallResolution::Resolved || !call.callee) continue;
      const auto site = callNode_.find(call.id);
      const auto target = declarationNode(*call.callee);
      if (site == callNode_.end() || !target) continue;
      g_.edges.push_back({site->second, *target, PdgEdgeKind::Call});
    }
  }

  const SourceProgram& p_;
  DependenceGraph g_;
  std::map<std::uint32_t, std::uint32_t> stmtNode_;
  std::map<std::uint32_t, std::uint32_t> callNode_;
  std::map<std::pair<std::uint32_t, std::string>, std::uint32_t> bindingNode_;
};

}  // namespace

DependenceGraph buildPdg(const SourceProgram& program) {
  if (!program.resolved) return Builder(resolveCalls(program)).run();
  return Builder(program).run();
}

}  // namespace tierslice
