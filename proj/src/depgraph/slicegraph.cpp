#include <algorithm>
#include <limits>
#include <map>
#include <tuple>

#include "tierslice/depgraph.hpp"

namespace tierslice {

namespace {

// Shared sorts after every slice.
std::size_t ownerKey(const Owner& owner) {
  return owner ? *owner : std::numeric_limits<std::size_t>::max();
}

bool isUnresolved(CallResolution r) {
  return r == CallResolution::Undeclared || r == CallResolution::Ambiguous ||
         r == CallResolution::NotAFunction;
}

std::vector<CallRecord> callRecords(const DependenceGraph& graph) {
  std::vector<CallRecord> calls;
  for (const auto& e : graph.edges) {
    if (e.kind != PdgEdgeKind::Call) continue;
    const PdgNode& site = graph.nodes.at(e.from);
    const PdgNode& target = graph.nodes.at(e.to);
    CallRecord c;
    c.node = site.id;
    c.caller = site.owner;
    c.callee = target.owner;
    c.calleeFunction = target.id;
    c.callerFunction = site.function;
    c.replyOrBroadcast = site.has(AnnotationKind::Reply) || site.has(AnnotationKind::Broadcast);
    c.pos = site.span.begin;
    calls.push_back(c);
  }
  std::sort(calls.begin(), calls.end(),
            [](const CallRecord& a, const CallRecord& b) { return a.node < b.node; });
  return calls;
}

}  // namespace

std::optional<SliceEdge> crossingOf(const DependenceGraph& graph, const PdgEdge& edge) {
  const PdgNode& from = graph.nodes.at(edge.from);
  const PdgNode& to = graph.nodes.at(edge.to);
  if (from.kind == PdgNodeKind::Entry || to.kind == PdgNodeKind::Entry) return std::nullopt;
  if (from.owner == to.owner) return std::nullopt;
  // A def-use edge means the reader depends on the definer.
  if (edge.kind == PdgEdgeKind::Data) return SliceEdge{to.owner, from.owner, edge.kind, 1};
  return SliceEdge{from.owner, to.owner, edge.kind, 1};
}

SliceGraph collapseToSliceGraph(const DependenceGraph& graph) {
  SliceGraph out;
  out.slices = graph.slices;
  std::map<std::tuple<std::size_t, std::size_t, int>, SliceEdge> aggregated;
  for (const auto& e : graph.edges) {
    const auto crossing = crossingOf(graph, e);
    if (!crossing) continue;
    const auto key = std::make_tuple(ownerKey(crossing->from), ownerKey(crossing->to),
                                     static_cast<int>(crossing->kind));
    auto [it, inserted] = aggregated.try_emplace(key, *crossing);
    if (!inserted) ++it->second.count;
  }
  for (auto& [key, edge] : aggregated) out.edges.push_back(edge);
  out.calls = callRecords(graph);
  for (const auto& n : graph.nodes)
    if (n.kind == PdgNodeKind::CallSite && isUnresolved(n.resolution)) ++out.unresolvedCalls;
  return out;
}

CallInventory callInventory(const DependenceGraph& graph) {
  CallInventory inv;
  for (std::size_t i = 0; i < graph.slices.size(); ++i) inv.rows.push_back({Owner{i}, {}});
  inv.rows.push_back({std::nullopt, {}});
  for (const auto& c : callRecords(graph))
    inv.rows[c.caller ? *c.caller : graph.slices.size()].calls.push_back(c);
  for (const auto& n : graph.nodes) {
    if (n.kind != PdgNodeKind::CallSite) continue;
    if (isUnresolved(n.resolution))
      ++inv.unresolvedCalls;
    else if (n.resolution != CallResolution::Resolved)
      ++inv.externalCalls;
  }
  return inv;
}

}  // namespace tierslice
