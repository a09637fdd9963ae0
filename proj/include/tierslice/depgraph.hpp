#pragma once

// Program dependence graph over an analyzed SourceProgram, and its collapse
// into a slice-level graph.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tierslice/source.hpp"

namespace tierslice {

enum class PdgNodeKind { Entry, Statement, Declaration, FunctionEntry, CallSite };
enum class PdgEdgeKind { Control, Data, Call };

std::string_view nodeKindName(PdgNodeKind kind);
std::string_view edgeKindName(PdgEdgeKind kind);

struct PdgNode {
  std::uint32_t id = 0;
  PdgNodeKind kind = PdgNodeKind::Statement;
  Owner owner;
  Span span;
  /// Declared name (Declaration, FunctionEntry) or callee text (CallSite).
  std::string name;
  /// FunctionEntry node of the innermost enclosing function declaration.
  std::optional<std::uint32_t> function;
  /// Annotations of the statement the node comes from.
  std::vector<AnnotationKind> annotations;
  /// CallSite only.
  CallResolution resolution = CallResolution::Resolved;

  bool has(AnnotationKind kind) const;
};

struct PdgEdge {
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  PdgEdgeKind kind = PdgEdgeKind::Control;

  friend bool operator==(const PdgEdge&, const PdgEdge&) = default;
};

struct SliceInfo {
  std::string name;
  std::optional<Tier> fixedTier;

  friend bool operator==(const SliceInfo&, const SliceInfo&) = default;
};

struct DependenceGraph {
  std::vector<SliceInfo> slices;
  /// Node 0 is the Entry node.
  std::vector<PdgNode> nodes;
  std::vector<PdgEdge> edges;
};

/// Builds the PDG of a program whose calls have been resolved. Node ids follow
/// source order; @ui blocks get no nodes.
DependenceGraph buildPdg(const SourceProgram& program);

/// One resolved call site seen from the slice level.
struct CallRecord {
  std::uint32_t node = 0;
  Owner caller;
  Owner callee;
  /// FunctionEntry node of the called function.
  std::uint32_t calleeFunction = 0;
  /// FunctionEntry of the function containing the call, if any.
  std::optional<std::uint32_t> callerFunction;
  /// The call site carries @reply or @broadcast.
  bool replyOrBroadcast = false;
  SourcePos pos;

  friend bool operator==(const CallRecord&, const CallRecord&) = default;
};

/// Aggregated dependencies between two distinct slices (or a slice and the
/// shared code). Direction is "depends on": a call edge points from caller to
/// callee, a data edge from the reading slice to the defining slice.
struct SliceEdge {
  Owner from;
  Owner to;
  PdgEdgeKind kind = PdgEdgeKind::Call;
  std::size_t count = 0;

  friend bool operator==(const SliceEdge&, const SliceEdge&) = default;
};

struct SliceGraph {
  std::vector<SliceInfo> slices;
  std::vector<SliceEdge> edges;
  /// Every resolved call, including intra-slice ones.
  std::vector<CallRecord> calls;
  /// Calls that could not be resolved to a single declared function.
  std::size_t unresolvedCalls = 0;

  friend bool operator==(const SliceGraph&, const SliceGraph&) = default;
};

SliceGraph collapseToSliceGraph(const DependenceGraph& graph);

struct InventoryRow {
  Owner slice;
  std::vector<CallRecord> calls;
};

struct CallInventory {
  /// One row per slice in declaration order, then a row for shared code.
  std::vector<InventoryRow> rows;
  std::size_t unresolvedCalls = 0;
  /// Method calls and host-global calls; they never reach a slice.
  std::size_t externalCalls = 0;
};

CallInventory callInventory(const DependenceGraph& graph);

/// The slice-level dependence direction of a PDG edge, or nothing when the
/// edge stays inside one owner or leaves the Entry node.
std::optional<SliceEdge> crossingOf(const DependenceGraph& graph, const PdgEdge& edge);

std::string ownerLabel(const Owner& owner, const std::vector<SliceInfo>& slices);

// Serialization. The JSON form is the full PDG; reading it back and
// collapsing gives the same SliceGraph as collapsing the original.
std::string toJson(const DependenceGraph& graph);
DependenceGraph dependenceGraphFromJson(const std::string& text);
std::string toDot(const SliceGraph& graph);

}  // namespace tierslice
