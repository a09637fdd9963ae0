#include <sstream>

#include "json.hpp"
#include "tierslice/depgraph.hpp"

namespace tierslice {

using nlohmann::ordered_json;

namespace {

constexpr PdgNodeKind kNodeKinds[] = {PdgNodeKind::Entry, PdgNodeKind::Statement,
                                      PdgNodeKind::Declaration, PdgNodeKind::FunctionEntry,
                                      PdgNodeKind::CallSite};
constexpr PdgEdgeKind kEdgeKinds[] = {PdgEdgeKind::Control, PdgEdgeKind::Data,
                                      PdgEdgeKind::Call};
constexpr CallResolution kResolutions[] = {
    CallResolution::Resolved, CallResolution::Undeclared, CallResolution::Ambiguous,
    CallResolution::NotAFunction, CallResolution::Dynamic, CallResolution::External};

[[noreturn]] void bad(const std::string& what) {
  throw Error(ErrorCode::BadInput, "graph JSON: " + what);
}

template <class Enum, std::size_t N, class NameFn>
Enum enumFromName(const Enum (&values)[N], NameFn nameOf, const std::string& name,
                  const char* what) {
  for (const auto v : values)
    if (nameOf(v) == name) return v;
  bad(std::string("unknown ") + what + " '" + name + "'");
}

ordered_json posJson(const SourcePos& p) {
  return {{"offset", p.offset}, {"line", p.line}, {"column", p.column}};
}

SourcePos posFromJson(const ordered_json& j) {
  return {j.at("offset").get<std::size_t>(), j.at("line").get<std::size_t>(),
          j.at("column").get<std::size_t>()};
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string toJson(const DependenceGraph& graph) {
  ordered_json slices = ordered_json::array();
  for (const auto& s : graph.slices) {
    ordered_json j = {{"name", s.name}};
    if (s.fixedTier) j["tier"] = tierName(*s.fixedTier);
    slices.push_back(std::move(j));
  }
  ordered_json nodes = ordered_json::array();
  for (const auto& n : graph.nodes) {
    ordered_json j = {{"id", n.id}, {"kind", nodeKindName(n.kind)}};
    j["slice"] = n.owner ? ordered_json(graph.slices.at(*n.owner).name) : ordered_json(nullptr);
    j["span"] = {{"begin", posJson(n.span.begin)}, {"end", posJson(n.span.end)}};
    if (!n.name.empty()) j["name"] = n.name;
    if (n.function) j["function"] = *n.function;
    if (!n.annotations.empty()) {
      ordered_json anns = ordered_json::array();
      for (const auto a : n.annotations) anns.push_back(annotationName(a));
      j["annotations"] = std::move(anns);
    }
    if (n.kind == PdgNodeKind::CallSite) j["resolution"] = resolutionName(n.resolution);
    nodes.push_back(std::move(j));
  }
  ordered_json edges = ordered_json::array();
  for (const auto& e : graph.edges)
    edges.push_back({{"from", e.from}, {"to", e.to}, {"kind", edgeKindName(e.kind)}});
  ordered_json root = {{"slices", std::move(slices)}, {"nodes", std::move(nodes)},
                       {"edges", std::move(edges)}};
  return root.dump(2) + "\n";
}

DependenceGraph dependenceGraphFromJson(const std::string& text) {
  DependenceGraph g;
  try {
    const auto root = ordered_json::parse(text);
    for (const auto& s : root.at("slices")) {
      SliceInfo info{s.at("name").get<std::string>(), std::nullopt};
      if (s.contains("tier")) {
        const auto tier = tierFromName(s.at("tier").get<std::string>());
        if (!tier || *tier == Tier::Both) bad("slice '" + info.name + "' has a bad tier");
        info.fixedTier = tier;
      }
      for (const auto& existing : g.slices)
        if (existing.name == info.name) bad("duplicate slice '" + info.name + "'");
      g.slices.push_back(std::move(info));
    }
    for (const auto& j : root.at("nodes")) {
      PdgNode n;
      n.id = j.at("id").get<std::uint32_t>();
      if (n.id != g.nodes.size()) bad("node ids must be 0..n-1 in order");
      n.kind = enumFromName(kNodeKinds, nodeKindName, j.at("kind").get<std::string>(), "node kind");
      const auto& slice = j.at("slice");
      if (!slice.is_null()) {
        const auto name = slice.get<std::string>();
        for (std::size_t i = 0; i < g.slices.size(); ++i)
          if (g.slices[i].name == name) n.owner = i;
        if (!n.owner) bad("node " + std::to_string(n.id) + " names unknown slice '" + name + "'");
      }
      if (j.contains("span")) {
        n.span.begin = posFromJson(j.at("span").at("begin"));
        n.span.end = posFromJson(j.at("span").at("end"));
      }
      if (j.contains("name")) n.name = j.at("name").get<std::string>();
      if (j.contains("function")) n.function = j.at("function").get<std::uint32_t>();
      if (j.contains("annotations")) {
        for (const auto& a : j.at("annotations")) {
          const auto kind = annotationFromName(a.get<std::string>());
          if (!kind) bad("unknown annotation '" + a.get<std::string>() + "'");
          n.annotations.push_back(*kind);
        }
      }
      if (j.contains("resolution"))
        n.resolution = enumFromName(kResolutions, resolutionName,
                                    j.at("resolution").get<std::string>(), "resolution");
      g.nodes.push_back(std::move(n));
    }
    if (g.nodes.empty() || g.nodes[0].kind != PdgNodeKind::Entry) bad("node 0 must be the entry");
    for (const auto& j : root.at("edges")) {
      PdgEdge e;
      e.from = j.at("from").get<std::uint32_t>();
      e.to = j.at("to").get<std::uint32_t>();
      e.kind = enumFromName(kEdgeKinds, edgeKindName, j.at("kind").get<std::string>(), "edge kind");
      if (e.from >= g.nodes.size() || e.to >= g.nodes.size()) bad("edge endpoint out of range");
      if (e.kind == PdgEdgeKind::Call && (g.nodes[e.from].kind != PdgNodeKind::CallSite ||
                                          g.nodes[e.to].kind != PdgNodeKind::FunctionEntry))
        bad("call edges must go from a call site to a function");
      g.edges.push_back(e);
    }
    for (const auto& n : g.nodes)
      if (n.function && (*n.function >= g.nodes.size() ||
                         g.nodes[*n.function].kind != PdgNodeKind::FunctionEntry))
        bad("node " + std::to_string(n.id) + " has a bad enclosing function");
  } catch (const nlohmann::json::exception& e) {
    bad(e.what());
  }
  return g;
}

std::string toDot(const SliceGraph& graph) {
  std::ostringstream out;
  out << "digraph slices {\n  rankdir=LR;\n  node [shape=box];\n";
  bool sharedUsed = false;
  for (const auto& e : graph.edges) sharedUsed = sharedUsed || !e.from || !e.to;
  for (const auto& s : graph.slices) {
    out << "  " << quoted(s.name) << " [label=" << quoted(s.name);
    if (s.fixedTier) out << ", xlabel=" << quoted(std::string(tierName(*s.fixedTier)));
    out << "];\n";
  }
  if (sharedUsed) out << "  \"Shared\" [style=dashed];\n";
  for (const auto& e : graph.edges) {
    out << "  " << quoted(ownerLabel(e.from, graph.slices)) << " -> "
        << quoted(ownerLabel(e.to, graph.slices)) << " [label="
        << quoted(std::string(edgeKindName(e.kind)) + " " + std::to_string(e.count));
    if (e.kind == PdgEdgeKind::Data) out << ", style=dashed";
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace tierslice
