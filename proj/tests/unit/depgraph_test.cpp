#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "doctest.h"
#include "tierslice/depgraph.hpp"
#include "tierslice/frontend.hpp"

using namespace tierslice;

namespace {

std::string readFixture(const std::string& name) {
  std::ifstream in(std::string(TIERSLICE_SOURCE_DIR) + "/fixtures/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const SliceEdge* findEdge(const SliceGraph& g, const std::string& from, const std::string& to,
                          PdgEdgeKind kind) {
  for (const auto& e : g.edges)
    if (ownerLabel(e.from, g.slices) == from && ownerLabel(e.to, g.slices) == to && e.kind == kind)
      return &e;
  return nullptr;
}

SliceGraph sliceGraphOf(const std::string& text) {
  return collapseToSliceGraph(buildPdg(analyze(text)));
}

}  // namespace

TEST_CASE("tasks slice graph") {
  const auto g = sliceGraphOf(readFixture("tasks.tjs"));
  const auto* call1 = findEdge(g, "browser", "sorting", PdgEdgeKind::Call);
  const auto* call2 = findEdge(g, "browser", "statistics", PdgEdgeKind::Call);
  REQUIRE(call1);
  REQUIRE(call2);
  CHECK(call1->count == 1);
  CHECK(call2->count == 1);
  CHECK(findEdge(g, "browser", "data", PdgEdgeKind::Data));
  CHECK(findEdge(g, "sorting", "data", PdgEdgeKind::Data));
  CHECK(findEdge(g, "statistics", "data", PdgEdgeKind::Data));
  for (const auto& e : g.edges) {
    CHECK(ownerLabel(e.to, g.slices) != "browser");
    CHECK(ownerLabel(e.from, g.slices) != "data");
  }
  CHECK(g.edges.size() == 5);
  CHECK(g.unresolvedCalls == 0);
}

TEST_CASE("single empty slice has only the entry node") {
  const auto pdg = buildPdg(analyze("/* @slice a */ {}"));
  REQUIRE(pdg.nodes.size() == 1);
  CHECK(pdg.nodes[0].kind == PdgNodeKind::Entry);
  CHECK(collapseToSliceGraph(pdg).edges.empty());
}

TEST_CASE("def in one slice, read in another") {
  const auto pdg = buildPdg(analyze(
      "/* @slice A */ { var x = 1; }\n"
      "/* @slice B */ { f(x); }\n"));
  std::size_t data = 0;
  for (const auto& e : pdg.edges) data += e.kind == PdgEdgeKind::Data;
  CHECK(data == 1);
  const auto g = collapseToSliceGraph(pdg);
  REQUIRE(g.edges.size() == 1);
  CHECK(ownerLabel(g.edges[0].from, g.slices) == "B");
  CHECK(ownerLabel(g.edges[0].to, g.slices) == "A");
  CHECK(g.edges[0].kind == PdgEdgeKind::Data);
  CHECK(g.unresolvedCalls == 1);
}

TEST_CASE("three calls aggregate into one edge") {
  const auto g = sliceGraphOf(
      "/* @slice B */ { function f() {} }\n"
      "/* @slice A */ { f(); f(); function h() { f(); } }\n");
  const auto* e = findEdge(g, "A", "B", PdgEdgeKind::Call);
  REQUIRE(e);
  CHECK(e->count == 3);
  CHECK(g.edges.size() == 1);
  CHECK(g.calls.size() == 3);
}

TEST_CASE("one slice gives no slice edges") {
  const auto g = sliceGraphOf("/* @slice A */ { var x = 1; function f() { return x; } f(); }");
  CHECK(g.edges.empty());
  CHECK(g.calls.size() == 1);
}

TEST_CASE("node invariants") {
  const auto pdg = buildPdg(analyze(readFixture("tasks.tjs")));
  std::size_t entries = 0, functions = 0;
  for (const auto& n : pdg.nodes) {
    entries += n.kind == PdgNodeKind::Entry;
    functions += n.kind == PdgNodeKind::FunctionEntry;
  }
  CHECK(entries == 1);
  CHECK(functions == 5);
  for (const auto& e : pdg.edges) {
    if (e.kind == PdgEdgeKind::Call) {
      CHECK(pdg.nodes[e.from].kind == PdgNodeKind::CallSite);
      CHECK(pdg.nodes[e.to].kind == PdgNodeKind::FunctionEntry);
    }
    if (e.kind == PdgEdgeKind::Data) {
      const auto k = pdg.nodes[e.from].kind;
      CHECK(k != PdgNodeKind::CallSite);
      CHECK(k != PdgNodeKind::Entry);
    }
  }
}

TEST_CASE("call inside a loop counts once") {
  const auto g = sliceGraphOf(
      "/* @slice B */ { function f() {} }\n"
      "/* @slice A */ { for (var i = 0; i < 10; i++) { f(); } }\n");
  CHECK(g.calls.size() == 1);
}

TEST_CASE("call inventory") {
  const auto pdg = buildPdg(analyze(
      "function util() {}\n"
      "/* @slice B */ { function g() {} }\n"
      "/* @slice A */ { function f() {} f(); f(); g(); g(); g(); util(); }\n"
      "/* @slice C */ { }\n"));
  const auto inv = callInventory(pdg);
  REQUIRE(inv.rows.size() == 4);
  CHECK(inv.rows[0].calls.empty());
  CHECK(inv.rows[1].calls.size() == 6);
  CHECK(inv.rows[2].calls.empty());
  CHECK_FALSE(inv.rows[3].slice);
  std::size_t toShared = 0;
  for (const auto& c : inv.rows[1].calls) toShared += !c.callee;
  CHECK(toShared == 1);
}

TEST_CASE("collapse agrees with a brute-force double loop") {
  const auto pdg = buildPdg(analyze(readFixture("tasks.tjs")));
  const auto g = collapseToSliceGraph(pdg);
  std::map<std::tuple<std::string, std::string, int>, std::size_t> brute;
  for (const auto& e : pdg.edges) {
    const auto& a = pdg.nodes[e.from];
    const auto& b = pdg.nodes[e.to];
    if (a.kind == PdgNodeKind::Entry || a.owner == b.owner) continue;
    auto from = ownerLabel(a.owner, pdg.slices), to = ownerLabel(b.owner, pdg.slices);
    if (e.kind == PdgEdgeKind::Data) std::swap(from, to);
    ++brute[{from, to, static_cast<int>(e.kind)}];
  }
  std::size_t total = 0;
  for (const auto& e : g.edges) {
    const auto key = std::make_tuple(ownerLabel(e.from, g.slices), ownerLabel(e.to, g.slices),
                                     static_cast<int>(e.kind));
    CHECK(brute[key] == e.count);
    total += e.count;
  }
  std::size_t bruteTotal = 0;
  for (const auto& [k, n] : brute) bruteTotal += n;
  CHECK(total == bruteTotal);
}

TEST_CASE("json round trip and determinism") {
  const auto program = analyze(readFixture("tasks.tjs"));
  const auto pdg = buildPdg(program);
  const auto again = buildPdg(program);
  CHECK(toJson(pdg) == toJson(again));
  const auto back = dependenceGraphFromJson(toJson(pdg));
  CHECK(toJson(back) == toJson(pdg));
  CHECK(collapseToSliceGraph(back) == collapseToSliceGraph(pdg));
}

TEST_CASE("bad graph json") {
  CHECK_THROWS_AS(dependenceGraphFromJson("{"), Error);
  CHECK_THROWS_AS(dependenceGraphFromJson(R"({"slices":[],"nodes":[],"edges":[]})"), Error);
  CHECK_THROWS_AS(
      dependenceGraphFromJson(
          R"({"slices":[],"nodes":[{"id":0,"kind":"entry","slice":null}],"edges":[{"from":0,"to":3,"kind":"data"}]})"),
      Error);
}

TEST_CASE("dot export") {
  const auto dot = toDot(sliceGraphOf(readFixture("tasks.tjs")));
  CHECK(dot.find("digraph") == 0);
  CHECK(dot.find("\"browser\" -> \"sorting\"") != std::string::npos);
  const auto single = toDot(sliceGraphOf("/* @slice only */ { var x = 1; }"));
  CHECK(single.find("->") == std::string::npos);
  CHECK(single.find("\"only\"") != std::string::npos);
}
