#include "support.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "tierslice/frontend.hpp"

namespace tierslice::testing {

std::string fixturePath(const std::string& name) {
  return std::string(TIERSLICE_SOURCE_DIR) + "/fixtures/" + name;
}

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string readFixture(const std::string& name) { return readFile(fixturePath(name)); }

SliceGraph fixtureGraph(const std::string& name) {
  return collapseToSliceGraph(buildPdg(analyze(readFixture(name))));
}

SliceGraph makeGraph(const std::vector<SliceInfo>& slices, const std::vector<CallSpec>& calls) {
  SliceGraph g;
  g.slices = slices;
  std::uint32_t node = 1;
  for (const auto& c : calls) {
    CallRecord r;
    r.node = node++;
    if (c.caller >= 0) r.caller = static_cast<std::size_t>(c.caller);
    if (c.callee >= 0) r.callee = static_cast<std::size_t>(c.callee);
    r.calleeFunction = 1000 + static_cast<std::uint32_t>(c.callee + 1);
    r.replyOrBroadcast = c.replyOrBroadcast;
    g.calls.push_back(r);
  }
  return g;
}

SliceGraph randomGraph(std::mt19937_64& rng, const RandomGraphOptions& o) {
  auto below = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  auto chance = [&](double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; };
  const std::size_t n = 1 + below(o.maxSlices);
  std::vector<SliceInfo> slices;
  std::size_t unplaced = 0;
  for (std::size_t i = 0; i < n; ++i) {
    SliceInfo s{"s" + std::to_string(i), std::nullopt};
    if (unplaced >= o.maxUnplaced || chance(o.fixedShare))
      s.fixedTier = chance(0.5) ? Tier::Client : Tier::Server;
    else
      ++unplaced;
    slices.push_back(s);
  }
  std::vector<CallSpec> calls;
  const std::size_t m = below(o.maxCalls + 1);
  for (std::size_t i = 0; i < m; ++i) {
    CallSpec c;
    c.caller = chance(o.sharedShare) ? -1 : static_cast<int>(below(n));
    c.callee = chance(o.sharedShare) ? -1 : static_cast<int>(below(n));
    c.replyOrBroadcast = chance(o.replyShare);
    calls.push_back(c);
  }
  return makeGraph(slices, calls);
}

Placement randomPlacement(std::mt19937_64& rng, const std::vector<SliceInfo>& slices) {
  static constexpr Tier kTiers[] = {Tier::Client, Tier::Server, Tier::Both};
  Placement p = fixedPlacement(slices);
  for (const auto& s : slices)
    if (!s.fixedTier) p.searched[s.name] = kTiers[std::uniform_int_distribution<int>(0, 2)(rng)];
  return p;
}

namespace {

std::set<std::string> hosts(Tier t) {
  switch (t) {
    case Tier::Client: return {"client"};
    case Tier::Server: return {"server"};
    case Tier::Both: return {"client", "server"};
  }
  return {};
}

}  // namespace

bool bruteForceLocal(const SliceGraph& graph, const Placement& placement, const CallRecord& call) {
  if (!call.callee) return true;
  const auto callerHosts = hosts(*placement.tierOf(graph.slices.at(*call.caller).name));
  const auto calleeHosts = hosts(*placement.tierOf(graph.slices.at(*call.callee).name));
  for (const auto& where : callerHosts)
    if (!calleeHosts.count(where)) return false;
  return true;
}

double bruteForceFlatRatio(const SliceGraph& graph, const Placement& placement) {
  std::size_t local = 0, total = 0;
  for (const auto& c : graph.calls) {
    if (!c.caller) continue;
    ++total;
    local += bruteForceLocal(graph, placement, c);
  }
  return total == 0 ? 1.0 : static_cast<double>(local) / static_cast<double>(total);
}

}  // namespace tierslice::testing
