#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tierslice/depgraph.hpp"
#include "tierslice/placement.hpp"
#include "tierslice/source.hpp"

namespace tierslice::testing {

std::string fixturePath(const std::string& name);
std::string readFile(const std::string& path);
std::string readFixture(const std::string& name);

/// Slice graph straight from the source of a fixture file.
SliceGraph fixtureGraph(const std::string& name);

struct CallSpec {
  int caller;  // -1 for shared code
  int callee;  // -1 for a shared function
  bool replyOrBroadcast = false;
};

/// A slice graph with the given slices and calls; only `calls` is filled.
SliceGraph makeGraph(const std::vector<SliceInfo>& slices, const std::vector<CallSpec>& calls);

struct RandomGraphOptions {
  std::size_t maxSlices = 10;
  std::size_t maxCalls = 40;
  std::size_t maxUnplaced = 10;
  double fixedShare = 0.3;
  double sharedShare = 0.1;
  double replyShare = 0.1;
};

SliceGraph randomGraph(std::mt19937_64& rng, const RandomGraphOptions& options);

/// Random tier for every unplaced slice.
Placement randomPlacement(std::mt19937_64& rng, const std::vector<SliceInfo>& slices);

/// Locality decided call by call from the tiers' membership sets, without
/// the library's classifier.
bool bruteForceLocal(const SliceGraph& graph, const Placement& placement, const CallRecord& call);

/// totalLocal / totalCalls over calls made from slices.
double bruteForceFlatRatio(const SliceGraph& graph, const Placement& placement);

}  // namespace tierslice::testing
