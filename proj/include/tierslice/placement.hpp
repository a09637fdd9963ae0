#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tierslice/depgraph.hpp"

namespace tierslice {

/// Tier assignment of every slice. Fixed entries come from @config and are
/// never touched by search.
struct Placement {
  std::map<std::string, Tier> fixed;
  std::map<std::string, Tier> searched;

  std::optional<Tier> tierOf(const std::string& slice) const;

  friend bool operator==(const Placement&, const Placement&) = default;
};

/// The @config part of a placement.
Placement fixedPlacement(const std::vector<SliceInfo>& slices);

/// Slices without a fixed tier, in declaration order. This is the gene order
/// used by search.
std::vector<std::string> unplacedSlices(const std::vector<SliceInfo>& slices);

/// Tier of each slice in declaration order. Throws MissingPlacement.
std::vector<Tier> sliceTiers(const std::vector<SliceInfo>& slices, const Placement& placement);

/// Checks that a placement fits a graph: fixed entries match @config and
/// searched entries cover exactly the unplaced slices. Throws BadInput or
/// MissingPlacement.
void checkPlacement(const std::vector<SliceInfo>& slices, const Placement& placement);

/// A call is local iff every tier the caller runs on also hosts the callee.
bool isLocalCall(Tier caller, Tier callee);

enum class Locality { Local, Remote };
enum class Direction { None, ClientToServer, ServerToClient, Mixed };

std::string_view directionName(Direction direction);

struct CallVerdict {
  CallRecord call;
  Locality locality = Locality::Local;
  Direction direction = Direction::None;
};

/// Verdicts for every resolved call made from inside a slice, in call order.
/// Calls made by shared code are not classified: shared code has no tier of
/// its own.
struct CallClassification {
  std::vector<SliceInfo> slices;
  std::vector<Tier> tiers;
  std::vector<CallVerdict> calls;
};

CallClassification classifyCalls(const SliceGraph& graph, const Placement& placement);

struct Violation {
  CallRecord call;
  std::string caller;
  std::string callee;
  Direction direction = Direction::ServerToClient;
};

struct Validity {
  bool valid = true;
  std::vector<Violation> violations;
};

/// Invalid iff some remote server-to-client call lacks @reply/@broadcast.
Validity isValid(const CallClassification& classification);
Validity isValid(const SliceGraph& graph, const Placement& placement);

std::string placementToJson(const Placement& placement);
Placement placementFromJson(const std::string& text);

}  // namespace tierslice
