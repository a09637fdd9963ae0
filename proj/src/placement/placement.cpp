#include <set>

#include "json.hpp"
#include "tierslice/placement.hpp"

namespace tierslice {

namespace {

unsigned tierBits(Tier t) {
  switch (t) {
    case Tier::Client: return 1u;
    case Tier::Server: return 2u;
    case Tier::Both: return 3u;
  }
  return 0u;
}

}  // namespace

std::optional<Tier> Placement::tierOf(const std::string& slice) const {
  if (const auto it = fixed.find(slice); it != fixed.end()) return it->second;
  if (const auto it = searched.find(slice); it != searched.end()) return it->second;
  return std::nullopt;
}

Placement fixedPlacement(const std::vector<SliceInfo>& slices) {
  Placement p;
  for (const auto& s : slices)
    if (s.fixedTier) p.fixed[s.name] = *s.fixedTier;
  return p;
}

std::vector<std::string> unplacedSlices(const std::vector<SliceInfo>& slices) {
  std::vector<std::string> out;
  for (const auto& s : slices)
    if (!s.fixedTier) out.push_back(s.name);
  return out;
}

std::vector<Tier> sliceTiers(const std::vector<SliceInfo>& slices, const Placement& placement) {
  std::vector<Tier> tiers;
  tiers.reserve(slices.size());
  for (const auto& s : slices) {
    const auto t = placement.tierOf(s.name);
    if (!t) throw Error(ErrorCode::MissingPlacement, "slice '" + s.name + "' has no placement");
    tiers.push_back(*t);
  }
  return tiers;
}

void checkPlacement(const std::vector<SliceInfo>& slices, const Placement& placement) {
  std::set<std::string> names;
  for (const auto& s : slices) {
    names.insert(s.name);
    const bool inFixed = placement.fixed.count(s.name) > 0;
    const bool inSearched = placement.searched.count(s.name) > 0;
    if (!inFixed && !inSearched)
      throw Error(ErrorCode::MissingPlacement, "slice '" + s.name + "' has no placement");
    if (inFixed && inSearched)
      throw Error(ErrorCode::BadInput, "slice '" + s.name + "' is both fixed and searched");
    if (s.fixedTier && (!inFixed || placement.fixed.at(s.name) != *s.fixedTier))
      throw Error(ErrorCode::BadInput, "slice '" + s.name + "' is configured for " +
                                           std::string(tierName(*s.fixedTier)));
    if (!s.fixedTier && inFixed)
      throw Error(ErrorCode::BadInput, "slice '" + s.name + "' has no @config entry");
  }
  for (const auto* map : {&placement.fixed, &placement.searched})
    for (const auto& [name, tier] : *map)
      if (!names.count(name)) throw Error(ErrorCode::BadInput, "unknown slice '" + name + "'");
}

bool isLocalCall(Tier caller, Tier callee) {
  return (tierBits(caller) & ~tierBits(callee)) == 0;
}

std::string_view directionName(Direction direction) {
  switch (direction) {
    case Direction::None: return "none";
    case Direction::ClientToServer: return "client-to-server";
    case Direction::ServerToClient: return "server-to-client";
    case Direction::Mixed: return "mixed";
  }
  return "?";
}

CallClassification classifyCalls(const SliceGraph& graph, const Placement& placement) {
  CallClassification out;
  out.slices = graph.slices;
  out.tiers = sliceTiers(graph.slices, placement);
  for (const auto& c : graph.calls) {
    if (!c.caller) continue;
    CallVerdict v;
    v.call = c;
    if (c.callee && c.callee != c.caller) {
      const Tier from = out.tiers.at(*c.caller);
      const Tier to = out.tiers.at(*c.callee);
      if (!isLocalCall(from, to)) {
        v.locality = Locality::Remote;
        // Server code calling into a callee that does not live on the server.
        const bool serverSide = (tierBits(from) & 2u) && !(tierBits(to) & 2u);
        v.direction = serverSide ? Direction::ServerToClient : Direction::ClientToServer;
      }
    }
    out.calls.push_back(v);
  }
  return out;
}

Validity isValid(const CallClassification& classification) {
  Validity out;
  for (const auto& v : classification.calls) {
    if (v.locality != Locality::Remote) continue;
    if (v.direction != Direction::ServerToClient && v.direction != Direction::Mixed) continue;
    if (v.call.replyOrBroadcast) continue;
    out.valid = false;
    out.violations.push_back({v.call, ownerLabel(v.call.caller, classification.slices),
                              ownerLabel(v.call.callee, classification.slices), v.direction});
  }
  return out;
}

Validity isValid(const SliceGraph& graph, const Placement& placement) {
  return isValid(classifyCalls(graph, placement));
}

std::string placementToJson(const Placement& placement) {
  nlohmann::ordered_json j;
  j["fixed"] = nlohmann::ordered_json::object();
  j["searched"] = nlohmann::ordered_json::object();
  for (const auto& [name, tier] : placement.fixed) j["fixed"][name] = tierName(tier);
  for (const auto& [name, tier] : placement.searched) j["searched"][name] = tierName(tier);
  return j.dump(2) + "\n";
}

Placement placementFromJson(const std::string& text) {
  Placement p;
  try {
    const auto j = nlohmann::json::parse(text);
    for (const char* part : {"fixed", "searched"}) {
      if (!j.contains(part)) continue;
      for (const auto& [name, value] : j.at(part).items()) {
        const auto tier = tierFromName(value.get<std::string>());
        if (!tier) throw Error(ErrorCode::BadInput, "placement: bad tier for '" + name + "'");
        if (std::string(part) == "fixed") {
          if (*tier == Tier::Both)
            throw Error(ErrorCode::BadInput, "placement: fixed slice '" + name + "' cannot be both");
          p.fixed[name] = *tier;
        } else {
          p.searched[name] = *tier;
        }
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadInput, std::string("placement: ") + e.what());
  }
  return p;
}

}  // namespace tierslice
