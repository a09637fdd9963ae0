#include <cmath>
#include <map>

#include "json.hpp"
#include "tierslice/fitness.hpp"

namespace tierslice {

namespace {

struct Counts {
  std::size_t local = 0;
  std::size_t total = 0;
};

std::vector<Counts> countsBySlice(const CallClassification& c) {
  std::vector<Counts> counts(c.slices.size());
  for (const auto& v : c.calls) {
    auto& row = counts.at(*v.call.caller);
    ++row.total;
    row.local += v.locality == Locality::Local;
  }
  return counts;
}

double fraction(const Counts& c) {
  return c.total == 0 ? 1.0 : static_cast<double>(c.local) / static_cast<double>(c.total);
}

double weightedMean(const std::vector<Counts>& counts) {
  double numerator = 0.0;
  double denominator = 0.0;
  for (const auto& c : counts) {
    numerator += fraction(c) * static_cast<double>(c.total);
    denominator += static_cast<double>(c.total);
  }
  return denominator == 0.0 ? 1.0 : numerator / denominator;
}

bool serverCallsOffServer(Tier caller, Tier callee) {
  const bool callerOnServer = caller != Tier::Client;
  const bool calleeOnServer = callee != Tier::Client;
  return callerOnServer && !calleeOnServer;
}

}  // namespace

double sliceOffline(const std::string& slice, const CallClassification& classification) {
  const auto counts = countsBySlice(classification);
  for (std::size_t i = 0; i < classification.slices.size(); ++i)
    if (classification.slices[i].name == slice) return fraction(counts[i]);
  return 1.0;
}

double programOffline(const CallClassification& classification) {
  return weightedMean(countsBySlice(classification));
}

FitnessReport evaluate(const SliceGraph& graph, const Placement& placement) {
  const auto classification = classifyCalls(graph, placement);
  const auto counts = countsBySlice(classification);
  FitnessReport report;
  for (std::size_t i = 0; i < graph.slices.size(); ++i)
    report.perSlice.push_back({graph.slices[i].name, classification.tiers[i], fraction(counts[i]),
                               counts[i].local, counts[i].total});
  report.program = weightedMean(counts);
  auto validity = isValid(classification);
  report.valid = validity.valid;
  report.violations = std::move(validity.violations);
  report.unresolvedCalls = graph.unresolvedCalls;
  return report;
}

long percent(double fraction) { return std::lround(fraction * 100.0); }

std::string fitnessToJson(const FitnessReport& report) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["program"] = report.program;
  j["percent"] = percent(report.program);
  j["valid"] = report.valid;
  j["slices"] = ordered_json::array();
  for (const auto& s : report.perSlice)
    j["slices"].push_back({{"name", s.name},
                           {"tier", tierName(s.tier)},
                           {"offline", s.offline},
                           {"localCalls", s.localCalls},
                           {"totalCalls", s.totalCalls}});
  j["violations"] = ordered_json::array();
  for (const auto& v : report.violations)
    j["violations"].push_back({{"caller", v.caller},
                               {"callee", v.callee},
                               {"line", v.call.pos.line},
                               {"column", v.call.pos.column},
                               {"direction", directionName(v.direction)}});
  j["unresolvedCalls"] = report.unresolvedCalls;
  return j.dump(2) + "\n";
}

OfflineAvailability::OfflineAvailability(const SliceGraph& graph)
    : slices_(graph.slices.size()), totals_(graph.slices.size(), 0) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> pairs;
  for (const auto& c : graph.calls) {
    if (!c.caller) continue;
    ++totals_[*c.caller];
    // Intra-slice and shared callees are local under every placement.
    if (c.callee && c.callee != c.caller) ++pairs[{*c.caller, *c.callee}];
  }
  for (const auto& [key, count] : pairs) remotePairs_.push_back({key.first, key.second, count});
}

double OfflineAvailability::score(const std::vector<Tier>& tiers) const {
  // Same arithmetic as programOffline, without building a classification.
  thread_local std::vector<std::size_t> remote;
  remote.assign(slices_, 0);
  for (const auto& p : remotePairs_)
    if (!isLocalCall(tiers[p.caller], tiers[p.callee])) remote[p.caller] += p.count;
  double numerator = 0.0;
  double denominator = 0.0;
  for (std::size_t i = 0; i < slices_; ++i) {
    const Counts c{totals_[i] - remote[i], totals_[i]};
    numerator += fraction(c) * static_cast<double>(c.total);
    denominator += static_cast<double>(c.total);
  }
  return denominator == 0.0 ? 1.0 : numerator / denominator;
}

ValidityCheck::ValidityCheck(const SliceGraph& graph) {
  std::map<std::pair<std::size_t, std::size_t>, bool> seen;
  for (const auto& c : graph.calls) {
    if (!c.caller || !c.callee || c.callee == c.caller || c.replyOrBroadcast) continue;
    if (seen.emplace(std::make_pair(*c.caller, *c.callee), true).second)
      unannotated_.emplace_back(*c.caller, *c.callee);
  }
}

bool ValidityCheck::operator()(const std::vector<Tier>& tiers) const {
  for (const auto& [caller, callee] : unannotated_)
    if (serverCallsOffServer(tiers[caller], tiers[callee])) return false;
  return true;
}

}  // namespace tierslice
