#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tierslice/placement.hpp"

namespace tierslice {

struct SliceFitness {
  std::string name;
  Tier tier = Tier::Client;
  double offline = 1.0;
  std::size_t localCalls = 0;
  std::size_t totalCalls = 0;
};

struct FitnessReport {
  std::vector<SliceFitness> perSlice;
  double program = 1.0;
  bool valid = true;
  std::vector<Violation> violations;
  std::size_t unresolvedCalls = 0;
};

/// localCalls/calls of one slice; 1.0 for a slice that makes no calls.
double sliceOffline(const std::string& slice, const CallClassification& classification);

/// Call-weighted mean of the per-slice values; 1.0 when nothing is called.
double programOffline(const CallClassification& classification);

FitnessReport evaluate(const SliceGraph& graph, const Placement& placement);

/// Nearest integer percentage, as printed in reports.
long percent(double fraction);

std::string fitnessToJson(const FitnessReport& report);

/// A scalar to maximise over per-slice tier vectors (declaration order).
class Objective {
 public:
  virtual ~Objective() = default;
  virtual std::string_view name() const = 0;
  virtual double score(const std::vector<Tier>& tiers) const = 0;
};

/// programOffline precompiled for one slice graph. Calls with the same
/// (caller, callee) pair are folded together.
class OfflineAvailability final : public Objective {
 public:
  explicit OfflineAvailability(const SliceGraph& graph);

  std::string_view name() const override { return "offline-availability"; }
  double score(const std::vector<Tier>& tiers) const override;

 private:
  struct Pair {
    std::size_t caller;
    std::size_t callee;
    std::size_t count;
  };
  std::size_t slices_ = 0;
  std::vector<Pair> remotePairs_;
  std::vector<std::size_t> totals_;
};

/// isValid precompiled for one slice graph.
class ValidityCheck {
 public:
  explicit ValidityCheck(const SliceGraph& graph);
  bool operator()(const std::vector<Tier>& tiers) const;

 private:
  std::vector<std::pair<std::size_t, std::size_t>> unannotated_;
};

}  // namespace tierslice
