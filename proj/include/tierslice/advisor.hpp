#pragma once

#include <string>
#include <vector>

#include "tierslice/search.hpp"
#include "tierslice/source.hpp"

namespace tierslice {

enum class AdviceKind { ReplicateDeclaration, MoveFunctionToNewSlice };

struct Advice {
  AdviceKind kind = AdviceKind::ReplicateDeclaration;
  /// Declared variable or function name.
  std::string target;
  /// Slice that owns the target.
  std::string slice;
  /// Incoming calls of a function under the advising placement.
  std::size_t localIncoming = 0;
  std::size_t remoteIncoming = 0;
  /// Functions that read a declaration and are mostly called remotely.
  std::vector<std::string> dependentFunctions;
  SourcePos pos;
};

struct AdvisorConfig {
  /// Minimum (R - L) / (R + L) for a move.
  double moveThreshold = 0.2;

  void validate() const;
};

/// Incoming call counts of one function under a placement.
struct IncomingCalls {
  std::size_t local = 0;
  std::size_t remote = 0;
};

/// Per FunctionEntry node. Calls made by shared code are not counted.
std::vector<IncomingCalls> incomingCalls(const DependenceGraph& graph, const Placement& placement);

/// Slice-level data declarations (outside any function, not @replicated)
/// read locally by a function that has more remote than local callers.
std::vector<Advice> adviseReplication(const DependenceGraph& graph, const Placement& placement);

/// Top-level functions of fixed slices with R > L and (R - L)/(R + L) > θ.
std::vector<Advice> adviseFunctionMoves(const DependenceGraph& graph, const Placement& placement,
                                        const AdvisorConfig& config);

/// Both kinds, replication first.
std::vector<Advice> advise(const DependenceGraph& graph, const Placement& placement,
                           const AdvisorConfig& config);

/// Adds @replicated to advised declarations and moves advised functions into
/// fresh unplaced slices named auto_<function>. Returns a resolved program.
/// Throws TargetNotFound.
SourceProgram applyAdvice(SourceProgram program, const std::vector<Advice>& advice);

struct RefineStep {
  double fitness = 0.0;
  std::size_t slices = 0;
  std::size_t replicateAdvice = 0;
  std::size_t moveAdvice = 0;
  std::size_t generationsUsed = 0;
};

struct RefineResult {
  SourceProgram program;
  Placement placement;
  double fitness = 0.0;
  bool valid = false;
  /// Number of times advice was applied.
  std::size_t iterations = 0;
  std::vector<RefineStep> steps;
  /// Advice left over under the final placement.
  std::vector<Advice> remainingAdvice;
};

/// search, advise, apply; repeated until no advice is left, fitness reaches
/// 1, or maxIterations applications were made.
RefineResult refineLoop(SourceProgram program, const GaConfig& gaConfig,
                        const AdvisorConfig& advisorConfig, std::size_t maxIterations);

/// Text report in the format
///   Application level of offline availability: NN %
///   Consider making following declarations replicated
///         - var <name>
///   Consider moving following functions to new slice:
///         - <name>
/// Empty sections are left out.
std::string renderAdviceReport(double fitness, const std::vector<Advice>& advice);

std::string adviceToJson(double fitness, const std::vector<Advice>& advice);

}  // namespace tierslice
