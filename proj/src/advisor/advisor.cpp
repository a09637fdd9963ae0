#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "json.hpp"
#include "tierslice/advisor.hpp"
#include "tierslice/frontend.hpp"

namespace tierslice {

void AdvisorConfig::validate() const {
  if (!(moveThreshold >= 0.0 && moveThreshold < 1.0))
    throw Error(ErrorCode::BadInput, "move threshold must be in [0,1)");
}

std::vector<IncomingCalls> incomingCalls(const DependenceGraph& graph,
                                         const Placement& placement) {
  const auto tiers = sliceTiers(graph.slices, placement);
  std::vector<IncomingCalls> in(graph.nodes.size());
  for (const auto& e : graph.edges) {
    if (e.kind != PdgEdgeKind::Call) continue;
    const PdgNode& site = graph.nodes.at(e.from);
    const PdgNode& callee = graph.nodes.at(e.to);
    if (!site.owner) continue;
    const bool local = !callee.owner || site.owner == callee.owner ||
                       isLocalCall(tiers[*site.owner], tiers[*callee.owner]);
    ++(local ? in[callee.id].local : in[callee.id].remote);
  }
  return in;
}

std::vector<Advice> adviseReplication(const DependenceGraph& graph, const Placement& placement) {
  const auto tiers = sliceTiers(graph.slices, placement);
  const auto in = incomingCalls(graph, placement);
  std::vector<Advice> out;
  for (const auto& d : graph.nodes) {
    if (d.kind != PdgNodeKind::Declaration || !d.owner || d.function) continue;
    if (d.has(AnnotationKind::Replicated)) continue;
    Advice advice;
    std::set<std::uint32_t> functions;
    for (const auto& e : graph.edges) {
      if (e.kind != PdgEdgeKind::Data || e.from != d.id) continue;
      const PdgNode& use = graph.nodes.at(e.to);
      // Only readers that reach the data without leaving their tier.
      if (!use.owner || !use.function) continue;
      if (use.owner != d.owner && !isLocalCall(tiers[*use.owner], tiers[*d.owner])) continue;
      const auto& counts = in[*use.function];
      if (counts.remote > counts.local && functions.insert(*use.function).second)
        advice.dependentFunctions.push_back(graph.nodes[*use.function].name);
    }
    if (functions.empty()) continue;
    advice.kind = AdviceKind::ReplicateDeclaration;
    advice.target = d.name;
    advice.slice = graph.slices[*d.owner].name;
    advice.pos = d.span.begin;
    out.push_back(std::move(advice));
  }
  return out;
}

std::vector<Advice> adviseFunctionMoves(const DependenceGraph& graph, const Placement& placement,
                                        const AdvisorConfig& config) {
  config.validate();
  const auto in = incomingCalls(graph, placement);
  std::vector<Advice> out;
  for (const auto& f : graph.nodes) {
    if (f.kind != PdgNodeKind::FunctionEntry || !f.owner || f.function) continue;
    if (!graph.slices[*f.owner].fixedTier) continue;
    const auto [local, remote] = in[f.id];
    if (remote <= local) continue;
    const double difference =
        static_cast<double>(remote - local) / static_cast<double>(remote + local);
    if (difference <= config.moveThreshold) continue;
    Advice advice;
    advice.kind = AdviceKind::MoveFunctionToNewSlice;
    advice.target = f.name;
    advice.slice = graph.slices[*f.owner].name;
    advice.localIncoming = local;
    advice.remoteIncoming = remote;
    advice.pos = f.span.begin;
    out.push_back(std::move(advice));
  }
  return out;
}

std::vector<Advice> advise(const DependenceGraph& graph, const Placement& placement,
                           const AdvisorConfig& config) {
  auto out = adviseReplication(graph, placement);
  auto moves = adviseFunctionMoves(graph, placement, config);
  out.insert(out.end(), std::make_move_iterator(moves.begin()),
             std::make_move_iterator(moves.end()));
  return out;
}

namespace {

[[noreturn]] void notFound(const Advice& a, const std::string& what) {
  throw Error(ErrorCode::TargetNotFound,
              what + " '" + a.target + "' not found in slice '" + a.slice + "'");
}

SliceDecl& sliceNamed(SourceProgram& program, const Advice& a) {
  const auto index = program.findSlice(a.slice);
  if (!index) throw Error(ErrorCode::TargetNotFound, "slice '" + a.slice + "' not found");
  return program.slices[*index];
}

void replicate(SourceProgram& program, const Advice& a) {
  auto& body = sliceNamed(program, a).body;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i].kind != StmtKind::VarDecl) continue;
    const auto& bindings = body[i].bindings;
    const auto hit = std::find_if(bindings.begin(), bindings.end(),
                                  [&](const VarBinding& b) { return b.name == a.target; });
    if (hit == bindings.end()) continue;
    // One statement per binding, so only the advised variable changes.
    if (bindings.size() > 1) {
      std::vector<Stmt> parts;
      for (const auto& b : bindings) {
        Stmt part = body[i];
        part.bindings = {b};
        parts.push_back(std::move(part));
      }
      const auto offset = static_cast<std::size_t>(hit - bindings.begin());
      body.erase(body.begin() + static_cast<std::ptrdiff_t>(i));
      body.insert(body.begin() + static_cast<std::ptrdiff_t>(i), parts.begin(), parts.end());
      i += offset;
    }
    if (!hasAnnotation(body[i].annotations, AnnotationKind::Replicated))
      body[i].annotations.push_back({AnnotationKind::Replicated, {}, body[i].span});
    return;
  }
  notFound(a, "declaration");
}

void moveToNewSlice(SourceProgram& program, const Advice& a) {
  auto& body = sliceNamed(program, a).body;
  const auto it = std::find_if(body.begin(), body.end(), [&](const Stmt& s) {
    return s.kind == StmtKind::FunctionDecl && s.name == a.target;
  });
  if (it == body.end()) notFound(a, "function");
  Stmt function = std::move(*it);
  body.erase(it);

  std::string name = "auto_" + a.target;
  for (int suffix = 2; program.findSlice(name); ++suffix)
    name = "auto_" + a.target + "_" + std::to_string(suffix);
  SliceDecl slice;
  slice.name = name;
  slice.span = function.span;
  slice.annotations.push_back({AnnotationKind::Slice, {{name, ""}}, function.span});
  slice.body.push_back(std::move(function));
  program.slices.push_back(std::move(slice));
  program.layout.push_back({true, program.slices.size() - 1});
}

std::string formatPercent(double fitness) { return std::to_string(percent(fitness)) + " %"; }

}  // namespace

SourceProgram applyAdvice(SourceProgram program, const std::vector<Advice>& advice) {
  for (const auto& a : advice) {
    if (a.kind == AdviceKind::ReplicateDeclaration)
      replicate(program, a);
    else
      moveToNewSlice(program, a);
  }
  reindex(program);
  return resolveCalls(std::move(program));
}

RefineResult refineLoop(SourceProgram program, const GaConfig& gaConfig,
                        const AdvisorConfig& advisorConfig, std::size_t maxIterations) {
  if (maxIterations < 1) throw Error(ErrorCode::BadInput, "at least one iteration is required");
  advisorConfig.validate();
  RefineResult result;
  program = resolveCalls(std::move(program));
  for (;;) {
    const auto graph = buildPdg(program);
    const auto sliceGraph = collapseToSliceGraph(graph);
    const auto found = run(sliceGraph, fixedPlacement(sliceGraph.slices), gaConfig);
    auto advice = advise(graph, found.bestPlacement, advisorConfig);

    RefineStep step;
    step.fitness = found.bestFitness;
    step.slices = program.slices.size();
    step.generationsUsed = found.generationsUsed;
    for (const auto& a : advice)
      ++(a.kind == AdviceKind::ReplicateDeclaration ? step.replicateAdvice : step.moveAdvice);
    result.steps.push_back(step);
    result.placement = found.bestPlacement;
    result.fitness = found.bestFitness;
    result.valid = found.valid;

    if (advice.empty() || found.bestFitness >= 1.0 || result.iterations == maxIterations) {
      result.remainingAdvice = std::move(advice);
      break;
    }
    program = applyAdvice(std::move(program), advice);
    ++result.iterations;
  }
  result.program = std::move(program);
  return result;
}

std::string renderAdviceReport(double fitness, const std::vector<Advice>& advice) {
  std::ostringstream out;
  out << "Application level of offline availability: " << formatPercent(fitness) << "\n";
  const auto section = [&](AdviceKind kind, const char* header, const char* prefix) {
    bool first = true;
    for (const auto& a : advice) {
      if (a.kind != kind) continue;
      if (first) out << header << "\n";
      first = false;
      out << "      - " << prefix << a.target << "\n";
    }
  };
  section(AdviceKind::ReplicateDeclaration, "Consider making following declarations replicated",
          "var ");
  section(AdviceKind::MoveFunctionToNewSlice, "Consider moving following functions to new slice:",
          "");
  return out.str();
}

std::string adviceToJson(double fitness, const std::vector<Advice>& advice) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["fitness"] = fitness;
  j["percent"] = percent(fitness);
  j["replicate"] = ordered_json::array();
  j["move"] = ordered_json::array();
  for (const auto& a : advice) {
    if (a.kind == AdviceKind::ReplicateDeclaration) {
      j["replicate"].push_back({{"name", a.target},
                                {"slice", a.slice},
                                {"line", a.pos.line},
                                {"functions", a.dependentFunctions}});
    } else {
      j["move"].push_back({{"name", a.target},
                           {"slice", a.slice},
                           {"line", a.pos.line},
                           {"localIncoming", a.localIncoming},
                           {"remoteIncoming", a.remoteIncoming}});
    }
  }
  return j.dump(2) + "\n";
}

}  // namespace tierslice
